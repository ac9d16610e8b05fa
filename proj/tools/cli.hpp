#pragma once

// Command-line front end. run() is usable in-process (tests) and from main().
// Exit codes: 0 ok, 2 invalid input, 3 numeric domain, 4 tolerance unreachable.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <bezapprox/bezapprox.hpp>
#include <bezapprox/io.hpp>

namespace bezapprox::cli {

enum ExitCode { kOk = 0, kValidation = 2, kNumeric = 3, kUnreachable = 4 };

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::DuplicateParams:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DegenerateInterval:
    case ErrorKind::DegenerateSegment:
      return kValidation;
    case ErrorKind::ToleranceUnreachable:
      return kUnreachable;
    default:
      return kNumeric;
  }
}

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::InvalidArgument, "cannot open input file " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

inline ReductionMethod parse_method(const std::string& name, double tau, const std::vector<double>& params) {
  if (name == "matching") return ReductionMethod::matching(params);
  if (!params.empty()) fail(ErrorKind::InvalidArgument, "--params applies to the matching method only");
  if (name == "least-squares") return ReductionMethod::least_squares();
  if (name == "taylor") return ReductionMethod::taylor(tau);
  fail(ErrorKind::InvalidArgument, "unknown reduction method \"" + name + "\"");
}

inline MetricKind parse_metric(const std::string& name, int samples) {
  if (name == "ctrlpoint") return MetricKind::control_point();
  if (name == "l2") return MetricKind::l2();
  if (name == "frobenius") return MetricKind::frobenius();
  if (name == "max") return MetricKind::max_sampled(samples);
  if (name == "hausdorff") return MetricKind::hausdorff_sampled(samples);
  fail(ErrorKind::InvalidArgument, "unknown metric \"" + name + "\"");
}

inline Feature parse_feature(const std::string& name) {
  for (Feature f : all_features()) {
    if (to_string(f) == name) return f;
  }
  fail(ErrorKind::InvalidArgument, "unknown feature \"" + name + "\"");
}

inline SearchKind parse_search(const std::string& name) {
  if (name == "linear") return SearchKind::Linear;
  if (name == "binary") return SearchKind::Binary;
  fail(ErrorKind::InvalidArgument, "unknown search \"" + name + "\"");
}

inline io::json witness_json(double value, const char* key, const Witness& w) {
  return io::json{{key, value}, {"segment", w.segment}, {"t", w.t_local}, {"tGlobal", w.t_global}};
}

}  // namespace detail

struct Options {
  std::string input = "-";
  int to_degree = -1;
  std::string method = "matching";
  double tau = kDefaultTaylorOffset;
  std::vector<double> params;

  int target_degree = 2;
  std::string metric = "ctrlpoint";
  int samples = kDefaultMetricSamples;
  double tolerance = 0.0;
  std::string search;
  std::vector<double> partition;
  bool rule_of_thumb = false;
  int max_segments = kDefaultMaxSegments;
  double min_width = kDefaultMinWidth;

  bool length = false;
  bool max_curvature = false;
  std::vector<double> point;
  std::vector<double> segment;
  std::vector<double> halfspace;

  std::string study;
  std::uint64_t seed = 1;
  int trials = kDefaultTrials;
  std::vector<int> degrees;
  std::vector<int> segments;
  std::vector<double> tolerances;
  std::vector<std::string> methods{"matching"};
  std::vector<std::string> features;
  std::vector<std::string> searches{"linear", "binary"};
  bool normalize = false;
  int dense_samples = kDefaultDenseSamples;
  int jobs = 1;
  std::string out;
};

inline void cmd_elevate(const Options& o, std::istream& in, std::ostream& out) {
  const BezierCurve curve = io::curve_from_json(io::parse_text(detail::read_input(o.input, in)));
  out << io::curve_to_json(elevate(curve, o.to_degree)).dump(2) << '\n';
}

inline void cmd_reduce(const Options& o, std::istream& in, std::ostream& out) {
  const BezierCurve curve = io::curve_from_json(io::parse_text(detail::read_input(o.input, in)));
  const ReductionMethod method = detail::parse_method(o.method, o.tau, o.params);
  out << io::curve_to_json(reduce(curve, o.to_degree, method)).dump(2) << '\n';
}

inline void cmd_approx(const Options& o, std::istream& in, std::ostream& out, bool tolerance_given,
                       bool method_given) {
  const BezierCurve curve = io::curve_from_json(io::parse_text(detail::read_input(o.input, in)));
  const MetricKind metric = detail::parse_metric(o.metric, o.samples);

  std::string mode = o.search;
  if (mode.empty() && !o.partition.empty()) mode = "partition";
  if (o.rule_of_thumb) {
    if (!mode.empty()) fail(ErrorKind::InvalidArgument, "--rule-of-thumb cannot be combined with --search/--partition");
    if (method_given && o.method != "matching") {
      fail(ErrorKind::InvalidArgument, "--rule-of-thumb uses the matching method");
    }
    mode = "rule-of-thumb";
  }
  if (mode.empty()) {
    fail(ErrorKind::InvalidArgument, "choose one of --search linear|binary, --search partition, --rule-of-thumb");
  }

  io::ChainDocument doc;
  doc.metric = to_string(metric);
  if (mode == "linear" || mode == "binary") {
    if (!tolerance_given) fail(ErrorKind::InvalidArgument, "--search " + mode + " needs --tolerance");
    if (!o.partition.empty()) fail(ErrorKind::InvalidArgument, "--partition only applies to --search partition");
    AdaptiveConfig ac;
    ac.target_degree = o.target_degree;
    ac.method = detail::parse_method(o.method, o.tau, o.params);
    ac.metric = metric;
    ac.tolerance = o.tolerance;
    ac.max_segments = o.max_segments;
    ac.min_width = o.min_width;
    doc.chain = mode == "linear" ? adaptive_linear_search(curve, ac) : adaptive_binary_search(curve, ac);
    doc.method = to_string(ac.method.kind);
    doc.tolerance = o.tolerance;
  } else if (mode == "partition" || mode == "rule-of-thumb") {
    if (tolerance_given) fail(ErrorKind::InvalidArgument, "--tolerance only applies to --search linear|binary");
    ReductionMethod method = ReductionMethod::matching();
    Partition partition;
    if (mode == "partition") {
      if (o.partition.empty()) fail(ErrorKind::InvalidArgument, "--search partition needs --partition");
      method = detail::parse_method(o.method, o.tau, o.params);
      partition.params = o.partition;
    } else {
      partition = rule_of_thumb_partition(curve.degree(), o.target_degree);
    }
    doc.chain = approximate_over_partition(curve, o.target_degree, partition, method);
    doc.chain.distances = measure_chain(curve, doc.chain, metric);
    doc.method = to_string(method.kind);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown search \"" + mode + "\"");
  }
  out << io::chain_to_json(doc).dump(2) << '\n';
}

inline void cmd_features(const Options& o, std::istream& in, std::ostream& out) {
  const io::ChainDocument doc = io::chain_or_curve_from_json(io::parse_text(detail::read_input(o.input, in)));
  const int dim = doc.chain.segments.front().dim();
  auto point = [&](const std::vector<double>& v, std::size_t at) {
    if (dim != 2) fail(ErrorKind::DimensionMismatch, "feature queries take planar coordinates");
    return Point(Eigen::Vector2d(v[at], v[at + 1]));
  };

  FeatureQuery q;
  q.length = o.length;
  q.max_curvature = o.max_curvature;
  if (!o.point.empty()) q.point = point(o.point, 0);
  if (!o.segment.empty()) q.segment = std::make_pair(point(o.segment, 0), point(o.segment, 2));
  if (!o.halfspace.empty()) q.halfspace = Halfspace{point(o.halfspace, 0), point(o.halfspace, 2)};
  if (!q.length && !q.max_curvature && !q.point && !q.segment && !q.halfspace) {
    fail(ErrorKind::InvalidArgument, "no feature requested");
  }

  const FeatureReport r = chain_features(doc.chain, q);
  io::json j = io::json::object();
  if (r.length) j["length"] = *r.length;
  if (r.max_curvature) j["maxCurvature"] = detail::witness_json(r.max_curvature->first, "value", r.max_curvature->second);
  if (r.dist_to_point) j["distToPoint"] = detail::witness_json(r.dist_to_point->first, "distance", r.dist_to_point->second);
  if (r.dist_to_segment) {
    io::json s = detail::witness_json(r.dist_to_segment->distance, "distance", r.dist_to_segment->at);
    s["k"] = r.dist_to_segment->k;
    j["distToSegment"] = std::move(s);
  }
  if (r.halfspace_violations) {
    io::json cells = io::json::array();
    for (const Interval& iv : *r.halfspace_violations) cells.push_back({iv.lo, iv.hi});
    j["halfspaceViolations"] = std::move(cells);
  }
  out << j.dump(2) << '\n';
}

inline void cmd_experiment(const Options& o, std::ostream& out) {
  TrialConfig config;
  config.seed = o.seed;
  config.trials = o.trials;
  config.dense_samples = o.dense_samples;
  config.jobs = o.jobs;

  std::ostringstream csv;
  if (o.study == "error") {
    ErrorStudySpec spec;
    spec.target_degree = o.target_degree;
    spec.methods.clear();
    for (const std::string& m : o.methods) spec.methods.push_back(detail::parse_method(m, o.tau, {}));
    if (!o.features.empty()) {
      spec.features.clear();
      for (const std::string& f : o.features) spec.features.push_back(detail::parse_feature(f));
    }
    spec.segment_counts = o.segments.empty() ? std::vector<int>{4, 8, 12, 16} : o.segments;
    if (!o.tolerances.empty()) fail(ErrorKind::InvalidArgument, "--tolerances applies to the scaling study");
    const std::vector<int> degrees = o.degrees.empty() ? std::vector<int>{5} : o.degrees;
    config.normalize_variance = o.normalize;
    bool header = true;
    for (int n : degrees) {
      config.degree = n;
      write_error_csv(csv, run_error_study(config, spec), o.seed, header);
      header = false;
    }
  } else if (o.study == "scaling") {
    ScalingStudySpec spec;
    spec.target_degree = o.target_degree;
    if (o.methods.size() != 1) fail(ErrorKind::InvalidArgument, "the scaling study takes a single method");
    spec.method = detail::parse_method(o.methods.front(), o.tau, {});
    spec.metric = detail::parse_metric(o.metric, o.samples);
    spec.max_segments = o.max_segments;
    if (!o.degrees.empty()) spec.degrees = o.degrees;
    if (!o.tolerances.empty()) spec.tolerances = o.tolerances;
    if (!o.segments.empty()) fail(ErrorKind::InvalidArgument, "--segments applies to the error study");
    spec.searches.clear();
    for (const std::string& s : o.searches) spec.searches.push_back(detail::parse_search(s));
    write_scaling_csv(csv, run_scaling_study(config, spec), spec.method, o.seed);
  } else {
    fail(ErrorKind::InvalidArgument, "--study must be error or scaling");
  }

  if (o.out.empty() || o.out == "-") {
    out << csv.str();
  } else {
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorKind::InvalidArgument, "cannot write " + o.out);
    file << csv.str();
    if (!file) fail(ErrorKind::InvalidArgument, "failed writing " + o.out);
  }
}

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Piecewise low-degree approximation of Bezier curves", "bezapprox"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Curve JSON file, - for standard input");
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "matching | least-squares | taylor");
    sub->add_option("--tau", o.tau, "Taylor expansion offset");
    sub->add_option("--params", o.params, "Matching parameters (comma separated); default uniform")->delimiter(',');
  };

  CLI::App* elevate_cmd = app.add_subcommand("elevate", "Degree elevation of a curve");
  add_input(elevate_cmd);
  elevate_cmd->add_option("--to-degree", o.to_degree, "Target degree")->required();

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "Degree reduction of a curve");
  add_input(reduce_cmd);
  reduce_cmd->add_option("--to-degree", o.to_degree, "Target degree")->required();
  add_method(reduce_cmd);

  CLI::App* approx_cmd = app.add_subcommand("approx", "Piecewise approximation by low-degree segments");
  add_input(approx_cmd);
  approx_cmd->add_option("--target-degree", o.target_degree, "Segment degree");
  add_method(approx_cmd);
  approx_cmd->add_option("--metric", o.metric, "ctrlpoint | l2 | frobenius | max | hausdorff");
  approx_cmd->add_option("--samples", o.samples, "Samples for the max/hausdorff metrics");
  CLI::Option* tol_opt = approx_cmd->add_option("--tolerance", o.tolerance, "Per-segment distance bound");
  approx_cmd->add_option("--search", o.search, "linear | binary | partition");
  approx_cmd->add_option("--partition", o.partition, "Breakpoints 0,...,1 for --search partition")->delimiter(',');
  approx_cmd->add_flag("--rule-of-thumb", o.rule_of_thumb, "Uniform partition with 3(n-1) quadratic or 6(n-1) linear segments");
  approx_cmd->add_option("--max-segments", o.max_segments, "Search gives up beyond this many segments");
  approx_cmd->add_option("--min-width", o.min_width, "Binary search gives up below this segment width");

  CLI::App* features_cmd = app.add_subcommand("features", "Closed-form features of a chain or a degree <= 2 curve");
  add_input(features_cmd);
  features_cmd->add_flag("--length", o.length, "Arc length");
  features_cmd->add_flag("--max-curvature", o.max_curvature, "Maximum absolute curvature (capped at 1000)");
  features_cmd->add_option("--dist-to-point", o.point, "x y")->expected(2)->allow_extra_args();
  features_cmd->add_option("--dist-to-segment", o.segment, "x0 y0 x1 y1")->expected(4)->allow_extra_args();
  features_cmd->add_option("--halfspace", o.halfspace, "ax ay bx by: violations of a.(x - b) <= 0")
      ->expected(4)
      ->allow_extra_args();

  CLI::App* exp_cmd = app.add_subcommand("experiment", "Random-curve studies written as CSV");
  exp_cmd->add_option("--study", o.study, "error | scaling")->required();
  exp_cmd->add_option("--seed", o.seed, "Generator seed");
  exp_cmd->add_option("--trials", o.trials, "Trials per cell");
  exp_cmd->add_option("--degrees", o.degrees, "Curve degrees (error: 5, scaling: 3..9)")->delimiter(',');
  exp_cmd->add_option("--segments", o.segments, "Error study: uniform segment counts (4,8,12,16)")->delimiter(',');
  exp_cmd->add_option("--tolerances", o.tolerances, "Scaling study: descending tolerances (0.01)")->delimiter(',');
  exp_cmd->add_option("--methods", o.methods, "Reduction methods")->delimiter(',');
  exp_cmd->add_option("--tau", o.tau, "Taylor expansion offset");
  exp_cmd->add_option("--features", o.features, "Error study: length,dist_to_point,dist_to_line,max_curvature (all)")
      ->delimiter(',');
  exp_cmd->add_option("--search", o.searches, "Scaling study: linear,binary")->delimiter(',');
  exp_cmd->add_option("--target-degree", o.target_degree, "Segment degree");
  exp_cmd->add_option("--metric", o.metric, "Scaling study metric");
  exp_cmd->add_option("--max-segments", o.max_segments, "Scaling study search limit");
  exp_cmd->add_flag("--normalize", o.normalize, "Error study: unit-variance control points");
  exp_cmd->add_option("--dense-samples", o.dense_samples, "Samples for the ground truth");
  exp_cmd->add_option("--jobs", o.jobs, "Worker threads");
  exp_cmd->add_option("--out", o.out, "Output CSV file, - for standard output");

  std::vector<std::string> storage{"bezapprox"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  try {
    if (elevate_cmd->parsed()) cmd_elevate(o, in, out);
    else if (reduce_cmd->parsed()) cmd_reduce(o, in, out);
    else if (approx_cmd->parsed()) cmd_approx(o, in, out, tol_opt->count() > 0, approx_cmd->get_option("--method")->count() > 0);
    else if (features_cmd->parsed()) cmd_features(o, in, out);
    else if (exp_cmd->parsed()) cmd_experiment(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}

}  // namespace bezapprox::cli
