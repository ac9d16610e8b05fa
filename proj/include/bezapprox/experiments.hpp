#pragma once

// Monte Carlo studies over random Bézier curves: normalized feature errors of
// piecewise approximations against dense-sampled ground truth, and segment
// counts of the adaptive searches. Trials are keyed by (seed, index) through a
// counter-based generator, so results do not depend on worker count.

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "features.hpp"

namespace bezapprox {

inline constexpr int kDefaultTrials = 200;
inline constexpr int kDefaultDenseSamples = 100000;

struct TrialConfig {
  std::uint64_t seed = 1;
  int trials = kDefaultTrials;
  int degree = 5;
  int dim = 2;
  bool normalize_variance = false;
  int dense_samples = kDefaultDenseSamples;
  int jobs = 1;

  void validate() const {
    if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
    if (dense_samples < 1000) fail(ErrorKind::InvalidArgument, "dense sample count must be at least 1000");
    if (dim != 2) fail(ErrorKind::InvalidArgument, "studies use planar curves");
    if (degree < 0) fail(ErrorKind::InvalidArgument, "degree must be nonnegative");
    if (normalize_variance && degree < 1) {
      fail(ErrorKind::InvalidArgument, "variance normalization needs at least two control points");
    }
    if (jobs < 1) fail(ErrorKind::InvalidArgument, "jobs must be at least 1");
    check_degree(degree);
  }
};

// ---------------------------------------------------------------------------
// random curves

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Uniform [0, 1) value keyed by (seed, trial, attempt, slot).
inline double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt, std::uint64_t slot) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ trial);
  h = detail::splitmix64(h ^ attempt);
  h = detail::splitmix64(h ^ slot);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Center each coordinate and apply one common scale so the pooled sample
/// variance of the control points is 1.
inline Matrix normalize_variance(const Matrix& P) {
  const Eigen::Index count = P.cols();
  if (count < 2) fail(ErrorKind::InvalidArgument, "variance normalization needs at least two control points");
  Matrix centered = P.colwise() - P.rowwise().mean();
  const double pooled = centered.squaredNorm() / (static_cast<double>(P.rows()) * static_cast<double>(count - 1));
  if (!(pooled > 0.0)) fail(ErrorKind::InvalidArgument, "control points have zero variance");
  return centered / std::sqrt(pooled);
}

inline BezierCurve random_curve(const TrialConfig& config, std::uint64_t trial, std::uint64_t attempt = 0) {
  Matrix P(config.dim, config.degree + 1);
  std::uint64_t slot = 0;
  for (Eigen::Index j = 0; j < P.cols(); ++j) {
    for (Eigen::Index i = 0; i < P.rows(); ++i) P(i, j) = counter_uniform(config.seed, trial, attempt, slot++);
  }
  if (config.normalize_variance) P = normalize_variance(P);
  return BezierCurve(std::move(P));
}

// ---------------------------------------------------------------------------
// ground truth

enum class Feature { Length, DistToPoint, DistToLine, MaxCurvature };

inline std::string to_string(Feature f) {
  switch (f) {
    case Feature::Length: return "length";
    case Feature::DistToPoint: return "dist_to_point";
    case Feature::DistToLine: return "dist_to_line";
    case Feature::MaxCurvature: return "max_curvature";
  }
  return "unknown";
}

inline const std::vector<Feature>& all_features() {
  static const std::vector<Feature> all{Feature::Length, Feature::DistToPoint, Feature::DistToLine,
                                        Feature::MaxCurvature};
  return all;
}

/// Probe geometry: distances are measured to the origin and to the bottom
/// side of the unit box.
struct StudyProbes {
  Point point = Eigen::Vector2d(0.0, 0.0);
  Point line_from = Eigen::Vector2d(0.0, 0.0);
  Point line_to = Eigen::Vector2d(1.0, 0.0);
};

struct DenseTruth {
  double length = 0.0;
  double dist_to_point = 0.0;
  double dist_to_line = 0.0;
  double max_curvature = 0.0;

  double get(Feature f) const {
    switch (f) {
      case Feature::Length: return length;
      case Feature::DistToPoint: return dist_to_point;
      case Feature::DistToLine: return dist_to_line;
      case Feature::MaxCurvature: return max_curvature;
    }
    return 0.0;
  }
};

inline double point_segment_distance(const Point& x, const Point& a, const Point& b) {
  const Vector v = b - a;
  const double vv = v.squaredNorm();
  const double k = vv > 0.0 ? std::clamp(v.dot(x - a) / vv, 0.0, 1.0) : 0.0;
  return (x - a - k * v).norm();
}

/// Features of a planar curve from `samples` uniform samples: polyline length,
/// sample-minimum distances, and sampled |curvature| from the derivative curves.
inline DenseTruth dense_truth(const BezierCurve& curve, int samples, const StudyProbes& probes = {}) {
  if (curve.dim() != 2) fail(ErrorKind::NotPlanar, "dense truth is computed for planar curves");
  if (samples < 2) fail(ErrorKind::InvalidArgument, "dense truth needs at least 2 samples");
  const int n = curve.degree();
  const BezierCurve d1 = n >= 1 ? derivative(curve) : BezierCurve(Matrix::Zero(2, 1));
  const BezierCurve d2 = d1.degree() >= 1 ? derivative(d1) : BezierCurve(Matrix::Zero(2, 1));
  std::vector<double> scratch(static_cast<std::size_t>(2 * (n + 1)));
  Eigen::Vector2d x, prev, v, a;
  const Eigen::Vector2d lv = probes.line_to - probes.line_from;
  const double lvv = lv.squaredNorm();

  DenseTruth out;
  out.dist_to_point = std::numeric_limits<double>::infinity();
  out.dist_to_line = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / (samples - 1);
    curve.evaluate_into(t, scratch.data(), x.data());
    if (j > 0) out.length += (x - prev).norm();
    prev = x;
    out.dist_to_point = std::min(out.dist_to_point, (x - probes.point).norm());
    const Eigen::Vector2d rel = x - probes.line_from;
    const double k = lvv > 0.0 ? std::clamp(lv.dot(rel) / lvv, 0.0, 1.0) : 0.0;
    out.dist_to_line = std::min(out.dist_to_line, (rel - k * lv).norm());
    if (n >= 2) {
      d1.evaluate_into(t, scratch.data(), v.data());
      d2.evaluate_into(t, scratch.data(), a.data());
      const double speed = v.norm();
      const double kappa = speed > 0.0 ? std::abs(v.x() * a.y() - v.y() * a.x()) / (speed * speed * speed)
                                       : std::numeric_limits<double>::infinity();
      out.max_curvature = std::max(out.max_curvature, kappa);
    }
  }
  return out;
}

/// |approx - actual| / (approx + actual), with 0/0 taken as 0.
inline double normalized_error(double approx, double actual) {
  const double denom = approx + actual;
  if (denom == 0.0) return 0.0;
  return std::abs(approx - actual) / denom;
}

inline double chain_feature(const SegmentChain& chain, Feature f, const StudyProbes& probes = {}) {
  FeatureQuery q;
  switch (f) {
    case Feature::Length: q.length = true; break;
    case Feature::DistToPoint: q.point = probes.point; break;
    case Feature::DistToLine: q.segment = std::make_pair(probes.line_from, probes.line_to); break;
    case Feature::MaxCurvature: q.max_curvature = true; break;
  }
  const FeatureReport r = chain_features(chain, q);
  switch (f) {
    case Feature::Length: return *r.length;
    case Feature::DistToPoint: return r.dist_to_point->first;
    case Feature::DistToLine: return r.dist_to_segment->distance;
    case Feature::MaxCurvature: return r.max_curvature->first;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// worker pool

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. If any call throws,
/// the exception of the lowest failing index is rethrown.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(jobs, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

/// Mean and sample standard deviation, accumulated in the given order.
inline Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.count;
  if (s.count > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (s.count - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// error study

struct ErrorStudySpec {
  std::vector<Feature> features = all_features();
  std::vector<ReductionMethod> methods{ReductionMethod::matching()};
  std::vector<int> segment_counts{1};
  int target_degree = 2;
  StudyProbes probes;
};

struct ErrorCell {
  Feature feature = Feature::Length;
  ReductionMethod method;
  int degree = 0;
  int target_degree = 2;
  int segments = 1;
  Summary summary;
};

struct ErrorStudyResult {
  std::vector<ErrorCell> cells;  // feature-major, then method, then segment count
  long long curvature_draws = 0;
};

inline ErrorStudyResult run_error_study(const TrialConfig& config, const ErrorStudySpec& spec) {
  config.validate();
  if (spec.target_degree != 1 && spec.target_degree != 2) {
    fail(ErrorKind::UnsupportedTargetDegree, "error studies use linear or quadratic segments");
  }
  if (spec.target_degree > config.degree) fail(ErrorKind::DegreeOrder, "target degree exceeds curve degree");
  if (spec.features.empty() || spec.methods.empty() || spec.segment_counts.empty()) {
    fail(ErrorKind::InvalidArgument, "error study grid is empty");
  }
  for (int k : spec.segment_counts) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "segment counts must be positive");
  }
  for (const ReductionMethod& method : spec.methods) (void)reduction_matrix(config.degree, spec.target_degree, method);

  const std::size_t nf = spec.features.size(), nm = spec.methods.size(), nk = spec.segment_counts.size();
  const bool wants_curvature =
      std::find(spec.features.begin(), spec.features.end(), Feature::MaxCurvature) != spec.features.end();
  const long long draw_limit = 10LL * config.trials;

  std::vector<std::vector<double>> errors(static_cast<std::size_t>(config.trials));
  std::vector<long long> draws(static_cast<std::size_t>(config.trials), 0);

  parallel_for(config.trials, config.jobs, [&](int trial) {
    auto& out = errors[static_cast<std::size_t>(trial)];
    out.assign(nf * nm * nk, 0.0);
    const BezierCurve base = random_curve(config, static_cast<std::uint64_t>(trial));
    const DenseTruth base_truth = dense_truth(base, config.dense_samples, spec.probes);

    std::optional<BezierCurve> bent;
    DenseTruth bent_truth;
    if (wants_curvature) {
      // redraw until the sampled maximum curvature is below the cap
      for (long long attempt = 0;; ++attempt) {
        if (attempt >= draw_limit) {
          fail(ErrorKind::RejectionLimit, "trial " + std::to_string(trial) + " found no curve with curvature below " +
                                              std::to_string(kCurvatureCap) + " in " + std::to_string(draw_limit) +
                                              " draws");
        }
        BezierCurve c = attempt == 0 ? base : random_curve(config, static_cast<std::uint64_t>(trial),
                                                           static_cast<std::uint64_t>(attempt));
        DenseTruth t = attempt == 0 ? base_truth : dense_truth(c, config.dense_samples, spec.probes);
        draws[static_cast<std::size_t>(trial)] = attempt + 1;
        if (t.max_curvature <= kCurvatureCap) {
          bent.emplace(std::move(c));
          bent_truth = t;
          break;
        }
      }
    }

    for (std::size_t im = 0; im < nm; ++im) {
      for (std::size_t ik = 0; ik < nk; ++ik) {
        const Partition partition = Partition::uniform(spec.segment_counts[ik]);
        const SegmentChain chain = approximate_over_partition(base, spec.target_degree, partition, spec.methods[im]);
        std::optional<SegmentChain> bent_chain;
        if (bent) bent_chain = approximate_over_partition(*bent, spec.target_degree, partition, spec.methods[im]);
        for (std::size_t f = 0; f < nf; ++f) {
          const Feature feature = spec.features[f];
          double err;
          if (feature == Feature::MaxCurvature) {
            err = normalized_error(chain_feature(*bent_chain, feature, spec.probes), bent_truth.get(feature));
          } else {
            err = normalized_error(chain_feature(chain, feature, spec.probes), base_truth.get(feature));
          }
          out[(f * nm + im) * nk + ik] = err;
        }
      }
    }
  });

  ErrorStudyResult result;
  for (long long d : draws) result.curvature_draws += d;
  if (wants_curvature && result.curvature_draws > draw_limit) {
    fail(ErrorKind::RejectionLimit, "curvature rejection needed " + std::to_string(result.curvature_draws) +
                                        " draws for " + std::to_string(config.trials) + " trials");
  }
  std::vector<double> column(static_cast<std::size_t>(config.trials));
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t im = 0; im < nm; ++im) {
      for (std::size_t ik = 0; ik < nk; ++ik) {
        for (int trial = 0; trial < config.trials; ++trial) {
          column[static_cast<std::size_t>(trial)] = errors[static_cast<std::size_t>(trial)][(f * nm + im) * nk + ik];
        }
        result.cells.push_back({spec.features[f], spec.methods[im], config.degree, spec.target_degree,
                                spec.segment_counts[ik], summarize(column)});
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// scaling study

enum class SearchKind { Linear, Binary };

inline std::string to_string(SearchKind s) { return s == SearchKind::Linear ? "linear" : "binary"; }

struct ScalingStudySpec {
  std::vector<SearchKind> searches{SearchKind::Linear, SearchKind::Binary};
  std::vector<int> degrees{3, 4, 5, 6, 7, 8, 9};
  std::vector<double> tolerances{0.01};
  int target_degree = 2;
  ReductionMethod method = ReductionMethod::matching();
  MetricKind metric = MetricKind::control_point();
  int max_segments = kDefaultMaxSegments;
};

struct ScalingCell {
  SearchKind search = SearchKind::Linear;
  int degree = 0;
  double tolerance = 0.0;
  Summary summary;   // over trials that met the tolerance
  int unreachable = 0;
};

/// Segment counts of the adaptive searches on unit-variance random curves.
/// Trials whose tolerance is unreachable are counted, not fatal.
inline std::vector<ScalingCell> run_scaling_study(const TrialConfig& config, const ScalingStudySpec& spec) {
  if (spec.searches.empty() || spec.degrees.empty() || spec.tolerances.empty()) {
    fail(ErrorKind::InvalidArgument, "scaling study grid is empty");
  }
  for (int n : spec.degrees) {
    if (n < 2) fail(ErrorKind::InvalidArgument, "scaling study degrees must be at least 2");
    if (spec.target_degree > n) fail(ErrorKind::DegreeOrder, "target degree exceeds curve degree");
  }
  for (std::size_t i = 0; i < spec.tolerances.size(); ++i) {
    const double eps = spec.tolerances[i];
    if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorKind::InvalidArgument, "tolerances must be positive");
    if (i > 0 && !(eps < spec.tolerances[i - 1])) {
      fail(ErrorKind::InvalidArgument, "tolerances must be strictly descending");
    }
  }
  TrialConfig base = config;
  base.normalize_variance = true;
  base.degree = spec.degrees.front();
  base.validate();

  const std::size_t nd = spec.degrees.size(), ns = spec.searches.size(), ne = spec.tolerances.size();
  const int jobs_total = static_cast<int>(nd) * config.trials;
  // per (degree, trial): counts for every (search, tolerance); -1 marks unreachable
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(jobs_total));

  parallel_for(jobs_total, config.jobs, [&](int job) {
    const std::size_t id = static_cast<std::size_t>(job) / static_cast<std::size_t>(config.trials);
    const int trial = job % config.trials;
    TrialConfig tc = base;
    tc.degree = spec.degrees[id];
    const BezierCurve curve = random_curve(tc, static_cast<std::uint64_t>(trial));
    auto& out = counts[static_cast<std::size_t>(job)];
    out.assign(ns * ne, -1);
    for (std::size_t is = 0; is < ns; ++is) {
      for (std::size_t ie = 0; ie < ne; ++ie) {
        AdaptiveConfig ac;
        ac.target_degree = spec.target_degree;
        ac.method = spec.method;
        ac.metric = spec.metric;
        ac.tolerance = spec.tolerances[ie];
        ac.max_segments = spec.max_segments;
        try {
          const SegmentChain chain = spec.searches[is] == SearchKind::Linear ? adaptive_linear_search(curve, ac)
                                                                              : adaptive_binary_search(curve, ac);
          out[is * ne + ie] = chain.partition.segments();
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ToleranceUnreachable) throw;
        }
      }
    }
  });

  std::vector<ScalingCell> cells;
  for (std::size_t is = 0; is < ns; ++is) {
    for (std::size_t id = 0; id < nd; ++id) {
      for (std::size_t ie = 0; ie < ne; ++ie) {
        std::vector<double> ok;
        int unreachable = 0;
        for (int trial = 0; trial < config.trials; ++trial) {
          const int c = counts[id * static_cast<std::size_t>(config.trials) + static_cast<std::size_t>(trial)][is * ne + ie];
          if (c < 0) ++unreachable;
          else ok.push_back(c);
        }
        cells.push_back({spec.searches[is], spec.degrees[id], spec.tolerances[ie], summarize(ok), unreachable});
      }
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* kCsvHeader = "study,feature,method,search,degree,segments,tolerance,mean,std,trials,seed";

inline void write_error_csv(std::ostream& os, const ErrorStudyResult& result, std::uint64_t seed, bool header = true) {
  if (header) os << kCsvHeader << '\n';
  for (const ErrorCell& c : result.cells) {
    os << "error," << to_string(c.feature) << ',' << to_string(c.method.kind) << ",," << c.degree << ','
       << c.segments << ",," << format_double(c.summary.mean) << ',' << format_double(c.summary.std) << ','
       << c.summary.count << ',' << seed << '\n';
  }
}

inline void write_scaling_csv(std::ostream& os, const std::vector<ScalingCell>& cells, const ReductionMethod& method,
                              std::uint64_t seed, bool header = true) {
  if (header) os << kCsvHeader << '\n';
  for (const ScalingCell& c : cells) {
    os << "scaling,," << to_string(method.kind) << ',' << to_string(c.search) << ',' << c.degree << ",,"
       << format_double(c.tolerance) << ',';
    if (c.summary.count > 0) os << format_double(c.summary.mean) << ',' << format_double(c.summary.std);
    else os << ',';
    os << ',' << c.summary.count << ',' << seed << '\n';
  }
}

}  // namespace bezapprox
