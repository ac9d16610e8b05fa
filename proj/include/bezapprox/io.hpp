#pragma once

// JSON documents for curves and segment chains.
//
// Curve:  {"dim": d, "degree": n, "controls": [[...], ...], "basis": "bernstein", "tau": 0.5}
//         basis/tau are optional; monomial and taylor coefficients are converted
//         to Bernstein control points on load.
// Chain:  {"sourceDegree": n, "partition": [...], "segments": [curve, ...],
//          "method": "...", "metric": "...", "tolerance": x, "distances": [...]}

#include <set>
#include <string>

#include <json.hpp>

#include "adaptive.hpp"

namespace bezapprox::io {

using nlohmann::json;

namespace detail {

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(ErrorKind::InvalidArgument, what + " has unknown field \"" + key + "\"");
  }
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::InvalidArgument, what + " is missing \"" + key + "\"");
  return *it;
}

inline int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(ErrorKind::InvalidArgument, what + " must be an integer");
  return j.get<int>();
}

inline double as_double(const json& j, const std::string& what) {
  if (!j.is_number()) fail(ErrorKind::InvalidArgument, what + " must be a number");
  return j.get<double>();
}

}  // namespace detail

inline BasisSpec parse_basis(const std::string& name, double tau) {
  if (name == "bernstein") return BasisSpec::bernstein();
  if (name == "monomial") return BasisSpec::monomial();
  if (name == "taylor") return BasisSpec::taylor(tau);
  fail(ErrorKind::InvalidArgument, "unknown basis \"" + name + "\"");
}

inline BezierCurve curve_from_json(const json& j) {
  const std::string what = "curve document";
  detail::only_keys(j, {"dim", "degree", "controls", "basis", "tau"}, what);
  const int dim = detail::as_int(detail::field(j, "dim", what), "dim");
  const int degree = detail::as_int(detail::field(j, "degree", what), "degree");
  const json& controls = detail::field(j, "controls", what);
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dim must be positive");
  if (degree < 0) fail(ErrorKind::InvalidArgument, "degree must be nonnegative");
  check_degree(degree);
  if (!controls.is_array() || static_cast<int>(controls.size()) != degree + 1) {
    fail(ErrorKind::InvalidArgument, "controls must be an array of degree + 1 points");
  }
  Matrix P(dim, degree + 1);
  for (int c = 0; c <= degree; ++c) {
    const json& pt = controls[static_cast<std::size_t>(c)];
    if (!pt.is_array() || static_cast<int>(pt.size()) != dim) {
      fail(ErrorKind::InvalidArgument, "control point " + std::to_string(c) + " must have " + std::to_string(dim) +
                                           " coordinates");
    }
    for (int r = 0; r < dim; ++r) P(r, c) = detail::as_double(pt[static_cast<std::size_t>(r)], "coordinate");
  }
  std::string basis = "bernstein";
  if (auto it = j.find("basis"); it != j.end()) {
    if (!it->is_string()) fail(ErrorKind::InvalidArgument, "basis must be a string");
    basis = it->get<std::string>();
  }
  double tau = 0.0;
  if (auto it = j.find("tau"); it != j.end()) {
    if (basis != "taylor") fail(ErrorKind::InvalidArgument, "tau is only meaningful for the taylor basis");
    tau = detail::as_double(*it, "tau");
  } else if (basis == "taylor") {
    fail(ErrorKind::InvalidArgument, "taylor basis needs \"tau\"");
  }
  const BasisSpec spec = parse_basis(basis, tau);
  if (spec.kind != BasisKind::Bernstein) P = convert_controls(P, spec, BasisSpec::bernstein());
  return BezierCurve(std::move(P));
}

inline json curve_to_json(const BezierCurve& curve) {
  json controls = json::array();
  for (int c = 0; c <= curve.degree(); ++c) {
    json pt = json::array();
    for (int r = 0; r < curve.dim(); ++r) pt.push_back(curve.controls()(r, c));
    controls.push_back(std::move(pt));
  }
  return json{{"dim", curve.dim()}, {"degree", curve.degree()}, {"controls", std::move(controls)}};
}

struct ChainDocument {
  SegmentChain chain;
  std::string method;            // reduction method name
  std::string metric;            // metric used for the distances, empty if none
  std::optional<double> tolerance;
};

inline json chain_to_json(const ChainDocument& doc) {
  json segments = json::array();
  for (const BezierCurve& s : doc.chain.segments) segments.push_back(curve_to_json(s));
  json out{{"sourceDegree", doc.chain.source_degree},
           {"partition", doc.chain.partition.params},
           {"segments", std::move(segments)},
           {"method", doc.method},
           {"metric", doc.metric},
           {"distances", doc.chain.distances}};
  out["tolerance"] = doc.tolerance ? json(*doc.tolerance) : json(nullptr);
  return out;
}

inline ChainDocument chain_from_json(const json& j) {
  const std::string what = "chain document";
  detail::only_keys(j, {"sourceDegree", "partition", "segments", "method", "metric", "tolerance", "distances"}, what);
  ChainDocument doc;
  doc.chain.source_degree = detail::as_int(detail::field(j, "sourceDegree", what), "sourceDegree");
  const json& partition = detail::field(j, "partition", what);
  if (!partition.is_array()) fail(ErrorKind::InvalidArgument, "partition must be an array");
  for (const json& t : partition) doc.chain.partition.params.push_back(detail::as_double(t, "partition parameter"));
  doc.chain.partition.validate();
  const json& segments = detail::field(j, "segments", what);
  if (!segments.is_array()) fail(ErrorKind::InvalidArgument, "segments must be an array");
  for (const json& s : segments) doc.chain.segments.push_back(curve_from_json(s));
  if (static_cast<int>(doc.chain.segments.size()) != doc.chain.partition.segments()) {
    fail(ErrorKind::InvalidArgument, "segment count does not match the partition");
  }
  for (const BezierCurve& s : doc.chain.segments) {
    if (s.dim() != doc.chain.segments.front().dim()) fail(ErrorKind::DimensionMismatch, "segments differ in dimension");
  }
  if (auto it = j.find("method"); it != j.end()) {
    if (!it->is_string()) fail(ErrorKind::InvalidArgument, "method must be a string");
    doc.method = it->get<std::string>();
  }
  if (auto it = j.find("metric"); it != j.end()) {
    if (!it->is_string()) fail(ErrorKind::InvalidArgument, "metric must be a string");
    doc.metric = it->get<std::string>();
  }
  if (auto it = j.find("tolerance"); it != j.end() && !it->is_null()) doc.tolerance = detail::as_double(*it, "tolerance");
  if (auto it = j.find("distances"); it != j.end()) {
    if (!it->is_array()) fail(ErrorKind::InvalidArgument, "distances must be an array");
    for (const json& d : *it) doc.chain.distances.push_back(detail::as_double(d, "distance"));
    if (!doc.chain.distances.empty() && doc.chain.distances.size() != doc.chain.segments.size()) {
      fail(ErrorKind::InvalidArgument, "distance count does not match the segment count");
    }
  }
  return doc;
}

/// Parses either document kind; a curve becomes a one-segment chain.
inline ChainDocument chain_or_curve_from_json(const json& j) {
  if (j.is_object() && j.contains("segments")) return chain_from_json(j);
  const BezierCurve curve = curve_from_json(j);
  return {SegmentChain{Partition{{0.0, 1.0}}, {curve}, curve.degree(), {}}, "", "", std::nullopt};
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace bezapprox::io
