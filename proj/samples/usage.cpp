// Approximate a random degree-8 planar curve by quadratic segments and compare
// a few features of the chain with the original.

#include <cstdio>

#include <bezapprox/bezapprox.hpp>

using namespace bezapprox;

int main() {
  TrialConfig config;
  config.seed = 7;
  config.degree = 8;
  const BezierCurve curve = random_curve(config, 0);

  AdaptiveConfig search;
  search.target_degree = 2;
  search.tolerance = 0.1;  // max control-point distance per segment
  const SegmentChain linear = adaptive_linear_search(curve, search);
  const SegmentChain binary = adaptive_binary_search(curve, search);
  std::printf("segments: linear search %d, binary search %d\n", linear.partition.segments(),
              binary.partition.segments());

  const SegmentChain rule = approximate_over_partition(curve, 2, rule_of_thumb_partition(curve.degree(), 2),
                                                       ReductionMethod::matching());
  FeatureQuery query;
  query.length = true;
  query.point = Point(Eigen::Vector2d(0.0, 0.0));
  const FeatureReport report = chain_features(rule, query);
  const DenseTruth truth = dense_truth(curve, kDefaultDenseSamples);

  std::printf("%d quadratic segments\n", rule.partition.segments());
  std::printf("length         %.9f  (dense %.9f, normalized error %.2e)\n", *report.length, truth.length,
              normalized_error(*report.length, truth.length));
  std::printf("dist to origin %.9f  (dense %.9f) at t = %.6f\n", report.dist_to_point->first, truth.dist_to_point,
              report.dist_to_point->second.t_global);
  return 0;
}
