#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace tonekit {

/// Deterministic low-discrepancy sampler (Halton sequence with a seed
/// offset). Same (dim, seed) always yields the same stream.
class HaltonSampler {
public:
  HaltonSampler(int dim, unsigned seed = 0);

  /// Next point in the open unit cube (0,1)^dim.
  Eigen::VectorXd next();

private:
  int dim_;
  std::uint64_t index_;
  std::vector<int> bases_;
};

/// Samples chart points of the geodesic ball of radius `chart_radius`
/// around `center`, uniformly in the chart ball.
Eigen::VectorXd sample_chart_ball(HaltonSampler& sampler,
                                  const Eigen::VectorXd& center,
                                  double chart_radius);

}  // namespace tonekit
