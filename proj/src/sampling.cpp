#include "tonekit/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace tonekit {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}
}  // namespace

HaltonSampler::HaltonSampler(int dim, unsigned seed) : dim_(dim), index_(seed + 1) {
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes)))
    throw std::invalid_argument("HaltonSampler: unsupported dimension");
  bases_.assign(kPrimes, kPrimes + dim);
}

Eigen::VectorXd HaltonSampler::next() {
  Eigen::VectorXd p(dim_);
  for (int d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, bases_[d]);
  ++index_;
  return p;
}

Eigen::VectorXd sample_chart_ball(HaltonSampler& sampler, const Eigen::VectorXd& center,
                                  double chart_radius) {
  const int n = static_cast<int>(center.size());
  // Rejection from the cube keeps the chart-ball sampling exact and still
  // deterministic for a fixed stream.
  for (;;) {
    Eigen::VectorXd u = sampler.next();
    Eigen::VectorXd x = (2.0 * u.array() - 1.0).matrix() * chart_radius;
    if (x.squaredNorm() <= chart_radius * chart_radius && x.size() == n)
      return center + x;
  }
}

}  // namespace tonekit
