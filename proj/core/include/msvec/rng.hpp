#ifndef MSVEC_RNG_HPP
#define MSVEC_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace msvec {

// Seedable pseudo-random stream. One instance per chain; never shared across
// threads. All draws consume the single underlying engine sequentially, so a
// fixed seed reproduces a run exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  // Gamma with mean shape*scale.
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  // Inverse gamma with mean scale/(shape-1) for shape > 1.
  double inverse_gamma(double shape, double scale) {
    return scale / std::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  double beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
  }

  // Categorical over probabilities summing to ~1 (renormalized internally).
  int categorical2(double prob_first) { return uniform() < prob_first ? 0 : 1; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace msvec

#endif
