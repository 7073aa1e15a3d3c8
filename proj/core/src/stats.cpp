#include "msvec/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace msvec {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double log_normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}

double log_gamma_pdf(double x, double shape, double scale) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return -shape * std::log(scale) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - x / scale;
}

double log_inverse_gamma_pdf(double x, double shape, double scale) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double log_beta_pdf(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
         (b - 1.0) * std::log1p(-x);
}

double log_mvnormal_pdf(const Vector& x, const Vector& mean, const Matrix& cov) {
  const int d = static_cast<int>(x.size());
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw std::domain_error("log_mvnormal_pdf: covariance not SPD");
  const Vector z = llt.matrixL().solve(x - mean);
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += std::log(llt.matrixL()(i, i));
  return -0.5 * d * kLog2Pi - log_det - 0.5 * z.squaredNorm();
}

double chi_square_tail_1df(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(0.5 * x));
}

Vector mvnormal_draw(const Vector& mean, const Matrix& cov, Rng& rng) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw std::domain_error("mvnormal_draw: covariance not SPD");
  return mean + llt.matrixL() * rng.normal_vector(static_cast<int>(mean.size()));
}

Vector mvnormal_draw_precision(const Matrix& precision, const Vector& rhs, Rng& rng) {
  const int d = static_cast<int>(rhs.size());
  if (d == 0) return Vector(0);
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * precision.diagonal().cwiseAbs().mean() + 1e-300;
    Matrix jittered = precision + jitter * Matrix::Identity(d, d);
    llt.compute(jittered);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mvnormal_draw_precision: precision not SPD after jitter");
  }
  const Vector mean = llt.solve(rhs);
  // L^{-T} z has covariance (L L')^{-1}.
  const Vector z = rng.normal_vector(d);
  return mean + llt.matrixU().solve(z);
}

double log_gaussian_density_at_zero(const Matrix& draws) {
  const int n = static_cast<int>(draws.rows());
  const int d = static_cast<int>(draws.cols());
  if (n < 2) throw std::invalid_argument("log_gaussian_density_at_zero: need at least 2 draws");
  const Vector mean = draws.colwise().mean();
  Matrix centered = draws.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov += (1e-10 * cov.diagonal().cwiseAbs().mean() + 1e-300) * Matrix::Identity(d, d);
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("log_gaussian_density_at_zero: degenerate covariance");
  }
  return log_mvnormal_pdf(Vector::Zero(d), mean, cov);
}

Matrix inverse_sqrt_spd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw std::domain_error("inverse_sqrt_spd: decomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("inverse_sqrt_spd: matrix not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Matrix sqrt_spd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw std::domain_error("sqrt_spd: decomposition failed");
  if (es.eigenvalues().minCoeff() < 0.0) throw std::domain_error("sqrt_spd: matrix not PSD");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace msvec
