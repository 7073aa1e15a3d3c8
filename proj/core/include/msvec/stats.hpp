#ifndef MSVEC_STATS_HPP
#define MSVEC_STATS_HPP

#include <Eigen/Dense>

#include "msvec/rng.hpp"

namespace msvec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

double log_sum_exp(double a, double b);

// Log densities. Gamma is shape-scale (mean a*b); inverse gamma has mean
// b/(a-1) for a > 1.
double log_normal_pdf(double x, double mean, double variance);
double log_gamma_pdf(double x, double shape, double scale);
double log_inverse_gamma_pdf(double x, double shape, double scale);
double log_beta_pdf(double x, double a, double b);

// N(mean, cov) evaluated at x; cov must be SPD.
double log_mvnormal_pdf(const Vector& x, const Vector& mean, const Matrix& cov);

// Upper tail of a chi-square with one degree of freedom.
double chi_square_tail_1df(double x);

// Draw from N(mean, cov), cov SPD.
Vector mvnormal_draw(const Vector& mean, const Matrix& cov, Rng& rng);

// Draw from N(precision^{-1} * rhs, precision^{-1}) given the precision form
// of a Gaussian conditional. Retries once with a diagonal jitter when the
// Cholesky factorization fails, then throws.
Vector mvnormal_draw_precision(const Matrix& precision, const Vector& rhs, Rng& rng);

// Log density at zero of a normal fitted to the rows of `draws` by moment
// matching. Jitters the fitted covariance once if it is numerically singular.
double log_gaussian_density_at_zero(const Matrix& draws);

// Symmetric inverse square root of an SPD matrix.
Matrix inverse_sqrt_spd(const Matrix& a);
Matrix sqrt_spd(const Matrix& a);

}  // namespace msvec

#endif
