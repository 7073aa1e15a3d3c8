#include "msvec/identification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "msvec/model.hpp"

namespace msvec {

std::vector<StructuralSolution> alternate_solutions(const StructuralSolution& sol, double tol) {
  const int n = static_cast<int>(sol.B.rows());
  if (n > 8)
    throw std::invalid_argument(
        "alternate_solutions: enumeration over n! signed permutations is limited to n <= 8; "
        "screen candidate orderings analytically for larger systems");
  if ((sol.lambda1.array() <= 0.0).any() || (sol.lambda2.array() <= 0.0).any())
    throw std::domain_error("alternate_solutions: variances must be positive");

  const Eigen::MatrixXd sigma1 = reduced_form_covariance(sol.B, sol.lambda1);
  const Eigen::MatrixXd sigma2 = reduced_form_covariance(sol.B, sol.lambda2);
  const Eigen::MatrixXd C = sol.B * sol.lambda1.cwiseSqrt().asDiagonal();
  const Eigen::VectorXd omega = sol.omega2();

  std::vector<StructuralSolution> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // Column j of the rotated C is +/- column perm[j] of C; the sign keeps
    // the rotated diagonal positive, pinning the shock signs.
    Eigen::MatrixXd c_rot(n, n);
    bool degenerate = false;
    for (int j = 0; j < n; ++j) {
      const double diag = C(j, perm[j]);
      if (diag == 0.0) {
        degenerate = true;
        break;
      }
      c_rot.col(j) = (diag > 0.0 ? 1.0 : -1.0) * C.col(perm[j]);
    }
    if (degenerate) continue;

    StructuralSolution cand;
    cand.lambda1 = c_rot.diagonal().array().square();
    cand.B = c_rot * c_rot.diagonal().cwiseInverse().asDiagonal();
    Eigen::VectorXd omega_rot(n);
    for (int j = 0; j < n; ++j) omega_rot[j] = omega[perm[j]];
    cand.lambda2 = omega_rot.cwiseProduct(cand.lambda1);

    const Eigen::MatrixXd s1 = reduced_form_covariance(cand.B, cand.lambda1);
    const Eigen::MatrixXd s2 = reduced_form_covariance(cand.B, cand.lambda2);
    if ((s1 - sigma1).norm() <= tol * std::max(1.0, sigma1.norm()) &&
        (s2 - sigma2).norm() <= tol * std::max(1.0, sigma2.norm()))
      out.push_back(std::move(cand));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

IdentificationReport check_theorem_conditions(const StructuralSolution& sol,
                                              const OmegaOrdering& ordering, double tol) {
  const Eigen::VectorXd omega = sol.omega2();
  const int n = static_cast<int>(omega.size());
  IdentificationReport report;
  report.row_unique.assign(n, true);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double scale = std::max({1.0, std::abs(omega[i]), std::abs(omega[k])});
      if (std::abs(omega[i] - omega[k]) <= tol * scale) report.row_unique[k] = false;
    }
  report.all_rows_unique =
      std::all_of(report.row_unique.begin(), report.row_unique.end(), [](bool b) { return b; });
  report.ordering_holds = ordering.satisfied(omega);
  report.globally_identified = report.all_rows_unique && report.ordering_holds;
  return report;
}

}  // namespace msvec
