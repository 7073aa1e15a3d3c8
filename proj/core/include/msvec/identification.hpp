#ifndef MSVEC_IDENTIFICATION_HPP
#define MSVEC_IDENTIFICATION_HPP

#include <vector>

#include <Eigen/Dense>

#include "msvec/priors.hpp"

namespace msvec {

// A unit-diagonal structural matrix with the two state-specific variance
// vectors it carries.
struct StructuralSolution {
  Eigen::MatrixXd B;
  Eigen::VectorXd lambda1, lambda2;

  Eigen::VectorXd omega2() const { return lambda2.cwiseQuotient(lambda1); }
};

// Enumerates the observationally equivalent solutions reachable through
// signed permutations of the shock ordering: for each permutation the columns
// of B Lambda_1^{1/2} are reordered, signed so the rotated diagonal stays
// positive, and rescaled back to a unit diagonal. Candidates whose
// reduced-form covariances fail to match within `tol` (relative Frobenius)
// are dropped, as are rotations that zero out a diagonal entry. The input
// itself is always part of the output. n is capped at 8.
std::vector<StructuralSolution> alternate_solutions(const StructuralSolution& sol,
                                                    double tol = 1e-8);

struct IdentificationReport {
  std::vector<bool> row_unique;  // per-row distinctness of omega2
  bool all_rows_unique = false;
  bool ordering_holds = false;
  bool globally_identified = false;  // all_rows_unique && ordering_holds
};

// Distinctness uses |omega_i - omega_k| > tol * max(1, |omega_i|, |omega_k|).
IdentificationReport check_theorem_conditions(const StructuralSolution& sol,
                                              const OmegaOrdering& ordering, double tol = 1e-12);

}  // namespace msvec

#endif
