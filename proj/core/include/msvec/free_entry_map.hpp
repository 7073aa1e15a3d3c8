#ifndef MSVEC_FREE_ENTRY_MAP_HPP
#define MSVEC_FREE_ENTRY_MAP_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace msvec {

// Linear map vec(B) = Q b + q between the free entries b of the structural
// matrix and the full matrix. The diagonal of B is pinned to one; off-diagonal
// entries are free unless explicitly restricted to zero. Free entries are
// ordered column-major.
struct FreeEntryMap {
  int n = 0;
  int d_b = 0;
  std::vector<int> free_positions;  // column-major indices into vec(B)

  Eigen::MatrixXd assemble(const Eigen::VectorXd& b_free) const;
  Eigen::VectorXd extract(const Eigen::MatrixXd& B) const;

  // Dense Q (n^2 x d_b) and q (n^2), mostly for tests and serialization.
  Eigen::MatrixXd selection_matrix() const;
  Eigen::VectorXd offset_vector() const;
};

// `extra_zero_restrictions` holds 0-based (row, col) positions forced to zero;
// they must be off-diagonal and distinct.
FreeEntryMap build_free_entry_map(
    int n, const std::vector<std::pair<int, int>>& extra_zero_restrictions = {});

}  // namespace msvec

#endif
