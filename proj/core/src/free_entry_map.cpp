#include "msvec/free_entry_map.hpp"

#include <set>
#include <stdexcept>

namespace msvec {

Eigen::MatrixXd FreeEntryMap::assemble(const Eigen::VectorXd& b_free) const {
  if (static_cast<int>(b_free.size()) != d_b)
    throw std::invalid_argument("FreeEntryMap::assemble: b_free has wrong length");
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < d_b; ++j) {
    const int pos = free_positions[j];
    B(pos % n, pos / n) = b_free[j];
  }
  return B;
}

Eigen::VectorXd FreeEntryMap::extract(const Eigen::MatrixXd& B) const {
  if (B.rows() != n || B.cols() != n)
    throw std::invalid_argument("FreeEntryMap::extract: dimension mismatch");
  Eigen::VectorXd b(d_b);
  for (int j = 0; j < d_b; ++j) {
    const int pos = free_positions[j];
    b[j] = B(pos % n, pos / n);
  }
  return b;
}

Eigen::MatrixXd FreeEntryMap::selection_matrix() const {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n * n, d_b);
  for (int j = 0; j < d_b; ++j) Q(free_positions[j], j) = 1.0;
  return Q;
}

Eigen::VectorXd FreeEntryMap::offset_vector() const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n * n);
  for (int i = 0; i < n; ++i) q[i * n + i] = 1.0;
  return q;
}

FreeEntryMap build_free_entry_map(int n,
                                  const std::vector<std::pair<int, int>>& extra_zero_restrictions) {
  if (n < 1) throw std::invalid_argument("build_free_entry_map: n must be >= 1");
  std::set<int> restricted;
  for (const auto& [row, col] : extra_zero_restrictions) {
    if (row < 0 || row >= n || col < 0 || col >= n)
      throw std::invalid_argument("build_free_entry_map: restriction index out of range");
    if (row == col)
      throw std::invalid_argument("build_free_entry_map: diagonal entries are pinned to one");
    if (!restricted.insert(col * n + row).second)
      throw std::invalid_argument("build_free_entry_map: duplicate restriction");
  }
  FreeEntryMap map;
  map.n = n;
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const int pos = col * n + row;
      if (restricted.count(pos)) continue;
      map.free_positions.push_back(pos);
    }
  }
  map.d_b = static_cast<int>(map.free_positions.size());
  return map;
}

}  // namespace msvec
