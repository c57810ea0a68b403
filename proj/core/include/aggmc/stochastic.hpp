#pragma once

#include <initializer_list>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace aggmc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// A relabeling of {0..n-1}: perm[old] is the new position of symbol `old`.
using Permutation = std::vector<Index>;

inline constexpr double kDefaultRowTolerance = 1e-12;

/// Validated row-stochastic m x m matrix, m >= 2. Immutable once built.
class TransitionMatrix {
 public:
  static TransitionMatrix validate(const std::vector<std::vector<double>>& rows,
                                   double tol_row = kDefaultRowTolerance,
                                   std::vector<std::string> labels = {});
  static TransitionMatrix validate(const Matrix& entries,
                                   double tol_row = kDefaultRowTolerance,
                                   std::vector<std::string> labels = {});
  // Brace literals would otherwise match both overloads above.
  static TransitionMatrix validate(std::initializer_list<std::initializer_list<double>> rows,
                                   double tol_row = kDefaultRowTolerance,
                                   std::vector<std::string> labels = {}) {
    return validate(std::vector<std::vector<double>>(rows.begin(), rows.end()), tol_row, std::move(labels));
  }

  Index size() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double row_tolerance() const noexcept { return tol_row_; }

  bool operator==(const TransitionMatrix& other) const {
    return entries_ == other.entries_ && labels_ == other.labels_;
  }

 private:
  TransitionMatrix(Matrix entries, std::vector<std::string> labels, double tol_row)
      : entries_(std::move(entries)), labels_(std::move(labels)), tol_row_(tol_row) {}

  Matrix entries_;
  std::vector<std::string> labels_;
  double tol_row_;
};

/// Block split of a transition matrix around the special symbol (index 0):
///
///     | p11  v |
///     | w^t  p |
///
/// v is row 0 without its diagonal entry, w is column 0 without its
/// diagonal entry, p is the block over the aggregated (image 0) symbols.
struct AggregatedDecomposition {
  double p11 = 0.0;
  RowVector v;
  RowVector w;
  Matrix p;

  Index dimension() const noexcept { return p.rows(); }
  Matrix reassemble() const;
};

bool is_permutation(const Permutation& perm, Index n);
Permutation inverse(const Permutation& perm);
Permutation identity_permutation(Index n);

/// Moves `special` to position 0, keeping the other symbols in order.
Permutation special_first(Index m, Index special);

/// Simultaneous row/column permutation: out(perm[i], perm[j]) = in(i, j).
Matrix permute(const Matrix& in, const Permutation& perm);
TransitionMatrix relabel(const TransitionMatrix& matrix, const Permutation& perm);

/// Splits the matrix around `special` (0-based). Throws TrivialFactor when
/// v or w vanishes.
AggregatedDecomposition decompose(const TransitionMatrix& matrix, Index special = 0);

}  // namespace aggmc
