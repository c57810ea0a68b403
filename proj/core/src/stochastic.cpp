#include "aggmc/stochastic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "aggmc/error.hpp"

namespace aggmc {

namespace {

void check_labels(const std::vector<std::string>& labels, Index m) {
  if (!labels.empty() && static_cast<Index>(labels.size()) != m) {
    std::ostringstream os;
    os << "expected " << m << " labels, got " << labels.size();
    throw Error(ErrorCode::InputFormat, os.str());
  }
}

}  // namespace

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<double>>& rows,
                                            double tol_row,
                                            std::vector<std::string> labels) {
  const auto m = static_cast<Index>(rows.size());
  Matrix entries(m, m);
  for (Index i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != m) {
      std::ostringstream os;
      os << "row " << i << " has " << row.size() << " entries, expected " << m;
      throw Error(ErrorCode::NotSquare, os.str());
    }
    for (Index j = 0; j < m; ++j) entries(i, j) = row[static_cast<std::size_t>(j)];
  }
  return validate(entries, tol_row, std::move(labels));
}

TransitionMatrix TransitionMatrix::validate(const Matrix& entries, double tol_row,
                                            std::vector<std::string> labels) {
  if (entries.rows() != entries.cols()) {
    std::ostringstream os;
    os << entries.rows() << "x" << entries.cols() << " matrix";
    throw Error(ErrorCode::NotSquare, os.str());
  }
  const Index m = entries.rows();
  if (m < 2) throw Error(ErrorCode::AlphabetTooSmall, "alphabet size must be at least 2");
  check_labels(labels, m);

  for (Index i = 0; i < m; ++i) {
    double sum = 0.0;
    for (Index j = 0; j < m; ++j) {
      const double x = entries(i, j);
      if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") is not finite";
        throw Error(ErrorCode::InputFormat, os.str());
      }
      if (x < 0.0) {
        std::ostringstream os;
        os << "NegativeEntry(" << i << "," << j << ") = " << x;
        throw Error(ErrorCode::NegativeEntry, os.str());
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol_row) {
      std::ostringstream os;
      os.precision(17);
      os << "RowSumViolation(" << i << ", " << sum << ")";
      throw Error(ErrorCode::RowSumViolation, os.str());
    }
  }
  return TransitionMatrix(entries, std::move(labels), tol_row);
}

Matrix AggregatedDecomposition::reassemble() const {
  const Index n = dimension();
  Matrix out(n + 1, n + 1);
  out(0, 0) = p11;
  out.block(0, 1, 1, n) = v;
  out.block(1, 0, n, 1) = w.transpose();
  out.block(1, 1, n, n) = p;
  return out;
}

bool is_permutation(const Permutation& perm, Index n) {
  if (static_cast<Index>(perm.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index target : perm) {
    if (target < 0 || target >= n || seen[static_cast<std::size_t>(target)]) return false;
    seen[static_cast<std::size_t>(target)] = true;
  }
  return true;
}

Permutation inverse(const Permutation& perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
  return inv;
}

Permutation identity_permutation(Index n) {
  Permutation perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  return perm;
}

Permutation special_first(Index m, Index special) {
  if (special < 0 || special >= m) {
    std::ostringstream os;
    os << "special symbol index " << special << " outside [0," << m << ")";
    throw Error(ErrorCode::InvalidSymbol, os.str());
  }
  Permutation perm(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    if (i == special) perm[static_cast<std::size_t>(i)] = 0;
    else perm[static_cast<std::size_t>(i)] = i < special ? i + 1 : i;
  }
  return perm;
}

Matrix permute(const Matrix& in, const Permutation& perm) {
  const Index n = in.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = in(i, j);
  return out;
}

TransitionMatrix relabel(const TransitionMatrix& matrix, const Permutation& perm) {
  if (!is_permutation(perm, matrix.size()))
    throw Error(ErrorCode::InvalidPermutation, "relabeling is not a bijection of the alphabet");
  std::vector<std::string> labels;
  if (!matrix.labels().empty()) {
    labels.resize(matrix.labels().size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      labels[static_cast<std::size_t>(perm[i])] = matrix.labels()[i];
  }
  return TransitionMatrix::validate(permute(matrix.entries(), perm), matrix.row_tolerance(),
                                    std::move(labels));
}

AggregatedDecomposition decompose(const TransitionMatrix& matrix, Index special) {
  const Index m = matrix.size();
  const Matrix entries =
      special == 0 ? matrix.entries() : permute(matrix.entries(), special_first(m, special));

  AggregatedDecomposition d;
  d.p11 = entries(0, 0);
  d.v = entries.block(0, 1, 1, m - 1);
  d.w = entries.block(1, 0, m - 1, 1).transpose();
  d.p = entries.block(1, 1, m - 1, m - 1);
  if ((d.v.array() == 0.0).all())
    throw Error(ErrorCode::TrivialFactor, "special symbol never leaves itself (V = 0)");
  if ((d.w.array() == 0.0).all())
    throw Error(ErrorCode::TrivialFactor, "special symbol is never re-entered (W = 0)");
  return d;
}

}  // namespace aggmc
