#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include "aggmc/aggmc.hpp"

namespace aggmc::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(AGGMC_FIXTURE_DIR) / name;
}

inline TransitionMatrix load_fixture(const std::string& name) { return load_matrix_file(fixture(name)).matrix; }

inline double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Row-stochastic matrix with random sparsity; every row keeps at least one
// positive entry. Redrawn until the special symbol (index 0) both leaves and
// can be re-entered in one step, so the decomposition is non-trivial.
inline TransitionMatrix random_valid(std::mt19937_64& rng, Index m, double zero_probability = 0.3) {
  while (true) {
    Matrix a(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) a(i, j) = uniform01(rng) < zero_probability ? 0.0 : uniform01(rng);
      if (a.row(i).sum() == 0.0) a(i, std::uniform_int_distribution<Index>(0, m - 1)(rng)) = 1.0;
      a.row(i) /= a.row(i).sum();
    }
    if (a.row(0).tail(m - 1).sum() > 0.0 && a.col(0).tail(m - 1).sum() > 0.0)
      return TransitionMatrix::validate(a, 1e-12);
  }
}

inline TransitionMatrix random_positive(std::mt19937_64& rng, Index m) {
  Matrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) a(i, j) = 0.05 + uniform01(rng);
    a.row(i) /= a.row(i).sum();
  }
  return TransitionMatrix::validate(a, 1e-12);
}

// Special symbol plus h cyclic classes of `size` states each. Every block
// B_c (class c -> class c+1) has all column sums equal to k, so the
// aggregated block has constant column sums k.
inline TransitionMatrix random_block_cyclic(std::mt19937_64& rng, Index h, Index size, double k) {
  const Index n = h * size;
  while (true) {
    Matrix p = Matrix::Zero(n, n);
    for (Index c = 0; c < h; ++c) {
      Matrix b(size, size);
      for (Index i = 0; i < size; ++i)
        for (Index j = 0; j < size; ++j) b(i, j) = 0.1 + uniform01(rng);
      for (Index j = 0; j < size; ++j) b.col(j) *= k / b.col(j).sum();
      p.block(c * size, ((c + 1) % h) * size, size, size) = b;
    }
    const Vector row_sums = p.rowwise().sum();
    if (row_sums.maxCoeff() >= 0.98) continue;
    Matrix full = Matrix::Zero(n + 1, n + 1);
    const double p11 = 0.1 + 0.4 * uniform01(rng);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = 0.05 + uniform01(rng);
    v *= (1.0 - p11) / v.sum();
    full(0, 0) = p11;
    full.block(0, 1, 1, n) = v.transpose();
    full.block(1, 1, n, n) = p;
    full.block(1, 0, n, 1) = Vector::Ones(n) - row_sums;
    return TransitionMatrix::validate(full, 1e-12);
  }
}

// Every aggregated state returns to the special symbol with the same
// probability c, so the image is an order-1 chain.
inline TransitionMatrix random_constant_w(std::mt19937_64& rng, Index m) {
  const double c = 0.1 + 0.7 * uniform01(rng);
  Matrix a(m, m);
  for (Index j = 0; j < m; ++j) a(0, j) = 0.05 + uniform01(rng);
  a.row(0) /= a.row(0).sum();
  for (Index i = 1; i < m; ++i) {
    double s = 0.0;
    for (Index j = 1; j < m; ++j) s += (a(i, j) = uniform01(rng) < 0.25 ? 0.0 : 0.05 + uniform01(rng));
    if (s == 0.0) s += (a(i, 1) = 1.0);
    for (Index j = 1; j < m; ++j) a(i, j) *= (1.0 - c) / s;
    a(i, 0) = c;
  }
  return TransitionMatrix::validate(a, 1e-12);
}

}  // namespace aggmc::testing
