#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "aggmc/graph.hpp"
#include "aggmc/stochastic.hpp"

namespace aggmc {

struct SpectralOptions {
  double tol_eig = 1e-10;      ///< relative eigen-residual accepted from power iteration
  double tol_cluster = 1e-8;   ///< modulus window that groups subdominant eigenvalues
  int max_iter = 10'000;
};

/// Dominant eigentriple of an irreducible nonnegative matrix. phi sums to 1,
/// psi is scaled so that psi . phi = 1, and g = phi psi^t is the limit of
/// (P / lambda1)^n in the primitive case.
struct PerronData {
  double lambda1 = 0.0;
  Vector phi;
  Vector psi;
  Matrix g;
  int iterations = 0;
};

struct SpectralGap {
  double lambda1 = 0.0;
  double lambda2_abs = 0.0;
  Index d2 = 1;          ///< algebraic size of the |lambda2| cluster
  double ratio = 0.0;    ///< lambda2_abs / lambda1
};

/// Power iteration on P + sigma I and its transpose from the uniform vector.
/// The shift makes the iteration converge for periodic input as well.
PerronData perron(const Matrix& p, const SpectralOptions& options = {});

/// Full dense spectrum (unordered).
std::vector<std::complex<double>> eigenvalues(const Matrix& p);

/// Largest modulus after removing one eigenvalue closest to lambda1.
/// Moduli below 1e-6 * lambda1 are treated as exact zeros, which absorbs the
/// O(eps^(1/k)) scatter of a defective zero eigenvalue.
SpectralGap subdominant(const Matrix& p, double lambda1, const SpectralOptions& options = {});

/// Same, removing for each target the remaining eigenvalue nearest to it.
/// A period-h block passes its h peripheral eigenvalues as targets.
SpectralGap spectrum_gap(const Matrix& p, double lambda1, std::span<const std::complex<double>> targets,
                         const SpectralOptions& options = {});

/// lambda1 * exp(2 pi i k / h), k = 0..h-1.
std::vector<std::complex<double>> peripheral_targets(double lambda1, Index h);

/// (P / lambda1)^n by repeated squaring. Intermediate products are rescaled
/// by exact powers of two, so the only rounding is that of the products.
Matrix power_limit(const Matrix& p, double lambda1, std::uint64_t n);

/// Spectral radius of a nonnegative matrix: the largest Perron value over its
/// non-trivial strongly connected components (0 if nilpotent).
double spectral_radius(const Matrix& p, const SpectralOptions& options = {});

/// Perron data of the diagonal blocks of P^h for an irreducible P of period
/// h: each block B_c B_{c+1} ... B_{c-1} is primitive with Perron value
/// lambda1^h. g_star = lim (P^h / lambda1^h)^n is block diagonal over the
/// cyclic classes, in the original indexing of P.
struct CyclicPerron {
  double lambda_star = 0.0;
  std::vector<PerronData> classes;
  Matrix g_star;
};

CyclicPerron cyclic_perron(const CyclicForm& form, const SpectralOptions& options = {});

/// Limit of (P / lambda1)^(n h) for an irreducible P with period h
/// (h = 1 gives phi psi^t).
Matrix cyclic_limit(const Matrix& p, const SpectralOptions& options = {});

}  // namespace aggmc
