#include "aggmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "aggmc/error.hpp"

namespace aggmc {

namespace {

constexpr double kZeroEigenvalueFloor = 1e-6;

struct Dominant {
  Vector x;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// Right Perron vector of `a` (sum-normalized). Iterates past the requested
// tolerance down to roundoff, stopping when the residual stalls.
Dominant dominant_vector(const Matrix& a, double shift, int max_iter) {
  const Index n = a.rows();
  Dominant out;
  out.x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  int stalled = 0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector y = a * out.x + shift * out.x;
    const double s = y.sum();
    if (!(s > 0.0)) break;
    y /= s;
    out.x = std::move(y);
    out.iterations = it;

    const Vector ax = a * out.x;
    const double lambda = ax.sum();
    const double residual = (ax - lambda * out.x).lpNorm<Eigen::Infinity>();
    if (residual < out.residual) {
      stalled = 0;
    } else if (++stalled > 50) {
      out.residual = std::min(out.residual, residual);
      break;
    }
    out.residual = std::min(out.residual, residual);
    if (residual <= 1e-15 * std::max(lambda, std::numeric_limits<double>::min())) break;
  }
  return out;
}

}  // namespace

PerronData perron(const Matrix& p, const SpectralOptions& options) {
  if (p.rows() != p.cols() || p.rows() == 0) throw Error(ErrorCode::NotSquare, "perron needs a square matrix");
  const auto structure = classify(p);
  if (!structure.is_irreducible) throw Error(ErrorCode::ReducibleInput, "perron needs an irreducible matrix");

  PerronData out;
  if (p.rows() == 1) {
    out.lambda1 = p(0, 0);
    out.phi = Vector::Ones(1);
    out.psi = Vector::Ones(1);
    out.g = Matrix::Ones(1, 1);
    return out;
  }

  const double upper = std::min(p.rowwise().sum().maxCoeff(), p.colwise().sum().maxCoeff());
  const double shift = structure.is_primitive ? 0.0 : 0.5 * upper;
  const Dominant right = dominant_vector(p, shift, options.max_iter);
  const Dominant left = dominant_vector(p.transpose(), shift, options.max_iter);

  const double lambda_right = (p * right.x).sum();
  const double lambda_left = (p.transpose() * left.x).sum();
  const double scale = std::max(lambda_right, lambda_left);
  if (!(right.residual <= options.tol_eig * scale) || !(left.residual <= options.tol_eig * scale)) {
    std::ostringstream os;
    os << "power iteration stopped after " << std::max(right.iterations, left.iterations)
       << " iterations with residual " << std::max(right.residual, left.residual);
    throw Error(ErrorCode::ConvergenceFailure, os.str());
  }

  out.phi = right.x;
  const double overlap = left.x.dot(right.x);
  out.psi = left.x / overlap;
  // Two-sided Rayleigh quotient: second-order accurate in the vector errors.
  out.lambda1 = out.psi.dot(p * out.phi) / out.psi.dot(out.phi);
  out.g = out.phi * out.psi.transpose();
  out.iterations = std::max(right.iterations, left.iterations);
  return out;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& p) {
  if (p.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(p, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "dense eigen-solver did not converge");
  const auto values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

SpectralGap spectrum_gap(const Matrix& p, double lambda1, std::span<const std::complex<double>> targets,
                         const SpectralOptions& options) {
  SpectralGap gap;
  gap.lambda1 = lambda1;
  auto spectrum = eigenvalues(p);
  for (const auto target : targets) {
    if (spectrum.empty()) break;
    auto closest = std::min_element(spectrum.begin(), spectrum.end(), [&](auto a, auto b) {
      return std::abs(a - target) < std::abs(b - target);
    });
    spectrum.erase(closest);
  }
  if (spectrum.empty()) return gap;

  std::vector<double> moduli;
  const double floor = kZeroEigenvalueFloor * std::max(lambda1, std::numeric_limits<double>::min());
  for (auto z : spectrum) {
    const double r = std::abs(z);
    moduli.push_back(r <= floor ? 0.0 : r);
  }
  gap.lambda2_abs = *std::max_element(moduli.begin(), moduli.end());
  if (gap.lambda2_abs > 0.0) {
    gap.d2 = std::count_if(moduli.begin(), moduli.end(), [&](double r) {
      return std::abs(r - gap.lambda2_abs) <= options.tol_cluster;
    });
  }
  gap.ratio = lambda1 > 0.0 ? gap.lambda2_abs / lambda1 : 0.0;
  return gap;
}

SpectralGap subdominant(const Matrix& p, double lambda1, const SpectralOptions& options) {
  const std::complex<double> target(lambda1, 0.0);
  return spectrum_gap(p, lambda1, std::span(&target, 1), options);
}

std::vector<std::complex<double>> peripheral_targets(double lambda1, Index h) {
  std::vector<std::complex<double>> out;
  for (Index k = 0; k < h; ++k)
    out.push_back(std::polar(lambda1, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(h)));
  return out;
}

namespace {

void rebalance(Matrix& m, long& exponent) {
  const double largest = m.cwiseAbs().maxCoeff();
  if (largest == 0.0 || !std::isfinite(largest)) return;
  const int e = std::ilogb(largest);
  if (e > 64 || e < -64) {
    m = m.unaryExpr([e](double x) { return std::ldexp(x, -e); });
    exponent += e;
  }
}

}  // namespace

Matrix power_limit(const Matrix& p, double lambda1, std::uint64_t n) {
  if (!(lambda1 > 0.0)) throw Error(ErrorCode::DegenerateDirection, "power_limit needs lambda1 > 0");
  Matrix result = Matrix::Identity(p.rows(), p.cols());
  long result_exp = 0;
  Matrix base = p / lambda1;
  long base_exp = 0;
  while (n > 0) {
    if (n & 1U) {
      result = result * base;
      result_exp += base_exp;
      rebalance(result, result_exp);
    }
    n >>= 1U;
    if (n > 0) {
      base = base * base;
      base_exp *= 2;
      rebalance(base, base_exp);
    }
  }
  if (result_exp != 0) {
    const int e = static_cast<int>(std::clamp<long>(result_exp, -100000, 100000));
    result = result.unaryExpr([e](double x) { return std::ldexp(x, e); });
  }
  return result;
}

double spectral_radius(const Matrix& p, const SpectralOptions& options) {
  double rho = 0.0;
  for (const auto& comp : strongly_connected_components(p)) {
    if (is_trivial_component(p, comp)) continue;
    rho = std::max(rho, perron(submatrix(p, comp, comp), options).lambda1);
  }
  return rho;
}

CyclicPerron cyclic_perron(const CyclicForm& form, const SpectralOptions& options) {
  const Index h = form.period;
  Index n = 0;
  for (const auto& cls : form.classes) n += static_cast<Index>(cls.size());

  CyclicPerron out;
  out.g_star = Matrix::Zero(n, n);
  for (Index c = 0; c < h; ++c) {
    Matrix product = form.blocks[static_cast<std::size_t>(c)];
    for (Index step = 1; step < h; ++step)
      product = product * form.blocks[static_cast<std::size_t>((c + step) % h)];
    out.classes.push_back(perron(product, options));
    const auto& data = out.classes.back();
    const auto& states = form.classes[static_cast<std::size_t>(c)];
    for (std::size_t a = 0; a < states.size(); ++a)
      for (std::size_t b = 0; b < states.size(); ++b)
        out.g_star(states[a], states[b]) = data.g(static_cast<Index>(a), static_cast<Index>(b));
  }
  out.lambda_star = out.classes.front().lambda1;
  return out;
}

Matrix cyclic_limit(const Matrix& p, const SpectralOptions& options) {
  const auto structure = classify(p);
  if (!structure.is_irreducible) throw Error(ErrorCode::NotIrreducible, "cyclic_limit needs an irreducible matrix");
  if (structure.is_primitive) return perron(p, options).g;
  return cyclic_perron(cyclic_normal_form(p), options).g_star;
}

}  // namespace aggmc
