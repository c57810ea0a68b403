#include "aggmc/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "aggmc/error.hpp"

namespace aggmc {

namespace {

constexpr double kErrorFloor = 1e-12;
constexpr Index kMaxDiagnosticPeriod = 64;
constexpr Index kMaxResiduePeriod = 4096;

double spread(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi - *lo;
}

std::vector<double> included(const ResidueLimits& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.limits.size(); ++i)
    if (!r.excluded[i]) out.push_back(r.limits[i]);
  return out;
}

}  // namespace

RunTable run_table(const AggregatedDecomposition& d, Index steps) {
  RunTable t;
  RowVector x = d.v;
  double log_mass = 0.0;
  for (Index k = 0; k <= steps; ++k) {
    const double s = x.sum();
    if (!(s > 0.0)) break;
    log_mass += std::log(s);
    x /= s;
    t.log_mass.push_back(log_mass);
    t.exit.push_back(x.dot(d.w));
    x = x * d.p;
  }
  return t;
}

double pk_matrix(const AggregatedDecomposition& d, Index k) {
  if (k < 0) throw Error(ErrorCode::UnreachableRun, "negative run length");
  if (k == 0) return d.p11;
  const RunTable t = run_table(d, k - 1);
  if (t.defined() < k) {
    std::ostringstream os;
    os << "a run of " << k << " aggregated symbols after the special symbol has probability zero";
    throw Error(ErrorCode::UnreachableRun, os.str());
  }
  return t.exit[static_cast<std::size_t>(k - 1)];
}

std::vector<double> tail_oscillation(std::span<const double> values) {
  std::vector<double> out(values.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = values.size(); i-- > 0;) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
    out[i] = hi - lo;
  }
  return out;
}

PkSequence pk_sequence(const AggregatedDecomposition& d, Index horizon) {
  PkSequence seq;
  seq.horizon = horizon;
  seq.values.push_back(d.p11);
  if (horizon > 0) {
    const RunTable t = run_table(d, horizon - 1);
    seq.values.insert(seq.values.end(), t.exit.begin(), t.exit.end());
    seq.truncated = t.defined() < horizon;
  }
  seq.tail_oscillation = tail_oscillation(seq.values);
  return seq;
}

double p_infinity(const AggregatedDecomposition& d, const PerronData& perron) {
  if (!classify(d.p).is_primitive)
    throw Error(ErrorCode::NotPrimitive, "p_infinity needs a primitive aggregated block");
  const RowVector vg = d.v * perron.g;
  const double den = vg.sum();
  if (!(den > 0.0)) throw Error(ErrorCode::DegenerateDirection, "V G 1 vanishes");
  return vg.dot(d.w) / den;
}

ResidueLimits residue_limits(const AggregatedDecomposition& d, const Matrix& projector, Index h) {
  ResidueLimits out;
  RowVector x = d.v * projector;
  // Entries of the projector carry roundoff, so "no mass" is relative to V.
  const double floor = 1e-13 * d.v.sum();
  for (Index r = 0; r < h; ++r) {
    const double mass = x.sum();
    if (mass > floor) {
      x /= mass;
      out.limits.push_back(x.dot(d.w));
      out.excluded.push_back(false);
    } else {
      out.limits.push_back(std::numeric_limits<double>::quiet_NaN());
      out.excluded.push_back(true);
    }
    x = x * d.p;
  }
  return out;
}

ResidueLimits periodic_limits(const AggregatedDecomposition& d, const CyclicForm& form,
                              const CyclicPerron& perron_of_power) {
  return residue_limits(d, perron_of_power.g_star, form.period);
}

std::string_view to_string(ContinuityStatus s) noexcept {
  switch (s) {
    case ContinuityStatus::Continuous: return "Continuous";
    case ContinuityStatus::EssentialDiscontinuity: return "EssentialDiscontinuity";
    case ContinuityStatus::NumericOnly: return "NumericOnly";
  }
  return "?";
}

std::string_view to_string(TheoremBasis b) noexcept {
  switch (b) {
    case TheoremBasis::Thm1Primitive: return "Thm1Primitive";
    case TheoremBasis::Thm1Periodic: return "Thm1Periodic";
    case TheoremBasis::Thm3Reducible: return "Thm3Reducible";
    case TheoremBasis::FiniteOrder: return "FiniteOrder";
    case TheoremBasis::None: return "None";
  }
  return "?";
}

double estimate_prefactor(std::span<const double> values, double limit, double ratio, Index degree) {
  double c = 0.0;
  for (std::size_t n = 1; n < values.size(); ++n) {
    const double err = std::abs(values[n] - limit);
    if (err <= kErrorFloor) continue;
    const double nd = static_cast<double>(n);
    const double envelope = std::pow(nd, static_cast<double>(degree)) * std::pow(ratio, nd);
    if (!(envelope > 0.0)) continue;
    c = std::max(c, err / envelope);
  }
  return c;
}

double rate_bound(const RateSummary& rate, Index n) {
  if (rate.bound_ratio == 0.0) return n >= rate.stabilization ? 0.0 : 1.0;
  const double nd = static_cast<double>(n);
  return rate.prefactor * std::pow(nd, static_cast<double>(rate.bound_poly_degree)) *
         std::pow(rate.bound_ratio, nd);
}

std::optional<double> fit_decay_ratio(std::span<const double> values, double limit, Index from, Index to,
                                      double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  const Index last = std::min<Index>(to, static_cast<Index>(values.size()) - 1);
  for (Index n = std::max<Index>(from, 0); n <= last; ++n) {
    const double err = std::abs(values[static_cast<std::size_t>(n)] - limit);
    if (!(err > floor)) continue;
    const double x = static_cast<double>(n);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) return std::nullopt;
  const double denom = count * sxx - sx * sx;
  if (denom <= 0.0) return std::nullopt;
  return std::exp((count * sxy - sx * sy) / denom);
}

double HarrisBound::at(Index n) const {
  if (n <= 1) return 1.0;
  return std::pow(base, static_cast<double>(n - 1));
}

HarrisBound harris_bound(const TransitionMatrix& matrix) {
  const Matrix& p = matrix.entries();
  const Index m = p.rows();
  if (!(p.minCoeff() > 0.0))
    throw Error(ErrorCode::NotStrictlyPositive, "the Harris bound needs a strictly positive matrix");
  // min over (i,j,k,l) of p_kj p_il / (p_ij p_kl)
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      for (Index k = 0; k < m; ++k)
        for (Index l = 0; l < m; ++l)
          best = std::min(best, p(k, j) * p(i, l) / (p(i, j) * p(k, l)));
  HarrisBound out;
  out.lambda = best / static_cast<double>(m * m);
  out.base = 1.0 - out.lambda;
  return out;
}

double harris_bound(const TransitionMatrix& matrix, Index n) { return harris_bound(matrix).at(n); }

MarkovOrderResult markov_order(const AggregatedDecomposition& d, const AnalysisOptions& options) {
  MarkovOrderResult out;
  const Index dim = d.dimension();
  const Index window_end = 2 * dim + 1;
  const PkSequence seq = pk_sequence(d, window_end);
  const auto& p = seq.values;
  const Index last = static_cast<Index>(p.size()) - 1;
  out.truncated = seq.truncated;

  bool finite = seq.truncated;
  if (!finite) {
    std::span<const double> tail(p.begin() + (dim + 1), p.end());
    finite = spread(tail) <= options.tol_stab;
  }
  if (finite) {
    const double target = p[static_cast<std::size_t>(last)];
    Index k = last;
    while (k > 1 && std::abs(p[static_cast<std::size_t>(k - 1)] - target) <= options.tol_stab) --k;
    out.is_finite_order = true;
    out.order = std::max<Index>(k, 1);
    out.stabilization_k = *out.order - 1;
    out.eventual_value = target;
  }

  const double rho = spectral_radius(d.p, options.spectral);
  out.lambda1 = rho;
  const Matrix q = rho > 0.0 ? Matrix(d.p / rho) : d.p;
  Matrix qk = Matrix::Identity(dim, dim);
  for (Index k = 0; k <= dim + 1; ++k) {
    const Matrix next = qk * q;
    const double diff = (next - qk).cwiseAbs().rowwise().sum().maxCoeff();
    if (diff <= options.tol_stab) {
      out.power_stabilization_k = k;
      break;
    }
    qk = next;
  }

  const auto spectrum = eigenvalues(d.p);
  const double floor = 1e-6 * std::max(rho, std::numeric_limits<double>::min());
  const auto nonnull = std::count_if(spectrum.begin(), spectrum.end(), [&](auto z) { return std::abs(z) > floor; });
  out.single_nonnull_eigenvalue = nonnull == 1;
  return out;
}

AggregatedDecomposition restrict_to(const AggregatedDecomposition& d, std::span<const Index> states) {
  AggregatedDecomposition r;
  r.p11 = d.p11;
  const auto n = static_cast<Index>(states.size());
  r.v.resize(n);
  r.w.resize(n);
  for (Index i = 0; i < n; ++i) {
    r.v(i) = d.v(states[static_cast<std::size_t>(i)]);
    r.w(i) = d.w(states[static_cast<std::size_t>(i)]);
  }
  r.p = submatrix(d.p, states, states);
  return r;
}

namespace {

struct BlockLimit {
  bool applies = false;
  std::string reason;
  Index period = 1;
  Matrix projector;
};

// lim (P / lambda_max)^(n h) for a reducible block in the canonical layout,
// when the transient part is strictly slower than the dominating blocks.
BlockLimit reducible_limit(const ReducibleForm& form, const AnalysisOptions& options) {
  BlockLimit out;
  if (form.final_blocks.empty()) {
    out.reason = "no irreducible final class is reachable";
    return out;
  }
  const double lambda = form.lambda_max;
  if (!(lambda > 0.0)) {
    out.reason = "dominating Perron value is zero";
    return out;
  }
  if (form.transient_radius >= lambda * (1.0 - options.spectral.tol_eig)) {
    out.reason = "a transient class has a Perron value >= the dominating one";
    return out;
  }
  Index h = 1;
  for (Index j : form.dominating) h = std::lcm(h, form.final_periods[static_cast<std::size_t>(j)]);
  if (h > kMaxResiduePeriod) {
    out.reason = "period of the dominating classes is too large";
    return out;
  }

  const Index n = form.permuted.rows();
  const Index n1 = static_cast<Index>(form.transient_states.size());
  Matrix pi22 = Matrix::Zero(n - n1, n - n1);
  Index offset = 0;
  for (std::size_t j = 0; j < form.final_blocks.size(); ++j) {
    const Index size = form.final_blocks[j].rows();
    if (std::find(form.dominating.begin(), form.dominating.end(), static_cast<Index>(j)) != form.dominating.end())
      pi22.block(offset, offset, size, size) = cyclic_limit(form.final_blocks[j], options.spectral);
    offset += size;
  }

  Matrix pi = Matrix::Zero(n, n);
  pi.bottomRightCorner(n - n1, n - n1) = pi22;
  if (n1 > 0) {
    const Matrix a = power_limit(form.permuted, lambda, static_cast<std::uint64_t>(h));
    const Matrix a11 = a.topLeftCorner(n1, n1);
    const Matrix a12 = a.topRightCorner(n1, n - n1);
    const Matrix rhs = a12 * pi22;
    pi.topRightCorner(n1, n - n1) = (Matrix::Identity(n1, n1) - a11).partialPivLu().solve(rhs);
  }
  out.applies = true;
  out.period = h;
  out.projector = permute(pi, inverse(form.perm));
  return out;
}

void decide(ContinuityVerdict& v, const ResidueLimits& limits, const AnalysisOptions& options) {
  v.limit_cycle = limits.limits;
  const auto values = included(limits);
  if (values.empty()) {
    v.status = ContinuityStatus::NumericOnly;
    v.note = "every residue direction is degenerate";
    return;
  }
  if (spread(values) <= options.tol_limit) {
    v.status = ContinuityStatus::Continuous;
    v.p_infinity = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  } else {
    v.status = ContinuityStatus::EssentialDiscontinuity;
  }
}

Index diagnostic_period(const Matrix& p, const SpectralOptions& options) {
  const auto comps = strongly_connected_components(p);
  std::vector<std::pair<double, Index>> basic;
  double rho = 0.0;
  for (const auto& c : comps) {
    if (is_trivial_component(p, c)) continue;
    const Matrix block = submatrix(p, c, c);
    const double lambda = perron(block, options).lambda1;
    basic.emplace_back(lambda, component_period(p, c));
    rho = std::max(rho, lambda);
  }
  Index h = 0;
  for (const auto& [lambda, period] : basic)
    if (lambda >= rho * (1.0 - 1e-9)) h = h == 0 ? period : std::lcm(h, period);
  return std::clamp<Index>(h, 1, kMaxDiagnosticPeriod);
}

void fill_rate(FactorAnalysis& fa, const SpectralGap& theorem_gap, const SpectralGap& bound_gap) {
  RateSummary rate;
  rate.ratio = theorem_gap.ratio;
  rate.poly_degree = theorem_gap.d2 - 1;
  rate.bound_ratio = bound_gap.ratio;
  rate.bound_poly_degree = bound_gap.d2 - 1;
  const auto& values = fa.pk.values;
  const double limit = *fa.verdict.p_infinity;
  rate.prefactor = estimate_prefactor(values, limit, rate.bound_ratio, rate.bound_poly_degree);
  Index stab = static_cast<Index>(values.size());
  while (stab > 1 && std::abs(values[static_cast<std::size_t>(stab - 1)] - limit) <= kErrorFloor) --stab;
  rate.stabilization = stab;
  rate.observed_ratio = fit_decay_ratio(values, limit, 10, 60);
  fa.rate = rate;
  fa.verdict.rate_ratio = rate.ratio;
  fa.verdict.rate_poly_degree = rate.poly_degree;
}

}  // namespace

FactorAnalysis analyze_factor(const TransitionMatrix& matrix, Index special, const AnalysisOptions& options) {
  FactorAnalysis fa;
  fa.special = special;
  fa.decomposition = decompose(matrix, special);
  const auto& d = fa.decomposition;
  fa.structure = classify(d.p);
  fa.pk = pk_sequence(d, options.horizon);
  fa.markov = markov_order(d, options);

  std::vector<Index> support;
  for (Index i = 0; i < d.dimension(); ++i)
    if (d.v(i) > 0.0) support.push_back(i);
  fa.reachable = reachable_from(d.p, support);

  auto& v = fa.verdict;
  switch (fa.structure.classification) {
    case Classification::Primitive: {
      fa.analyzed_structure = fa.structure;
      fa.perron = perron(d.p, options.spectral);
      fa.gap = subdominant(d.p, fa.perron->lambda1, options.spectral);
      v.basis = TheoremBasis::Thm1Primitive;
      const double p_inf = p_infinity(d, *fa.perron);
      v.status = ContinuityStatus::Continuous;
      v.p_infinity = p_inf;
      v.limit_cycle = {p_inf};
      fill_rate(fa, *fa.gap, *fa.gap);
      return fa;
    }
    case Classification::IrreduciblePeriodic: {
      fa.analyzed_structure = fa.structure;
      fa.cyclic = cyclic_normal_form(d.p);
      const CyclicPerron cp = cyclic_perron(*fa.cyclic, options.spectral);
      fa.perron = perron(d.p, options.spectral);
      const double lambda = fa.perron->lambda1;
      const auto targets = peripheral_targets(lambda, fa.cyclic->period);
      fa.gap = spectrum_gap(d.p, lambda, targets, options.spectral);
      // The spectrum is invariant under rotation by 2 pi / h; count orbits.
      fa.gap->d2 = std::max<Index>(1, fa.gap->d2 / fa.cyclic->period);
      v.basis = TheoremBasis::Thm1Periodic;
      decide(v, periodic_limits(d, *fa.cyclic, cp), options);
      if (v.status == ContinuityStatus::Continuous) fill_rate(fa, *fa.gap, *fa.gap);
      return fa;
    }
    case Classification::Reducible:
      break;
  }

  // Only states reachable from V influence p_k.
  const AggregatedDecomposition r = restrict_to(d, fa.reachable);
  fa.analyzed_structure = classify(r.p);
  fa.reducible = reducible_canonical_form(r.p, options.spectral);
  const auto& form = *fa.reducible;
  const BlockLimit limit = reducible_limit(form, options);

  if (limit.applies) {
    v.basis = TheoremBasis::Thm3Reducible;
    decide(v, residue_limits(r, limit.projector, limit.period), options);
    const std::size_t first = static_cast<std::size_t>(form.dominating.front());
    fa.perron = perron(form.final_blocks[first], options.spectral);

    // Theorem rate: slowest dominating block. Bound rate: whole reachable block.
    SpectralGap theorem_gap;
    std::vector<std::complex<double>> all_targets;
    for (Index j : form.dominating) {
      const auto& block = form.final_blocks[static_cast<std::size_t>(j)];
      const double lambda = form.perron_values[static_cast<std::size_t>(j)];
      const auto targets = peripheral_targets(lambda, form.final_periods[static_cast<std::size_t>(j)]);
      all_targets.insert(all_targets.end(), targets.begin(), targets.end());
      SpectralGap g = spectrum_gap(block, lambda, targets, options.spectral);
      g.d2 = std::max<Index>(1, g.d2 / static_cast<Index>(targets.size()));
      if (g.ratio > theorem_gap.ratio || (g.ratio == theorem_gap.ratio && g.d2 > theorem_gap.d2)) theorem_gap = g;
    }
    theorem_gap.lambda1 = form.lambda_max;
    SpectralGap bound_gap = spectrum_gap(r.p, form.lambda_max, all_targets, options.spectral);
    fa.gap = theorem_gap;
    if (v.status == ContinuityStatus::Continuous) fill_rate(fa, theorem_gap, bound_gap);
    if (fa.reachable.size() != static_cast<std::size_t>(d.dimension()))
      v.note = "analysis restricted to the states reachable from the special symbol";
    return fa;
  }

  if (fa.markov.is_finite_order) {
    v.basis = TheoremBasis::FiniteOrder;
    v.status = ContinuityStatus::Continuous;
    v.p_infinity = fa.markov.eventual_value;
    v.limit_cycle = {*fa.markov.eventual_value};
    v.note = limit.reason + "; the image has finite Markov order";
    return fa;
  }

  v.basis = TheoremBasis::None;
  v.status = ContinuityStatus::NumericOnly;
  v.note = limit.reason;
  const Index h = diagnostic_period(r.p, options.spectral);
  v.diagnostic_period = h;
  const Index last = static_cast<Index>(fa.pk.values.size()) - 1;
  for (Index res = 0; res < h; ++res) {
    // largest n <= last with n = res + 1 (mod h)
    Index n = last - ((last - (res + 1)) % h + h) % h;
    v.diagnostic_residues.push_back(n >= 1 ? fa.pk.values[static_cast<std::size_t>(n)]
                                           : std::numeric_limits<double>::quiet_NaN());
  }
  return fa;
}

ContinuityVerdict continuity_verdict(const TransitionMatrix& matrix, Index special, const AnalysisOptions& options) {
  return analyze_factor(matrix, special, options).verdict;
}

}  // namespace aggmc
