#include "aggmc/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aggmc/error.hpp"

namespace aggmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDiscrepancyTol = 1e-9;

// log V P^j W^t from a run table (j >= 0).
double log_hit(const RunTable& t, Index j) {
  if (j >= t.defined()) return kNegInf;
  const double exit = t.exit[static_cast<std::size_t>(j)];
  return exit > 0.0 ? t.log_mass[static_cast<std::size_t>(j)] + std::log(exit) : kNegInf;
}

double log_factor(const AggregatedDecomposition& d, const RunTable& t, Index k) {
  if (k == 0) return d.p11 > 0.0 ? std::log(d.p11) : kNegInf;
  return log_hit(t, k - 1);
}

struct LogTerms {
  double log_r;
  double log_s;
};

LogTerms log_terms(const AggregatedDecomposition& d, const RunTable& t, Index m, Index n) {
  return {log_factor(d, t, m) + log_factor(d, t, n), log_hit(t, m + n)};
}

double ratio(const LogTerms& lt) {
  if (lt.log_r == kNegInf && lt.log_s == kNegInf) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 / (1.0 + std::exp(lt.log_s - lt.log_r));
}

double checked_p(const AggregatedDecomposition& d, const RunTable& t, Index m, Index n) {
  const double p = ratio(log_terms(d, t, m, n));
  if (std::isnan(p)) {
    std::ostringstream os;
    os << "the conditioning event for (m, n) = (" << m << ", " << n << ") has probability zero";
    throw Error(ErrorCode::UnreachableEvent, os.str());
  }
  return p;
}

}  // namespace

GibbsTerms gibbs_terms(const AggregatedDecomposition& d, Index m, Index n) {
  if (m < 0 || n < 0) throw Error(ErrorCode::UnreachableEvent, "m and n must be nonnegative");
  const RunTable t = run_table(d, m + n);
  const LogTerms lt = log_terms(d, t, m, n);
  GibbsTerms out;
  out.r = std::exp(lt.log_r);
  out.s = std::exp(lt.log_s);
  out.p = checked_p(d, t, m, n);
  return out;
}

double p_mn(const AggregatedDecomposition& d, Index m, Index n) { return gibbs_terms(d, m, n).p; }

GibbsGrid gibbs_grid(const AggregatedDecomposition& d, Index m_max, Index n_max) {
  const RunTable t = run_table(d, m_max + n_max);
  GibbsGrid g;
  g.values.resize(m_max + 1, n_max + 1);
  g.r_values.resize(m_max + 1, n_max + 1);
  g.s_values.resize(m_max + 1, n_max + 1);
  for (Index m = 0; m <= m_max; ++m)
    for (Index n = 0; n <= n_max; ++n) {
      const LogTerms lt = log_terms(d, t, m, n);
      g.r_values(m, n) = std::exp(lt.log_r);
      g.s_values(m, n) = std::exp(lt.log_s);
      g.values(m, n) = ratio(lt);
    }
  return g;
}

GibbsVerdict gibbs_verdict(const FactorAnalysis& analysis, Index m_max, Index n_max) {
  const auto& d = analysis.decomposition;
  GibbsVerdict out;
  out.status = analysis.verdict.status;
  out.basis = analysis.verdict.basis;
  out.gibbsian = out.status == ContinuityStatus::Continuous;
  out.grid = gibbs_grid(d, m_max, n_max);

  const Index h = std::max<Index>({1, static_cast<Index>(analysis.verdict.limit_cycle.size()),
                                   analysis.verdict.diagnostic_period});
  out.period = h;
  out.probe_base = ((60 + h - 1) / h) * h;
  const Index reach = std::max({m_max + n_max + 1, 2 * (out.probe_base + h), Index{120}});
  const RunTable t = run_table(d, reach);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index a = 0; a < h; ++a)
    for (Index b = 0; b < h; ++b) {
      const double p = ratio(log_terms(d, t, out.probe_base + a, out.probe_base + b));
      out.subsequence_limits.push_back(p);
      if (std::isnan(p)) continue;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  out.subsequence_spread = hi >= lo ? hi - lo : 0.0;
  out.diagonal_30 = ratio(log_terms(d, t, 30, 30));
  out.diagonal_60 = ratio(log_terms(d, t, 60, 60));

  // Displayed closed form for p_{m+1,n+1}, kept only to report where it departs from r / (r + s).
  for (Index m = 0; m + 1 <= m_max; ++m)
    for (Index n = 0; n + 1 <= n_max; ++n) {
      const Index j = m + n + 1;
      if (j >= t.defined()) continue;
      const double display =
          std::exp(log_hit(t, m) + log_hit(t, n) - t.log_mass[static_cast<std::size_t>(j)]);
      const double p = out.grid.values(m + 1, n + 1);
      if (std::isnan(p)) continue;
      const double diff = std::abs(display - p);
      out.max_discrepancy = std::max(out.max_discrepancy, diff);
      if (diff > kDiscrepancyTol) ++out.discrepancy_count;
    }
  if (out.discrepancy_count > 0) {
    std::ostringstream os;
    os << "the closed form V P^m W V P^n W / V P^(m+n+1) 1 differs from r/(r+s) in " << out.discrepancy_count
       << " cells (max " << out.max_discrepancy << "); the grid uses r/(r+s)";
    out.note = os.str();
  }
  return out;
}

GibbsVerdict gibbs_verdict(const TransitionMatrix& matrix, Index m_max, Index n_max, Index special,
                           const AnalysisOptions& options) {
  return gibbs_verdict(analyze_factor(matrix, special, options), m_max, n_max);
}

}  // namespace aggmc
