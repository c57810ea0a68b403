#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggmc/factor.hpp"

namespace aggmc {

/// Conditional probability of a 1 at time 0 given a 1 at -m-1, zeros on
/// [-m, -1], zeros on [1, n] and a 1 at n + 1. With f(0) = P11 and
/// f(k) = V P^(k-1) W^t,
///
///     r = f(m) f(n),   s = V P^(m+n) W^t,   p = r / (r + s).
struct GibbsTerms {
  double r = 0.0;
  double s = 0.0;
  double p = 0.0;
};

GibbsTerms gibbs_terms(const AggregatedDecomposition& d, Index m, Index n);
double p_mn(const AggregatedDecomposition& d, Index m, Index n);

/// values(m, n) = p_{m,n} for 0 <= m <= M, 0 <= n <= N.
struct GibbsGrid {
  Matrix values;
  Matrix r_values;
  Matrix s_values;
};

GibbsGrid gibbs_grid(const AggregatedDecomposition& d, Index m_max, Index n_max);

struct GibbsVerdict {
  ContinuityStatus status = ContinuityStatus::NumericOnly;
  TheoremBasis basis = TheoremBasis::None;
  bool gibbsian = false;
  GibbsGrid grid;

  // Joint limits: sub[a * h + b] = p_{L + a, L + b} for a large multiple L of h.
  Index period = 1;
  Index probe_base = 0;
  std::vector<double> subsequence_limits;
  double subsequence_spread = 0.0;

  double diagonal_30 = 0.0;
  double diagonal_60 = 0.0;

  // Cells (m + 1, n + 1) where V P^m W V P^n W / V P^(m+n+1) 1 differs from p.
  Index discrepancy_count = 0;
  double max_discrepancy = 0.0;
  std::string note;
};

GibbsVerdict gibbs_verdict(const TransitionMatrix& matrix, Index m_max, Index n_max, Index special = 0,
                           const AnalysisOptions& options = {});
GibbsVerdict gibbs_verdict(const FactorAnalysis& analysis, Index m_max, Index n_max);

}  // namespace aggmc
