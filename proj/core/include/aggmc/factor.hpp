#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aggmc/graph.hpp"
#include "aggmc/spectral.hpp"
#include "aggmc/stochastic.hpp"

namespace aggmc {

struct AnalysisOptions {
  SpectralOptions spectral;
  double tol_limit = 1e-10;   ///< equality of residue-class limits
  double tol_stab = 1e-10;    ///< equality test used by Markov-order detection
  Index horizon = 200;        ///< length of the computed p_k window
};

/// Forward run of the aggregated block started from v. For k = 0..steps
/// (while defined):
///
///     log_mass[k] = log(v P^k 1^t)
///     exit[k]     = v P^k w^t / v P^k 1^t
///
/// The row vector is renormalized to unit sum after every product, so no
/// entry overflows or underflows however long the run.
struct RunTable {
  std::vector<double> log_mass;
  std::vector<double> exit;

  /// Number of defined indices; index `defined()` has zero mass.
  Index defined() const noexcept { return static_cast<Index>(exit.size()); }
};

RunTable run_table(const AggregatedDecomposition& d, Index steps);

enum class PkSource { MatrixPower, Enumeration };

/// p_0 .. p_K, where p_k is the probability of a 1 right after a 1 followed
/// by k zeros. `truncated` is set when a zero-run of length K' <= K after a 1
/// has probability zero; values then stops at p_{K'}.
struct PkSequence {
  std::vector<double> values;
  Index horizon = 0;
  PkSource source = PkSource::MatrixPower;
  bool truncated = false;
  /// tail_oscillation[k] = sup over l, m >= k (inside the window) of |p_l - p_m|.
  std::vector<double> tail_oscillation;
};

/// p_0 = P11; p_k = V P^(k-1) W^t / V P^(k-1) 1^t for k >= 1.
double pk_matrix(const AggregatedDecomposition& d, Index k);
PkSequence pk_sequence(const AggregatedDecomposition& d, Index horizon);
std::vector<double> tail_oscillation(std::span<const double> values);

/// V G W^t / V G 1^t for primitive P.
double p_infinity(const AggregatedDecomposition& d, const PerronData& perron);

/// lim_n p_(n h + r + 1) for r = 0..h-1. An entry is flagged in `excluded`
/// (and set to NaN) when its residue direction carries no mass.
struct ResidueLimits {
  std::vector<double> limits;
  std::vector<bool> excluded;
};

ResidueLimits periodic_limits(const AggregatedDecomposition& d, const CyclicForm& form,
                              const CyclicPerron& perron_of_power);

/// Same quantity for an arbitrary limit projector Pi = lim (P / lambda)^(n h):
/// limits[r] = V Pi P^r W^t / V Pi P^r 1^t.
ResidueLimits residue_limits(const AggregatedDecomposition& d, const Matrix& projector, Index h);

enum class ContinuityStatus { Continuous, EssentialDiscontinuity, NumericOnly };
enum class TheoremBasis { Thm1Primitive, Thm1Periodic, Thm3Reducible, FiniteOrder, None };

std::string_view to_string(ContinuityStatus s) noexcept;
std::string_view to_string(TheoremBasis b) noexcept;

struct ContinuityVerdict {
  ContinuityStatus status = ContinuityStatus::NumericOnly;
  TheoremBasis basis = TheoremBasis::None;
  std::optional<double> p_infinity;       ///< present iff Continuous
  std::vector<double> limit_cycle;        ///< residue limits behind the decision
  std::optional<double> rate_ratio;       ///< |lambda2| / lambda1 of the deciding block
  std::optional<Index> rate_poly_degree;  ///< d2 - 1
  /// NumericOnly: tail values of p along residues of `diagnostic_period`.
  Index diagnostic_period = 0;
  std::vector<double> diagnostic_residues;
  std::string note;
};

/// Continuity-rate summary for the convergent cases with a spectral rate.
///
/// `ratio` is the theorem quantity |lambda2| / lambda1 of the deciding
/// irreducible block. `bound_ratio` is the subdominant modulus of the whole
/// reachable aggregated block relative to lambda1; it governs |p_n - p_inf|
/// when other blocks decay more slowly than the dominating block's own
/// second eigenvalue. The prefactor is empirical (max over the window).
struct RateSummary {
  double ratio = 0.0;
  Index poly_degree = 0;
  double bound_ratio = 0.0;
  Index bound_poly_degree = 0;
  double prefactor = 0.0;
  std::optional<double> observed_ratio;
  Index stabilization = 0;  ///< first n after which |p_n - p_inf| sits at roundoff
};

double estimate_prefactor(std::span<const double> values, double limit, double ratio, Index degree);
double rate_bound(const RateSummary& rate, Index n);

/// Least-squares decay ratio of |p_n - limit| for n in [from, to], using only
/// errors above `floor`. Needs at least three points.
std::optional<double> fit_decay_ratio(std::span<const double> values, double limit, Index from, Index to,
                                      double floor = 1e-13);

/// Harris' comparison bound (1 - lambda)^(n - 1) with
/// lambda = min_{i,j,k,l} P_kj P_il / (|A|^2 P_ij P_kl) over strictly positive P.
struct HarrisBound {
  double lambda = 0.0;
  double base = 1.0;
  double at(Index n) const;
};

HarrisBound harris_bound(const TransitionMatrix& matrix);
double harris_bound(const TransitionMatrix& matrix, Index n);

struct MarkovOrderResult {
  bool is_finite_order = false;
  std::optional<Index> order;
  /// order - 1: p_n = p_(k+1) for every n >= k + 1.
  std::optional<Index> stabilization_k;
  /// Minimal k with (P / lambda1)^(k+1) = (P / lambda1)^k, if any.
  std::optional<Index> power_stabilization_k;
  bool single_nonnull_eigenvalue = false;
  double lambda1 = 0.0;
  std::optional<double> eventual_value;
  bool truncated = false;
};

/// The sequence x_n = V P^n (W - c 1)^t obeys a linear recurrence of order
/// dim P, and an eventually-zero one vanishes from n = dim P on. Checking
/// p over [1, 2 dim + 1] therefore decides finite order exactly (up to
/// tol_stab). The power-stabilization criterion is reported alongside.
MarkovOrderResult markov_order(const AggregatedDecomposition& d, const AnalysisOptions& options = {});

/// Everything the continuity analysis computes for one matrix.
struct FactorAnalysis {
  Index special = 0;
  AggregatedDecomposition decomposition;
  StructureReport structure;                 ///< of the full aggregated block
  std::vector<Index> reachable;              ///< aggregated states reachable from V
  StructureReport analyzed_structure;        ///< of the block restricted to `reachable`
  std::optional<CyclicForm> cyclic;
  std::optional<ReducibleForm> reducible;
  std::optional<PerronData> perron;          ///< analyzed block, or first dominating block
  std::optional<SpectralGap> gap;
  PkSequence pk;
  ContinuityVerdict verdict;
  std::optional<RateSummary> rate;
  MarkovOrderResult markov;
};

FactorAnalysis analyze_factor(const TransitionMatrix& matrix, Index special = 0,
                              const AnalysisOptions& options = {});
ContinuityVerdict continuity_verdict(const TransitionMatrix& matrix, Index special = 0,
                                     const AnalysisOptions& options = {});

/// Restriction of the aggregated block (and V, W) to `states`.
AggregatedDecomposition restrict_to(const AggregatedDecomposition& d, std::span<const Index> states);

}  // namespace aggmc
