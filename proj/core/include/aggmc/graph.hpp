#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aggmc/stochastic.hpp"

namespace aggmc {

struct SpectralOptions;

enum class Classification { Primitive, IrreduciblePeriodic, Reducible };

std::string_view to_string(Classification c) noexcept;

/// Combinatorial facts about a nonnegative square matrix, read off the
/// directed graph with an edge i -> j iff p(i, j) > 0.
struct StructureReport {
  std::vector<std::vector<Index>> scc_partition;  ///< topological order, sources first
  bool is_irreducible = false;
  std::optional<Index> period;  ///< set iff irreducible
  bool is_primitive = false;
  Classification classification = Classification::Reducible;
};

/// Strongly connected components in topological order of the condensation
/// (a component only has edges to components after it). Each component is
/// sorted ascending.
std::vector<std::vector<Index>> strongly_connected_components(const Matrix& p);

/// A single state without a self-loop: not irreducible on its own.
bool is_trivial_component(const Matrix& p, std::span<const Index> component);

/// Period of the strongly connected `component`: gcd of level(u) + 1 - level(v)
/// over edges u -> v inside it, with BFS levels from its lowest-index state.
/// Returns 0 for a trivial component.
Index component_period(const Matrix& p, std::span<const Index> component);

StructureReport classify(const Matrix& p);

/// Frobenius (block-cyclic) layout of an irreducible matrix of period h >= 2:
/// after `perm`, row class c only has entries in column class c + 1 (mod h),
/// and that rectangular block is blocks[c].
struct CyclicForm {
  Index period = 0;
  Permutation perm;                          ///< perm[old] = new position
  std::vector<std::vector<Index>> classes;   ///< original indices, class 0 holds state 0
  std::vector<Matrix> blocks;                ///< blocks[c]: class c -> class c+1
  Matrix permuted;
};

CyclicForm cyclic_normal_form(const Matrix& p);

/// Reducible canonical layout
///
///     | T11 T12 ... T1c |
///     |  0  T22  0   0  |
///     |  0   0  ...  0  |
///     |  0   0   0  Tcc |
///
/// Terminal non-trivial components become the irreducible final blocks;
/// every other component (including trivial sinks) is merged into T11 in
/// topological order, which keeps T11 block upper triangular.
struct ReducibleForm {
  Permutation perm;
  std::vector<Index> transient_states;              ///< original indices, T11 order
  std::vector<std::vector<Index>> final_classes;    ///< original indices per final block
  Matrix transient_block;
  std::vector<Matrix> coupling_blocks;              ///< T1j, one per final block
  std::vector<Matrix> final_blocks;                 ///< Tjj
  std::vector<double> perron_values;                ///< per final block
  std::vector<Index> final_periods;                 ///< per final block
  std::vector<Index> dominating;                    ///< indices into final_blocks
  double lambda_max = 0.0;
  /// Largest Perron value among the components merged into T11 (0 if none).
  double transient_radius = 0.0;
  Matrix permuted;
};

ReducibleForm reducible_canonical_form(const Matrix& p, const SpectralOptions& options);
ReducibleForm reducible_canonical_form(const Matrix& p);

/// Rows/columns `rows` x `cols` of p.
Matrix submatrix(const Matrix& p, std::span<const Index> rows, std::span<const Index> cols);

/// States reachable from `sources` (sources included), ascending.
std::vector<Index> reachable_from(const Matrix& p, std::span<const Index> sources);

}  // namespace aggmc
