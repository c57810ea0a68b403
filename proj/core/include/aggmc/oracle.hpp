#pragma once

#include <cstdint>

#include "aggmc/stochastic.hpp"

namespace aggmc {

inline constexpr std::uint64_t kEnumerationCap = 10'000'000;

/// Brute-force p_k: sums path probabilities over every string of k
/// non-special symbols, with and without the closing step back to `special`.
double pk_enumeration(const TransitionMatrix& matrix, Index k, Index special = 0);

/// Brute-force p_{m,n} from the path sums defining r and s.
double pmn_enumeration(const TransitionMatrix& matrix, Index m, Index n, Index special = 0);

/// Unique stationary law of an irreducible chain.
Vector stationary_distribution(const TransitionMatrix& matrix);

}  // namespace aggmc
