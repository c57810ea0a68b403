#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "aggmc/stochastic.hpp"

namespace aggmc {

/// Trajectory of the chain started from its stationary law.
/// Generator: std::mt19937_64 seeded with `seed`; a uniform draw is
/// (x >> 11) * 2^-53 and a step picks the first state whose cumulative row
/// mass exceeds it.
struct SimulationRun {
  std::uint64_t seed = 0;
  Index length = 0;
  Index special = 0;
  std::vector<std::int32_t> symbols;  ///< 0-based states
  std::vector<std::uint8_t> image;    ///< image[t] = 1 iff symbols[t] == special
};

SimulationRun simulate(const TransitionMatrix& matrix, Index length, std::uint64_t seed, Index special = 0);

/// Seed of sub-stream `stream` derived from a base seed (splitmix64 applied
/// stream + 1 times).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

struct EmpiricalEstimate {
  Index k = 0;
  std::uint64_t count_run = 0;   ///< occurrences of 1 0^k followed by anything
  std::uint64_t count_hit = 0;   ///< occurrences of 1 0^k 1
  double p_hat = 0.0;
  double std_error = 0.0;
  bool reported = false;         ///< count_run >= kMinEmpiricalCount
};

inline constexpr std::uint64_t kMinEmpiricalCount = 30;

struct EmpiricalPk {
  Index k_max = 0;
  std::vector<EmpiricalEstimate> estimates;  ///< k = 0..k_max

  void merge(const EmpiricalPk& other);
  void finalize();
};

EmpiricalPk empirical_pk(const SimulationRun& run, Index k_max);

/// `streams` independent runs of `length` steps each, seeded with
/// stream_seed(seed, i), simulated in parallel; counts are summed exactly.
EmpiricalPk empirical_pk_streams(const TransitionMatrix& matrix, Index length, std::uint64_t seed,
                                 Index streams, Index k_max, Index special = 0);

/// Byte-per-symbol dump: "AG", uint16 m, uint32 length (little endian),
/// then one byte per 0-based symbol.
void write_trajectory(const std::filesystem::path& path, const SimulationRun& run, Index alphabet);

struct Trajectory {
  Index alphabet = 0;
  std::vector<std::uint8_t> symbols;
};

Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace aggmc
