#include "aggmc/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <future>
#include <iterator>
#include <random>

#include "aggmc/error.hpp"
#include "aggmc/oracle.hpp"

namespace aggmc {

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Cumulative sums of a probability row; the last positive entry absorbs
// the rounding slack so every draw in [0, 1) lands on a reachable state.
std::vector<double> cumulative(const Eigen::Ref<const RowVector>& row) {
  std::vector<double> c(static_cast<std::size_t>(row.size()));
  double acc = 0.0;
  Index last = 0;
  for (Index j = 0; j < row.size(); ++j) {
    acc += row(j);
    c[static_cast<std::size_t>(j)] = acc;
    if (row(j) > 0.0) last = j;
  }
  for (Index j = last; j < row.size(); ++j) c[static_cast<std::size_t>(j)] = 2.0;
  return c;
}

std::int32_t draw(const std::vector<double>& c, double u) {
  return static_cast<std::int32_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SimulationRun simulate(const TransitionMatrix& matrix, Index length, std::uint64_t seed, Index special) {
  const Index m = matrix.size();
  if (special < 0 || special >= m) throw Error(ErrorCode::InvalidSymbol, "special symbol out of range");
  if (length < 1) throw Error(ErrorCode::InputFormat, "simulation length must be at least 1");
  const Vector pi = stationary_distribution(matrix);

  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < m; ++i) rows.push_back(cumulative(matrix.entries().row(i)));

  SimulationRun run;
  run.seed = seed;
  run.length = length;
  run.special = special;
  run.symbols.resize(static_cast<std::size_t>(length));
  run.image.resize(static_cast<std::size_t>(length));

  std::mt19937_64 rng(seed);
  std::int32_t state = draw(cumulative(pi.transpose()), uniform(rng));
  for (Index t = 0; t < length; ++t) {
    if (t > 0) state = draw(rows[static_cast<std::size_t>(state)], uniform(rng));
    run.symbols[static_cast<std::size_t>(t)] = state;
    run.image[static_cast<std::size_t>(t)] = state == special ? 1 : 0;
  }
  return run;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64(state);
  return out;
}

void EmpiricalPk::merge(const EmpiricalPk& other) {
  if (estimates.size() < other.estimates.size()) {
    const auto old = estimates.size();
    estimates.resize(other.estimates.size());
    for (std::size_t k = old; k < estimates.size(); ++k) estimates[k].k = static_cast<Index>(k);
  }
  for (std::size_t k = 0; k < other.estimates.size(); ++k) {
    estimates[k].count_run += other.estimates[k].count_run;
    estimates[k].count_hit += other.estimates[k].count_hit;
  }
  k_max = std::max(k_max, other.k_max);
  finalize();
}

void EmpiricalPk::finalize() {
  for (auto& e : estimates) {
    e.reported = e.count_run >= kMinEmpiricalCount;
    if (e.count_run == 0) {
      e.p_hat = 0.0;
      e.std_error = 0.0;
      continue;
    }
    const double den = static_cast<double>(e.count_run);
    e.p_hat = static_cast<double>(e.count_hit) / den;
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / den);
  }
}

EmpiricalPk empirical_pk(const SimulationRun& run, Index k_max) {
  EmpiricalPk out;
  out.k_max = k_max;
  out.estimates.resize(static_cast<std::size_t>(k_max + 1));
  for (Index k = 0; k <= k_max; ++k) out.estimates[static_cast<std::size_t>(k)].k = k;

  // zeros seen since the last 1; negative until the first 1
  Index run_length = -1;
  for (std::uint8_t y : run.image) {
    if (run_length >= 0 && run_length <= k_max) {
      auto& e = out.estimates[static_cast<std::size_t>(run_length)];
      ++e.count_run;
      if (y == 1) ++e.count_hit;
    }
    if (y == 1)
      run_length = 0;
    else if (run_length >= 0)
      ++run_length;
  }
  out.finalize();
  return out;
}

EmpiricalPk empirical_pk_streams(const TransitionMatrix& matrix, Index length, std::uint64_t seed,
                                 Index streams, Index k_max, Index special) {
  std::vector<std::future<EmpiricalPk>> parts;
  for (Index i = 0; i < streams; ++i) {
    parts.push_back(std::async(std::launch::async, [&, i] {
      return empirical_pk(simulate(matrix, length, stream_seed(seed, static_cast<std::uint64_t>(i)), special), k_max);
    }));
  }
  EmpiricalPk total;
  total.k_max = k_max;
  for (auto& part : parts) total.merge(part.get());
  total.finalize();
  return total;
}

void write_trajectory(const std::filesystem::path& path, const SimulationRun& run, Index alphabet) {
  if (alphabet > 256) throw Error(ErrorCode::InputFormat, "trajectory dump needs at most 256 symbols");
  if (run.length > 0xffffffffLL) throw Error(ErrorCode::InputFormat, "trajectory too long for the dump header");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  const auto m = static_cast<std::uint16_t>(alphabet);
  const auto n = static_cast<std::uint32_t>(run.length);
  const std::array<unsigned char, 8> header{'A', 'G',
                                            static_cast<unsigned char>(m & 0xff), static_cast<unsigned char>(m >> 8),
                                            static_cast<unsigned char>(n & 0xff), static_cast<unsigned char>((n >> 8) & 0xff),
                                            static_cast<unsigned char>((n >> 16) & 0xff), static_cast<unsigned char>(n >> 24)};
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  std::vector<char> bytes(run.symbols.size());
  std::transform(run.symbols.begin(), run.symbols.end(), bytes.begin(), [](std::int32_t s) { return static_cast<char>(s); });
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::array<unsigned char, 8> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (!in || header[0] != 'A' || header[1] != 'G') throw Error(ErrorCode::InputFormat, "not a trajectory dump");
  Trajectory t;
  t.alphabet = header[2] | (header[3] << 8);
  const std::uint32_t n = static_cast<std::uint32_t>(header[4]) | (static_cast<std::uint32_t>(header[5]) << 8) |
                          (static_cast<std::uint32_t>(header[6]) << 16) | (static_cast<std::uint32_t>(header[7]) << 24);
  t.symbols.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (t.symbols.size() != n) throw Error(ErrorCode::InputFormat, "trajectory length does not match its header");
  return t;
}

}  // namespace aggmc
