#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aggmc/aggmc.hpp"

namespace aggmc::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
std::string_view tool_version();

struct Settings {
  LoadOptions load;
  AnalysisOptions analysis;
  Index kmax = 60;
  Index m_max = 8;
  Index n_max = 8;
  std::uint64_t seed = 1;
  Index steps = 0;
  Index streams = 1;
};

std::string sha256_hex(std::string_view bytes);

// Report sections. State indices are reported as 1-based symbols of the
// original alphabet.
Json tolerances_json(const Settings& settings);
Json structure_json(const FactorAnalysis& fa);
Json spectral_json(const FactorAnalysis& fa);
Json pk_json(const PkSequence& pk, Index kmax);
Json verdict_json(const ContinuityVerdict& v);
Json rate_json(const std::optional<RateSummary>& rate);
Json markov_json(const MarkovOrderResult& m);
Json harris_json(const TransitionMatrix& matrix, Index kmax);
Json gibbs_json(const GibbsVerdict& g);
Json empirical_json(const EmpiricalPk& e, const PkSequence& analytic, std::uint64_t seed, Index steps,
                    Index streams);

/// Indented plain-text rendering. Numbers are printed exactly as in the
/// JSON dump, so every value of the report appears verbatim.
std::string render_text(const Json& report);

std::string serialize(const Json& report);
Json parse(std::string_view text);

}  // namespace aggmc::report

namespace aggmc::cli {

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code: 0 success, 1 input error, 2 analysis error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace aggmc::cli
