#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "aggmc_tools/report.hpp"

namespace aggmc::cli {

namespace {

using report::Json;

struct Flags {
  report::Settings settings;
  std::string input;
  std::string format = "json";
  std::optional<Index> special;
  std::optional<Index> steps;
  std::string plot_path;
  std::string dump_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_plot_data(const std::string& path, const PkSequence& pk, const std::optional<RateSummary>& rate,
                     Index kmax) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << "n,p_n,bound_n\n";
  out.precision(17);
  const auto count = std::min<std::size_t>(pk.values.size(), static_cast<std::size_t>(kmax + 1));
  for (std::size_t n = 0; n < count; ++n) {
    out << n << ',' << pk.values[n] << ',';
    if (rate) out << rate_bound(*rate, static_cast<Index>(n));
    out << '\n';
  }
}

Json run_command(const std::string& command, const Flags& f, const std::string& bytes) {
  const auto& s = f.settings;
  const MatrixFile file = parse_matrix_json(bytes, s.load);
  const TransitionMatrix& matrix = file.matrix;
  Index special = file.special;
  if (f.special) {
    if (*f.special < 1 || *f.special > matrix.size())
      throw Error(ErrorCode::InvalidSymbol, "--special must lie in 1.." + std::to_string(matrix.size()));
    special = *f.special - 1;
  }

  Json r;
  r["schema_version"] = report::kSchemaVersion;
  r["tool_version"] = report::tool_version();
  r["command"] = command;
  r["input_digest"] = report::sha256_hex(bytes);
  r["tolerances"] = report::tolerances_json(s);
  r["special"] = special + 1;

  if (command == "harris") {
    r["harris"] = report::harris_json(matrix, s.kmax);
    return r;
  }
  if (command == "markov-order") {
    r["markov_order"] = report::markov_json(markov_order(decompose(matrix, special), s.analysis));
    return r;
  }
  if (command == "simulate") {
    const Index steps = f.steps.value_or(1'000'000);
    EmpiricalPk e;
    if (s.streams <= 1) {
      const SimulationRun run = simulate(matrix, steps, s.seed, special);
      e = empirical_pk(run, s.kmax);
      if (!f.dump_path.empty()) write_trajectory(f.dump_path, run, matrix.size());
    } else {
      e = empirical_pk_streams(matrix, steps, s.seed, s.streams, s.kmax, special);
      if (!f.dump_path.empty())
        write_trajectory(f.dump_path, simulate(matrix, steps, stream_seed(s.seed, 0), special), matrix.size());
    }
    const PkSequence pk = pk_sequence(decompose(matrix, special), s.kmax);
    r["empirical"] = report::empirical_json(e, pk, s.seed, steps, std::max<Index>(s.streams, 1));
    return r;
  }

  const FactorAnalysis fa = analyze_factor(matrix, special, s.analysis);
  if (command == "pk") {
    r["pk"] = report::pk_json(fa.pk, s.kmax);
    r["verdict"] = report::verdict_json(fa.verdict);
    r["rate"] = report::rate_json(fa.rate);
  } else if (command == "gibbs") {
    r["verdict"] = report::verdict_json(fa.verdict);
    r["gibbs"] = report::gibbs_json(gibbs_verdict(fa, s.m_max, s.n_max));
  } else {
    r["structure"] = report::structure_json(fa);
    r["spectral"] = report::spectral_json(fa);
    r["pk"] = report::pk_json(fa.pk, s.kmax);
    r["verdict"] = report::verdict_json(fa.verdict);
    r["rate"] = report::rate_json(fa.rate);
    r["harris"] = report::harris_json(matrix, s.kmax);
    r["markov_order"] = report::markov_json(fa.markov);
    r["gibbs"] = report::gibbs_json(gibbs_verdict(fa, s.m_max, s.n_max));
    if (f.steps && *f.steps > 0) {
      const EmpiricalPk e = s.streams <= 1
                                ? empirical_pk(simulate(matrix, *f.steps, s.seed, special), s.kmax)
                                : empirical_pk_streams(matrix, *f.steps, s.seed, s.streams, s.kmax, special);
      r["empirical"] = report::empirical_json(e, fa.pk, s.seed, *f.steps, std::max<Index>(s.streams, 1));
    }
  }
  if (!f.plot_path.empty()) write_plot_data(f.plot_path, fa.pk, fa.rate, s.kmax);
  return r;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuity analysis of a Markov chain observed through a one-symbol aggregation", "aggmc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::tool_version()));

  Flags f;
  auto& s = f.settings;
  auto common = [&](CLI::App* sub) {
    sub->add_option("input", f.input, "matrix JSON file")->required();
    sub->add_option("--format", f.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--special", f.special, "special symbol, 1-based (overrides the file)");
    sub->add_option("--kmax", s.kmax, "largest run length reported")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-limit", s.analysis.tol_limit, "equality tolerance for residue limits");
    sub->add_option("--tol-eig", s.analysis.spectral.tol_eig, "relative eigen-residual tolerance");
    sub->add_option("--tol-stab", s.analysis.tol_stab, "stabilization tolerance for Markov order");
    sub->add_option("--tol-row", s.load.tol_row, "row-sum tolerance on input");
    sub->add_option("--zero-tol", s.load.zero_tol, "entries below this are set to zero on input");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--steps", f.steps, "simulation length")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", s.seed, "simulation seed");
    sub->add_option("--streams", s.streams, "independent simulation sub-streams")->check(CLI::PositiveNumber);
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--m-max", s.m_max, "Gibbs grid rows")->check(CLI::NonNegativeNumber);
    sub->add_option("--n-max", s.n_max, "Gibbs grid columns")->check(CLI::NonNegativeNumber);
  };
  auto plot = [&](CLI::App* sub) {
    sub->add_option("--emit-plot-data", f.plot_path, "write n,p_n,bound_n as CSV");
  };

  auto* analyze = app.add_subcommand("analyze", "full pipeline");
  common(analyze), sampling(analyze), grid(analyze), plot(analyze);
  auto* pk = app.add_subcommand("pk", "p_k sequence and continuity verdict");
  common(pk), plot(pk);
  auto* gibbs = app.add_subcommand("gibbs", "two-sided p_{m,n} grid");
  common(gibbs), grid(gibbs);
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate and estimate p_k empirically");
  common(simulate_cmd), sampling(simulate_cmd);
  simulate_cmd->add_option("--dump-trajectory", f.dump_path, "write the trajectory as a binary dump");
  auto* markov = app.add_subcommand("markov-order", "finite Markov order detection");
  common(markov);
  auto* harris = app.add_subcommand("harris", "Harris comparison bound");
  common(harris);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << report::tool_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "aggmc: " << e.what() << "\n";
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  s.analysis.horizon = std::max<Index>(s.kmax, 200);

  try {
    const std::string bytes = read_file(f.input);
    const Json report = run_command(command, f, bytes);
    out << (f.format == "text" ? report::render_text(report) : report::serialize(report) + "\n");
    return 0;
  } catch (const Error& e) {
    err << "aggmc: " << e.what() << "\n";
    if (f.format == "json") {
      Json j;
      j["schema_version"] = report::kSchemaVersion;
      j["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      out << report::serialize(j) << "\n";
    }
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "aggmc: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace aggmc::cli
