#include "aggmc_tools/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace aggmc::report {

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class Range>
Json numbers(const Range& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

// 1-based symbol of the original alphabet for aggregated-block index i.
Index symbol(Index special, Index i) { return (i >= special ? i + 1 : i) + 1; }

Json symbols(Index special, const std::vector<Index>& states) {
  Json out = Json::array();
  for (Index i : states) out.push_back(symbol(special, i));
  return out;
}

Json symbols_via(Index special, const std::vector<Index>& map, const std::vector<Index>& states) {
  Json out = Json::array();
  for (Index i : states) out.push_back(symbol(special, map[static_cast<std::size_t>(i)]));
  return out;
}

}  // namespace

std::string_view tool_version() { return "0.1.0"; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

Json tolerances_json(const Settings& s) {
  Json t;
  t["tol_row"] = s.load.tol_row;
  t["zero_tol"] = s.load.zero_tol;
  t["tol_eig"] = s.analysis.spectral.tol_eig;
  t["tol_cluster"] = s.analysis.spectral.tol_cluster;
  t["max_iter"] = s.analysis.spectral.max_iter;
  t["tol_limit"] = s.analysis.tol_limit;
  t["tol_stab"] = s.analysis.tol_stab;
  t["horizon"] = s.analysis.horizon;
  return t;
}

Json structure_json(const FactorAnalysis& fa) {
  const Index special = fa.special;
  const Index dim = fa.decomposition.dimension();
  Json s;
  s["alphabet"] = dim + 1;
  s["special"] = special + 1;
  std::vector<Index> all(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i;
  s["aggregated_symbols"] = symbols(special, all);
  s["classification"] = to_string(fa.structure.classification);
  s["is_irreducible"] = fa.structure.is_irreducible;
  s["is_primitive"] = fa.structure.is_primitive;
  s["period"] = optional_json(fa.structure.period);
  Json sccs = Json::array();
  for (const auto& c : fa.structure.scc_partition) sccs.push_back(symbols(special, c));
  s["scc_partition"] = sccs;
  s["reachable"] = symbols(special, fa.reachable);
  s["analyzed_classification"] = to_string(fa.analyzed_structure.classification);

  if (fa.cyclic) {
    Json c;
    c["period"] = fa.cyclic->period;
    Json classes = Json::array();
    for (const auto& cls : fa.cyclic->classes) classes.push_back(symbols(special, cls));
    c["classes"] = classes;
    s["cyclic"] = c;
  }
  if (fa.reducible) {
    const auto& r = *fa.reducible;
    Json j;
    j["transient_states"] = symbols_via(special, fa.reachable, r.transient_states);
    Json finals = Json::array();
    for (const auto& cls : r.final_classes) finals.push_back(symbols_via(special, fa.reachable, cls));
    j["final_classes"] = finals;
    Json blocks = Json::array();
    for (const auto& b : r.final_blocks) blocks.push_back(matrix_json(b));
    j["final_blocks"] = blocks;
    j["perron_values"] = numbers(r.perron_values);
    j["final_periods"] = r.final_periods;
    j["dominating_blocks"] = r.dominating;
    j["lambda_max"] = number(r.lambda_max);
    j["transient_radius"] = number(r.transient_radius);
    s["reducible"] = j;
  }
  return s;
}

Json spectral_json(const FactorAnalysis& fa) {
  Json s;
  s["perron_of"] = fa.reducible ? "dominating block" : "aggregated block";
  if (fa.perron) {
    s["lambda1"] = number(fa.perron->lambda1);
    s["phi"] = vector_json(fa.perron->phi);
    s["psi"] = vector_json(fa.perron->psi);
    s["iterations"] = fa.perron->iterations;
  }
  if (fa.gap) {
    s["lambda2_abs"] = number(fa.gap->lambda2_abs);
    s["d2"] = fa.gap->d2;
    s["ratio"] = number(fa.gap->ratio);
  }
  Json eig = Json::array();
  for (const auto& z : eigenvalues(fa.decomposition.p)) eig.push_back(Json::array({number(z.real()), number(z.imag())}));
  s["eigenvalues"] = eig;
  return s;
}

Json pk_json(const PkSequence& pk, Index kmax) {
  const auto count = std::min<std::size_t>(pk.values.size(), static_cast<std::size_t>(kmax + 1));
  Json j;
  j["kmax"] = kmax;
  j["horizon"] = pk.horizon;
  j["source"] = pk.source == PkSource::MatrixPower ? "matrix_power" : "enumeration";
  j["truncated"] = pk.truncated;
  j["values"] = numbers(std::span(pk.values.data(), count));
  j["tail_oscillation"] = numbers(std::span(pk.tail_oscillation.data(), count));
  return j;
}

Json verdict_json(const ContinuityVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["basis"] = to_string(v.basis);
  j["p_infinity"] = v.p_infinity ? number(*v.p_infinity) : Json(nullptr);
  j["limit_cycle"] = numbers(v.limit_cycle);
  j["rate_ratio"] = v.rate_ratio ? number(*v.rate_ratio) : Json(nullptr);
  j["rate_poly_degree"] = optional_json(v.rate_poly_degree);
  if (v.status == ContinuityStatus::NumericOnly) {
    j["diagnostic_period"] = v.diagnostic_period;
    j["diagnostic_residues"] = numbers(v.diagnostic_residues);
  }
  j["note"] = v.note;
  return j;
}

Json rate_json(const std::optional<RateSummary>& rate) {
  if (!rate) return nullptr;
  Json j;
  j["ratio"] = number(rate->ratio);
  j["poly_degree"] = rate->poly_degree;
  j["bound_ratio"] = number(rate->bound_ratio);
  j["bound_poly_degree"] = rate->bound_poly_degree;
  j["prefactor"] = number(rate->prefactor);
  j["observed_ratio"] = rate->observed_ratio ? number(*rate->observed_ratio) : Json(nullptr);
  j["stabilization"] = rate->stabilization;
  return j;
}

Json markov_json(const MarkovOrderResult& m) {
  Json j;
  j["is_finite_order"] = m.is_finite_order;
  j["order"] = optional_json(m.order);
  j["stabilization_k"] = optional_json(m.stabilization_k);
  j["power_stabilization_k"] = optional_json(m.power_stabilization_k);
  j["single_nonnull_eigenvalue"] = m.single_nonnull_eigenvalue;
  j["lambda1"] = number(m.lambda1);
  j["eventual_value"] = m.eventual_value ? number(*m.eventual_value) : Json(nullptr);
  j["truncated"] = m.truncated;
  return j;
}

Json harris_json(const TransitionMatrix& matrix, Index kmax) {
  Json j;
  try {
    const HarrisBound h = harris_bound(matrix);
    j["applicable"] = true;
    j["lambda"] = number(h.lambda);
    j["base"] = number(h.base);
    Json bound = Json::array();
    for (Index n = 1; n <= kmax; ++n) bound.push_back(number(h.at(n)));
    j["bound"] = bound;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotStrictlyPositive) throw;
    j["applicable"] = false;
    j["reason"] = e.what();
  }
  return j;
}

Json gibbs_json(const GibbsVerdict& g) {
  Json j;
  j["status"] = to_string(g.status);
  j["basis"] = to_string(g.basis);
  j["gibbsian"] = g.gibbsian;
  j["m_max"] = g.grid.values.rows() - 1;
  j["n_max"] = g.grid.values.cols() - 1;
  j["values"] = matrix_json(g.grid.values);
  j["r_values"] = matrix_json(g.grid.r_values);
  j["s_values"] = matrix_json(g.grid.s_values);
  j["period"] = g.period;
  j["probe_base"] = g.probe_base;
  j["subsequence_limits"] = numbers(g.subsequence_limits);
  j["subsequence_spread"] = number(g.subsequence_spread);
  j["diagonal_30"] = number(g.diagonal_30);
  j["diagonal_60"] = number(g.diagonal_60);
  j["discrepancy_count"] = g.discrepancy_count;
  j["max_discrepancy"] = number(g.max_discrepancy);
  j["note"] = g.note;
  return j;
}

Json empirical_json(const EmpiricalPk& e, const PkSequence& analytic, std::uint64_t seed, Index steps,
                    Index streams) {
  Json j;
  j["seed"] = seed;
  j["steps"] = steps;
  j["streams"] = streams;
  j["k_max"] = e.k_max;
  j["min_count"] = kMinEmpiricalCount;
  Json rows = Json::array();
  for (const auto& est : e.estimates) {
    Json r;
    r["k"] = est.k;
    r["count_run"] = est.count_run;
    r["count_hit"] = est.count_hit;
    r["reported"] = est.reported;
    if (est.reported) {
      r["p_hat"] = number(est.p_hat);
      r["stderr"] = number(est.std_error);
    }
    if (static_cast<std::size_t>(est.k) < analytic.values.size()) {
      const double pk = analytic.values[static_cast<std::size_t>(est.k)];
      r["p_k"] = number(pk);
      if (est.reported && est.std_error > 0.0) r["z"] = number((est.p_hat - pk) / est.std_error);
    }
    rows.push_back(r);
  }
  j["estimates"] = rows;
  return j;
}

namespace {

std::string scalar(const Json& x) {
  if (x.is_string()) return x.get<std::string>();
  return x.dump();
}

bool is_scalar(const Json& x) { return !x.is_object() && !x.is_array(); }

bool all_scalar(const Json& arr) {
  return std::all_of(arr.begin(), arr.end(), [](const Json& x) { return is_scalar(x); });
}

std::string inline_array(const Json& arr) {
  std::string s = "[";
  bool first = true;
  for (const auto& x : arr) {
    if (!first) s += ", ";
    s += scalar(x);
    first = false;
  }
  return s + "]";
}

void render(const Json& node, int depth, std::ostringstream& os);

void render_value(const std::string& label, const Json& value, int depth, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  if (is_scalar(value)) {
    os << pad << label << ": " << scalar(value) << "\n";
  } else if (value.is_array() && all_scalar(value)) {
    os << pad << label << ": " << inline_array(value) << "\n";
  } else {
    os << pad << label << ":\n";
    render(value, depth + 1, os);
  }
}

void render(const Json& node, int depth, std::ostringstream& os) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) render_value(key, value, depth, os);
  } else {
    std::size_t i = 0;
    for (const auto& value : node) render_value("[" + std::to_string(i++) + "]", value, depth, os);
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  render(report, 0, os);
  return os.str();
}

std::string serialize(const Json& report) { return report.dump(2); }

Json parse(std::string_view text) { return Json::parse(text); }

}  // namespace aggmc::report
