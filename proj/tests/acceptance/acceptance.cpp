// Acceptance suite: one PASS/FAIL line per criterion.
//   aggmc_acceptance            run everything
//   aggmc_acceptance --only N   run criterion N; exit status reflects it

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggmc/aggmc.hpp"
#include "instances.hpp"

using namespace aggmc;
using aggmc::testing::load_fixture;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Result criterion1() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = load_fixture("example1.json");
  const auto fa = analyze_factor(m);
  const auto h = harris_bound(m);
  const double elapsed = seconds_since(t0);
  const double p_inf = fa.verdict.p_infinity.value_or(NAN);
  r.require(fa.verdict.status == ContinuityStatus::Continuous, "verdict Continuous");
  r.require(std::abs(p_inf - 0.132864) <= 1e-6, "p_inf");
  r.require(std::abs(fa.gap->ratio - 0.3657281) <= 1e-7, "ratio");
  r.require(std::abs(h.lambda - 0.01190476) <= 1e-7, "harris lambda");
  r.require(elapsed < 1.0, "runtime");
  r.detail << std::setprecision(10) << "p_inf=" << p_inf << " ratio=" << fa.gap->ratio << " harris=" << h.lambda
           << " time=" << elapsed << "s";
  return r;
}

Result criterion2() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const auto fa = analyze_factor(load_fixture("example2.json"));
  const double elapsed = seconds_since(t0);
  r.require(fa.reducible.has_value() && fa.reducible->dominating.size() == 1, "single dominating block");
  if (!r.pass) return r;
  const auto& form = *fa.reducible;
  const Matrix& block = form.final_blocks[static_cast<std::size_t>(form.dominating.front())];
  const Matrix expected = (Matrix(2, 2) << 0.4, 0.6, 0.2, 0.5).finished();
  r.require(block == expected, "dominating block");

  std::vector<double> eig;
  for (auto z : eigenvalues(block)) eig.push_back(z.real());
  std::sort(eig.begin(), eig.end());
  r.require(eig.size() == 2 && std::abs(eig[0] - 0.1) <= 1e-12 && std::abs(eig[1] - 0.8) <= 1e-12, "eigenvalues");

  const Vector phi = fa.perron->phi.normalized();
  const Vector psi = fa.perron->psi.normalized();
  const Vector phi_ref = Vector{{0.8320503, 0.5547002}}.normalized();
  const Vector psi_ref = Vector{{0.5150787, 1.0301574}}.normalized();
  const double phi_err = (phi - phi_ref).cwiseAbs().maxCoeff();
  const double psi_err = (psi - psi_ref).cwiseAbs().maxCoeff();
  r.require(phi_err <= 1e-6 && psi_err <= 1e-6, "Perron vectors");

  const double p_inf = fa.verdict.p_infinity.value_or(NAN);
  r.require(std::abs(p_inf - 0.2) <= 1e-9, "p_inf");
  const double ratio = fa.verdict.rate_ratio.value_or(NAN);
  r.require(std::abs(ratio - 0.125) <= 1e-9, "rate ratio");
  r.require(elapsed < 1.0, "runtime");
  r.detail << std::setprecision(10) << "eig={" << eig[0] << "," << eig[1] << "} phi_err=" << phi_err
           << " psi_err=" << psi_err << " p_inf=" << p_inf << " ratio=" << ratio << " time=" << elapsed << "s";
  return r;
}

Result criterion3() {
  Result r;
  const auto fa = analyze_factor(load_fixture("periodic_abg.json"));
  double worst = 0.0;
  for (std::size_t k = 0; k < fa.pk.values.size(); ++k) {
    const double expected = k == 0 ? 0.5 : (k % 2 == 1 ? 0.3 : 0.9);
    worst = std::max(worst, std::abs(fa.pk.values[k] - expected));
  }
  r.require(worst <= 1e-12, "p_k pattern");
  r.require(fa.verdict.status == ContinuityStatus::EssentialDiscontinuity, "verdict");
  const auto& lim = fa.verdict.limit_cycle;
  r.require(lim.size() == 2 && std::abs(lim[0] - 0.3) <= 1e-12 && std::abs(lim[1] - 0.9) <= 1e-12,
            "residue limits");
  r.detail << "max |p_k - pattern| over k<=" << fa.pk.values.size() - 1 << " = " << worst << ", verdict "
           << to_string(fa.verdict.status) << ", limits {" << (lim.size() > 0 ? lim[0] : NAN) << ", "
           << (lim.size() > 1 ? lim[1] : NAN) << "}";
  return r;
}

Result criterion4() {
  Result r;
  const auto d = decompose(load_fixture("example4.json"));
  const auto mo = markov_order(d);
  r.require(mo.order == Index{4}, "order 4");
  const double lambda = spectral_radius(d.p);
  const Matrix q3 = power_limit(d.p, lambda, 3);
  double worst = 0.0;
  for (std::uint64_t k = 3; k <= 20; ++k) worst = std::max(worst, (power_limit(d.p, lambda, k) - q3).cwiseAbs().maxCoeff());
  r.require(worst <= 1e-10, "(P/lambda)^k stable from k=3");
  const auto seq = pk_sequence(d, 60);
  double spread = 0.0;
  for (std::size_t k = 4; k < seq.values.size(); ++k) spread = std::max(spread, std::abs(seq.values[k] - seq.values[4]));
  r.require(spread <= 1e-12, "p_k constant from 4");
  r.detail << "order=" << (mo.order ? std::to_string(*mo.order) : "none") << " lambda1=" << lambda
           << " max|Q^k-Q^3|=" << worst << " max|p_k-p_4|=" << spread;
  return r;
}

Result criterion5() {
  Result r;
  std::mt19937_64 rng(20240501);
  double worst = 0.0;
  int continuous = 0;
  for (int i = 0; i < 20; ++i) {
    const Index h = 2 + i % 2;
    const Index size = 1 + static_cast<Index>(rng() % 3);
    const double k = 0.3 + 0.5 * testing::uniform01(rng);
    const auto fa = analyze_factor(testing::random_block_cyclic(rng, h, size, k));
    const auto& lim = fa.verdict.limit_cycle;
    if (lim.size() != static_cast<std::size_t>(h)) {
      r.require(false, "instance " + std::to_string(i) + " not periodic with h=" + std::to_string(h));
      continue;
    }
    const auto [lo, hi] = std::minmax_element(lim.begin(), lim.end());
    worst = std::max(worst, *hi - *lo);
    if (fa.verdict.status == ContinuityStatus::Continuous) ++continuous;
  }
  r.require(worst <= 1e-10, "residue limits equal");
  r.require(continuous == 20, "all Continuous");
  r.detail << "20 instances, h in {2,3}: max residue spread=" << worst << ", Continuous " << continuous << "/20";
  return r;
}

Result criterion6() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(6006);
  double worst_pk = 0.0, worst_pmn = 0.0;
  int compared = 0, skipped = 0;
  for (int i = 0; i < 200; ++i) {
    const Index size = 2 + i % 4;
    const auto m = testing::random_valid(rng, size);
    const auto d = decompose(m);
    for (Index k = 0; k <= 7; ++k) {
      try {
        const double a = pk_matrix(d, k);
        worst_pk = std::max(worst_pk, std::abs(a - pk_enumeration(m, k)));
        ++compared;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnreachableRun) throw;
        ++skipped;
      }
    }
    for (Index a = 0; a <= 7; ++a)
      for (Index b = 0; a + b <= 7; ++b) {
        try {
          const double x = p_mn(d, a, b);
          worst_pmn = std::max(worst_pmn, std::abs(x - pmn_enumeration(m, a, b)));
          ++compared;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::UnreachableEvent) throw;
          ++skipped;
        }
      }
  }
  const double elapsed = seconds_since(t0);
  r.require(worst_pk <= 1e-10, "pk");
  r.require(worst_pmn <= 1e-10, "pmn");
  r.require(elapsed < 60.0, "runtime");
  r.detail << "200 matrices, " << compared << " comparisons (" << skipped << " undefined): max pk err=" << worst_pk
           << " max pmn err=" << worst_pmn << " time=" << elapsed << "s";
  return r;
}

Result criterion7() {
  Result r;
  std::mt19937_64 rng(7007);
  int order_one = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto d = decompose(testing::random_constant_w(rng, 2 + i % 5));
    const auto mo = markov_order(d);
    if (mo.order == Index{1}) ++order_one;
    const auto seq = pk_sequence(d, 50);
    for (std::size_t k = 1; k < seq.values.size(); ++k) worst = std::max(worst, std::abs(seq.values[k] - seq.values[1]));
  }
  r.require(order_one == 20, "order 1");
  r.require(worst <= 1e-12, "p_k constant");
  r.detail << "order 1 for " << order_one << "/20, max |p_k - p_1| (k<=50)=" << worst;
  return r;
}

Result criterion8() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = load_fixture("example1.json");
  const auto d = decompose(m);
  const auto e = empirical_pk(simulate(m, 1'000'000, 20240601), 12);
  const double elapsed = seconds_since(t0);
  int reported = 0;
  double worst_z = 0.0;
  for (const auto& est : e.estimates) {
    if (!est.reported) continue;
    ++reported;
    const double z = std::abs(est.p_hat - pk_matrix(d, est.k)) / est.std_error;
    worst_z = std::max(worst_z, z);
  }
  r.require(reported > 0, "estimates reported");
  r.require(worst_z <= 3.0, "within 3 stderr");
  r.require(elapsed < 10.0, "runtime");
  r.detail << "seed 20240601, 1e6 steps: " << reported << " reported k, max |z|=" << worst_z << " time=" << elapsed
           << "s";
  return r;
}

// A simple subdominant eigenvalue is only visible in a 50-step window when the
// next modulus is clearly smaller: at 0.9 the third term loses a factor ~190
// relative to the second between n = 10 and n = 60.
constexpr double kSubdominantSeparation = 0.9;

bool has_simple_real_subdominant(const Matrix& p) {
  auto eig = eigenvalues(p);
  std::sort(eig.begin(), eig.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  if (eig.size() < 2) return false;
  if (std::abs(eig[1].imag()) > 1e-12) return false;
  return eig.size() == 2 || std::abs(eig[2]) <= kSubdominantSeparation * std::abs(eig[1]);
}

Result criterion9() {
  Result r;
  std::mt19937_64 rng(9009);
  double worst = 0.0;
  int accepted = 0, redrawn = 0;
  while (accepted < 20) {
    const Index m = 3 + static_cast<Index>(rng() % 3);
    std::gamma_distribution<double> gamma(0.5, 1.0);
    Matrix a(m, m);
    const double t = 0.2 + 0.5 * testing::uniform01(rng);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) a(i, j) = gamma(rng);
      a.row(i) /= a.row(i).sum();
    }
    a = (1 - t) * Matrix::Identity(m, m) + t * a;
    a = a.cwiseMax(1e-3);
    for (Index i = 0; i < m; ++i) a.row(i) /= a.row(i).sum();
    const auto matrix = TransitionMatrix::validate(a, 1e-12);
    const auto d = decompose(matrix);
    if (!has_simple_real_subdominant(d.p)) continue;  // outside the instance family

    const auto fa = analyze_factor(matrix);
    const double limit = *fa.verdict.p_infinity;
    bool underflow = false;
    for (Index n = 10; n <= 60; ++n)
      underflow = underflow || std::abs(fa.pk.values[static_cast<std::size_t>(n)] - limit) < 1e-14;
    if (underflow) {
      ++redrawn;
      continue;
    }
    const auto fitted = fit_decay_ratio(fa.pk.values, limit, 10, 60, 0.0);
    const double diff = std::abs(std::log(*fitted) - std::log(fa.gap->ratio));
    worst = std::max(worst, diff);
    ++accepted;
  }
  r.require(worst <= 0.05, "fitted exponent");
  r.detail << "20 instances (" << redrawn << " redrawn for underflow): max |fitted - log(|l2|/l1)|=" << worst;
  return r;
}

Result criterion10() {
  Result r;
  std::ostringstream parts;
  for (const char* name : {"example1.json", "example2.json", "example3.json", "example4.json"}) {
    const auto g = gibbs_verdict(load_fixture(name), 4, 4);
    if (g.status != ContinuityStatus::Continuous) continue;
    const double diff = std::abs(g.diagonal_30 - g.diagonal_60);
    r.require(diff <= 1e-8, std::string(name) + " diagonal");
    parts << " " << name << ":" << diff;
  }
  const auto g = gibbs_verdict(load_fixture("periodic_abg.json"), 8, 8);
  r.require(g.subsequence_spread >= 0.5, "periodic subsequence limits differ by >= 0.5");
  parts << " periodic_abg: joint limits {";
  for (std::size_t i = 0; i < g.subsequence_limits.size(); ++i)
    parts << (i ? "," : "") << g.subsequence_limits[i];
  parts << "} spread=" << g.subsequence_spread;
  r.detail << "|p_30,30 - p_60,60|:" << parts.str();
  return r;
}

const std::vector<std::pair<const char*, std::function<Result()>>> kCriteria{
    {"Example 1 regression", criterion1},
    {"Example 2 regression", criterion2},
    {"periodic essential discontinuity", criterion3},
    {"Example 4 finite Markov order", criterion4},
    {"block-cyclic constant column sums", criterion5},
    {"oracle equivalence", criterion6},
    {"constant W gives order 1", criterion7},
    {"simulation consistency", criterion8},
    {"rate-bound exponent", criterion9},
    {"Gibbs diagonal convergence", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);
  int failures = 0;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && id != only) continue;
    Result res;
    try {
      res = kCriteria[i].second();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %2d (%s): %s\n", res.pass ? "PASS" : "FAIL", id, kCriteria[i].first,
                res.detail.str().c_str());
    if (!res.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
