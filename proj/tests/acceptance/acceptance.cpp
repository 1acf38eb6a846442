// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// Every tolerance and time limit is pinned below.

#include "chainglue/adiabatic.hpp"
#include "chainglue/circuit.hpp"
#include "chainglue/gluing.hpp"
#include "chainglue/locality.hpp"

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace chainglue;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

HamiltonianPath tfim_field_path(int n, double h0, double h1) {
  return linear_path(tfim_chain(n, 1.0, h0, false).dense, tfim_chain(n, 1.0, h1, false).dense);
}

std::vector<double> unit_grid(int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(static_cast<double>(i) / (points - 1));
  return g;
}

// 1. Spectral and quadrature generators agree.
constexpr double kC1Tol = 1e-6;
Outcome generator_equivalence() {
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const auto p = tfim_field_path(n, 1.0, 2.0);
    for (double gamma : {0.5, 2.0, 8.0}) {
      const Filter f = Filter::make(FilterKind::gaussian, gamma);
      const double s = 0.5;
      const Matrix spec = qa_generator_spectral(p, s, f, eigendecompose(p.H_of_s(s)));
      const auto quad = qa_generator_quadrature(p, s, f, 10.0 * gamma, 2048);
      worst = std::max(worst, operator_norm(spec - quad.generator));
    }
  }
  return {worst < kC1Tol, "max ||L_spec - L_quad|| = " + sci(worst) + " (< " + sci(kC1Tol) + ")"};
}

// 2. Compact bump below the gap reproduces the exact ground state.
constexpr double kC2Tol = 1e-6;
Outcome exact_recovery() {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  double gap = INFINITY;
  for (double s : unit_grid(41)) gap = std::min(gap, eigendecompose(p.H_of_s(s)).gap);
  const Filter f = Filter::make(FilterKind::compact_bump, 0.9 * gap);
  const auto m = measure_transport(p, f);
  return {m.infidelity < kC2Tol, "min gap " + fmt("%.4f", gap) + ", gamma = 0.9 gap, infidelity " +
                                     sci(m.infidelity) + " (< " + sci(kC2Tol) + "), error " + sci(m.error) + ", " +
                                     std::to_string(m.qa_steps) + " steps"};
}

// 3. Measured transport error below eta* f* on every gamma, decaying in gamma^2.
constexpr double kC3Slack = 1e-7;
Outcome certified_domination() {
  const auto p = tfim_field_path(3, 1.5, 2.5);
  const std::vector<double> gammas{0.25, 0.35, 0.5, 0.6, 0.7, 0.85, 1.0};
  const auto grid = unit_grid(41);
  bool dominated = true;
  double worst_ratio = 0.0;
  std::vector<double> g2, log_err;
  for (double gamma : gammas) {
    const Filter f = Filter::make(FilterKind::gaussian, gamma);
    const auto c = error_certificate(p, f, grid);
    const auto m = measure_transport(p, f);
    if (!(m.error <= c.bound + kC3Slack)) dominated = false;
    worst_ratio = std::max(worst_ratio, m.error / c.bound);
    g2.push_back(gamma * gamma);
    log_err.push_back(std::log(std::max(m.error, 1e-300)));
  }
  const double sl = slope(g2, log_err);
  return {dominated && sl < 0.0, std::to_string(gammas.size()) + " gammas, max measured/bound " +
                                     fmt("%.3g", worst_ratio) + ", slope d log err / d gamma^2 = " +
                                     fmt("%.3f", sl) + " (< 0)"};
}

// 4. Sweep gap at theta = pi/4 equals kappa |x|.
constexpr double kC4Rel = 0.05;
Outcome two_level_gap() {
  const SplitSystem sp = split(tfim_family(1.0, 1.5), 4, 2);
  const AncillaPath path = build_ancilla_path(sp, sp.overlap());
  const double gap = eigendecompose(path.M(std::numbers::pi / 4)).gap;
  const double ratio = gap / (path.kappa * sp.overlap());
  return {std::abs(ratio - 1.0) <= kC4Rel,
          "gap / (kappa |x|) = " + fmt("%.6f", ratio) + " (within " + fmt("%.2f", kC4Rel) + ")"};
}

// 5. Gluing fidelity thresholds and monotonicity.
constexpr double kC5Once = 0.999;
constexpr double kC5Iterate = 0.9999;
constexpr double kC5Monotone = 1e-7;
Outcome gluing_fidelity() {
  const FamilyBuilder fam = tfim_family(1.0, 1.5);
  const SplitSystem sp4 = split(fam, 4, 2);
  GlueParams ref;
  ref.steps = 0;
  const double once = *glue_once(sp4, ref).stage.fidelity_vs_exact;

  GlueParams it;
  it.steps = 16;
  const double iterated = iterate_gluing(fam, 2, 8, it).final_fidelity.value_or(0.0);

  bool gamma_monotone = true;
  double prev_f = 0.0, prev_sweep = 0.0;
  for (double gamma : {1.0, 2.0, 4.0, 8.0, 12.0, 16.0}) {
    GlueParams g;
    g.steps = 128;
    g.gamma = gamma;
    g.require_transfer = false;
    const auto st = glue_once(sp4, g).stage;
    if (*st.fidelity_vs_exact < prev_f - kC5Monotone || st.sweep_fidelity < prev_sweep - kC5Monotone) {
      gamma_monotone = false;
    }
    prev_f = *st.fidelity_vs_exact;
    prev_sweep = st.sweep_fidelity;
  }

  const SplitSystem sp8 = split(fam, 8, 4);
  bool alpha_monotone = true;
  prev_f = 0.0;
  std::string alpha_trace;
  for (int alpha : {1, 2, 3, 4}) {
    GlueParams a;
    a.steps = 32;
    a.gamma = 10.0;
    a.alpha = alpha;
    a.require_transfer = false;
    const double f = *glue_once(sp8, a).stage.fidelity_vs_exact;
    if (f < prev_f - kC5Monotone) alpha_monotone = false;
    prev_f = f;
    alpha_trace += (alpha_trace.empty() ? "" : "/") + sci(1.0 - f);
  }

  const bool pass = once >= kC5Once && iterated >= kC5Iterate && gamma_monotone && alpha_monotone;
  return {pass, "n=4 once " + fmt("%.9f", once) + " (>= 0.999), n=8 iterate " + fmt("%.9f", iterated) +
                    " (>= 0.9999), gamma monotone " + (gamma_monotone ? "yes" : "no") +
                    ", alpha monotone " + (alpha_monotone ? "yes" : "no") + " (1-F " + alpha_trace + ")"};
}

// 6. Truncated generators converge in alpha; unitary distance obeys the integral bound.
constexpr double kC6Slack = 1e-10;
Outcome truncation_decay() {
  const SplitSystem sp = split(tfim_family(1.0, 1.5), 6, 3);
  const std::vector<double> s_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<int> alphas{1, 2, 3};
  bool monotone = true, decays = true, integral = true;
  std::string note;
  for (double gamma : {0.5, 1.0, 2.0}) {
    const auto rep = truncation_distance(sp, s_grid, gamma, alphas, FilterKind::gaussian, 16);
    for (std::size_t i = 0; i < rep.rows.size(); i += alphas.size()) {
      for (std::size_t k = 1; k < alphas.size(); ++k) {
        if (rep.rows[i + k].distance > rep.rows[i + k - 1].distance + kC6Slack) monotone = false;
      }
      // alpha = 3 is the full chain; the decay regime alpha >= gamma needs two
      // nontrivial radii, so only gamma <= 1 contributes.
      if (gamma <= 1.0 && !(rep.rows[i + 1].distance < rep.rows[i].distance)) decays = false;
    }
    for (const auto& u : rep.unitary_rows) {
      if (u.unitary_distance > u.integral_bound + kC6Slack) integral = false;
    }
    if (gamma == 0.5) note = "gamma 0.5, s 0.1: " + sci(rep.rows[0].distance) + "/" + sci(rep.rows[1].distance);
  }
  return {monotone && decays && integral,
          std::string("nonincreasing ") + (monotone ? "yes" : "no") + ", decay " + (decays ? "yes" : "no") +
              ", integral bound " + (integral ? "yes" : "no") + " (" + note + ")"};
}

// 7. Commutator scan, fitted envelope and synthetic round trip.
constexpr double kC7Zero = 1e-12;
constexpr double kC7RoundTrip = 1e-6;
Outcome lieb_robinson() {
  const ChainHamiltonian h = tfim_chain(8, 1.0, 1.5, false);
  std::vector<double> ts;
  for (int i = 0; i <= 8; ++i) ts.push_back(0.25 * i);
  auto samples = lr_commutator_scan(h, 0, ts, {1, 2, 3, 4, 5, 6, 7});
  double t0 = 0.0;
  for (const auto& s : samples)
    if (s.t == 0.0) t0 = std::max(t0, s.commutator_norm);
  const LRFit fit = fit_lr_constants(samples);
  apply_lr_bound(samples, fit);
  int violations = 0;
  for (const auto& s : samples) {
    if (s.t > 0.0 && s.commutator_norm < kSaturationNorm && s.commutator_norm > s.bound_value) ++violations;
  }

  LRFit gen;
  gen.v = 1.3;
  gen.kappa_lr = 2.1;
  std::vector<LRSample> syn;
  for (double t : {0.1, 0.2, 0.3, 0.5})
    for (int d : {1, 2, 3, 4, 5}) syn.push_back({t, d, gen.bound(t, d), 0.0});
  const LRFit back = fit_lr_constants(syn);
  const double rt = std::max(std::abs(back.v - gen.v), std::abs(back.kappa_lr - gen.kappa_lr));

  const bool pass = t0 <= kC7Zero && violations == 0 && rt <= kC7RoundTrip;
  return {pass, "t=0 max " + sci(t0) + ", fit v=" + fmt("%.3f", fit.v) + " kappa=" + fmt("%.3f", fit.kappa_lr) +
                    " C=" + fmt("%.3g", fit.prefactor) + ", violations " + std::to_string(violations) +
                    ", round trip " + sci(rt)};
}

// 8. Light-cone evaluation equals dense evaluation on random circuits.
constexpr double kC8Tol = 1e-10;
Outcome representation_consistency() {
  std::mt19937_64 rng(20260101);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    LocalCircuit c;
    c.m = uni(1, 3);
    c.copies = uni(2, 12 / c.m);
    c.base_block_state = random_state(dim_of(c.m), rng());
    const int n = c.n();
    const int count = uni(1, 10);
    for (int i = 0; i < count; ++i) {
      const int width = uni(1, std::min(4, n));
      const int lo = uni(0, n - width);
      GluingStage s;
      s.support = {lo, lo + width - 1};
      s.unitary = random_unitary(dim_of(width), rng());
      c.stages.push_back(std::move(s));
    }
    const int w = uni(1, std::min(2, n));
    const int lo = uni(0, n - w);
    const Observable obs{random_hermitian(dim_of(w), rng()), {lo, lo + w - 1}};
    const double dense = dense_expectation(apply_circuit_dense(c), obs, n);
    worst = std::max(worst, std::abs(local_expectation(c, obs).value - dense));
  }
  return {worst < kC8Tol, "50 circuits, max |local - dense| = " + sci(worst) + " (< " + sci(kC8Tol) + ")"};
}

// 9. Same config and seed give byte-identical CSV output.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "chainglue_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"experiment": "determinism", "m": 2, "n": 4, "seed": 7,
    "gamma_grid": [2.0, 8.0], "alpha_grid": [null, 1],
    "steps": {"policy": "fixed", "count": 32}, "require_transfer": false})";
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::ostringstream out, err;
  std::vector<std::string> bodies;
  bool ran = true;
  for (const char* sub : {"run1", "run2"}) {
    const int code = cli::run_cli({"glue", "--config", cfg.string(), "--out", (dir / sub).string()}, out, err);
    ran = ran && code == 0;
    bodies.push_back(read(dir / sub / "glue.csv"));
  }
  fs::remove_all(dir);
  const bool same = !bodies[0].empty() && bodies[0] == bodies[1];
  return {ran && same, std::string("two runs ") + (ran ? "exit 0" : "failed") + ", glue.csv " +
                           std::to_string(bodies[0].size()) + " bytes, identical " + (same ? "yes" : "no")};
}

struct Criterion {
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1 generator-equivalence", 10.0, generator_equivalence},
      {"C2 exact-adiabatic-recovery", 30.0, exact_recovery},
      {"C3 certified-error-domination", 60.0, certified_domination},
      {"C4 two-level-gap-law", 5.0, two_level_gap},
      {"C5 gluing-fidelity", 120.0, gluing_fidelity},
      {"C6 truncation-decay", 120.0, truncation_decay},
      {"C7 lieb-robinson-scan", 60.0, lieb_robinson},
      {"C8 representation-consistency", 60.0, representation_consistency},
      {"C9 determinism", 60.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.time_limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
