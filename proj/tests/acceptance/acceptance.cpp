#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kamnf/algebra.hpp"
#include "kamnf/csv.hpp"
#include "kamnf/diophantine.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/homological.hpp"
#include "kamnf/kam.hpp"
#include "kamnf/nls.hpp"
#include "kamnf/parallel.hpp"
#include "kamnf/schedule.hpp"
#include "kamnf/toeplitz.hpp"
#include "kamnf/verify.hpp"

namespace {

using namespace kamnf;
using lattice::Mode;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
  }
  void note(const std::string& what) { detail << (detail.tellp() > 0 ? "; " : "") << what; }
};

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

kam::KamConfig step_config(int d, int radius, int steps) {
  kam::KamConfig cfg;
  cfg.d = d;
  cfg.mode_radius = radius;
  cfg.epsilon = 1e-6;
  cfg.gamma = 0.1;
  cfg.ell_budget = 6;
  cfg.steps = steps;
  cfg.prune_tol = 0.0;
  return cfg;
}

Verdict homological_residual() {
  Verdict v;
  for (const auto& [d, radius] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}}) {
    const std::string tag = "d=" + std::to_string(d) + " radius=" + std::to_string(radius);
    try {
      const auto res = kam::run(step_config(d, radius, 1));
      const double residual = res.reports.at(1).homological_residual;
      v.require(residual <= 1e-10, tag + " residual " + g(residual));
    } catch (const SmallDivisorError& e) {
      v.require(false, tag + " " + e.what());
    }
  }
  return v;
}

Verdict gap_lemma() {
  Verdict v;
  for (double floor_const : {1024.0, 32.0})
    for (double sigma : {2.1, 2.5, 4.0}) {
      const auto c = verify::verify_lemma("gap", {{"sigma", sigma}, {"floor", floor_const}}, 100000, 2);
      v.require(c.ok(), "sigma=" + g(sigma) + " floor=" + g(floor_const) + " violations " +
                            std::to_string(c.violations) + " worst " + g(c.worst_margin));
    }
  return v;
}

Verdict run_lemmas(std::initializer_list<const char*> names, std::size_t samples) {
  Verdict v;
  std::vector<verify::LemmaSpec> specs;
  for (const char* n : names) specs.push_back({n, {}, samples});
  for (const auto& c : verify::run_suite(specs, 3)) {
    std::string line = c.name + " violations " + std::to_string(c.violations);
    if (c.hypothesis_unmet > 0)
      line += ", smallness hypothesis unmet in " + std::to_string(c.hypothesis_unmet) + "/" +
              std::to_string(c.samples) + " (constant overflows; inequality holds with infinite right side)";
    v.require(c.ok(), line);
  }
  return v;
}

Verdict bracket_algebra() {
  Verdict v;
  double antisym = 0.0;
  double jacobi = 0.0;
  double leibniz = 0.0;
  int samples = 0;
  for (const auto& [d, radius] : {std::pair{1, 2}, std::pair{2, 1}}) {
    ham::HamParams p;
    p.lattice.d = d;
    p.mode_radius = radius;
    p.degree_cap = 16;
    gen::HamiltonianLaw law;
    law.terms = 4;
    law.max_degree = 6;
    rng::Stream st(rng::hash({41, static_cast<std::uint64_t>(d)}));
    for (int i = 0; i < 100; ++i, ++samples) {
      const auto f = gen::random_hamiltonian(p, law, st);
      const auto gg = gen::random_hamiltonian(p, law, st);
      const auto h = gen::random_hamiltonian(p, law, st);
      const auto fg = ham::poisson_bracket(f, gg);
      antisym = std::max(antisym, ham::max_abs_difference(fg, ham::linear_combine(-1.0, ham::poisson_bracket(gg, f),
                                                                                   0.0, ham::Hamiltonian(p))));
      const auto t1 = ham::poisson_bracket(f, ham::poisson_bracket(gg, h));
      const auto t2 = ham::poisson_bracket(gg, ham::poisson_bracket(h, f));
      const auto t3 = ham::poisson_bracket(h, fg);
      const auto cyclic = ham::linear_combine(1.0, ham::linear_combine(1.0, t1, 1.0, t2), 1.0, t3);
      double scale = 0.0;
      for (const auto* term : {&t1, &t2, &t3})
        for (const auto& [k, c] : *term) scale = std::max(scale, std::abs(c));
      jacobi = std::max(jacobi, ham::max_abs_difference(cyclic, ham::Hamiltonian(p)) / std::max(scale, 1e-300));

      const auto lhs = ham::poisson_bracket(ham::multiply(f, gg), h);
      const auto rhs = ham::linear_combine(1.0, ham::multiply(f, ham::poisson_bracket(gg, h)), 1.0,
                                           ham::multiply(ham::poisson_bracket(f, h), gg));
      double lscale = 0.0;
      for (const auto& [k, c] : lhs) lscale = std::max(lscale, std::abs(c));
      leibniz = std::max(leibniz, ham::max_abs_difference(lhs, rhs) / std::max(lscale, 1e-300));
    }
  }
  v.require(antisym == 0.0, "antisymmetry max defect " + g(antisym) + " over " + std::to_string(samples) + " pairs");
  v.require(jacobi <= 1e-10, "Jacobi relative residual " + g(jacobi));
  v.require(leibniz <= 1e-10, "Leibniz relative residual " + g(leibniz));
  return v;
}

Verdict step_contraction() {
  Verdict v;
  const auto cfg = step_config(1, 2, 2);
  const auto res = kam::run(cfg);
  const double eps0 = cfg.eps0();
  const double r0_1 = res.reports.at(1).after.r0;
  const double r1_1 = res.reports.at(1).after.r1;
  v.require(r0_1 <= std::pow(eps0, 1.4), "|R0_1|+ " + g(r0_1) + " vs eps0^1.4 " + g(std::pow(eps0, 1.4)));
  v.require(r1_1 <= std::pow(eps0, 0.55), "|R1_1|+ " + g(r1_1) + " vs eps0^0.55 " + g(std::pow(eps0, 0.55)));
  const double r0_0 = res.reports.at(0).after.r0;
  const double r0_2 = res.reports.at(2).after.r0;
  const double first = std::log(r0_1) / std::log(r0_0);
  const double second = std::log(r0_2) / std::log(r0_1);
  v.note("ln-ratio step 0->1 " + g(first));
  v.require(second >= 1.3 && second <= 1.7, "ln-ratio step 1->2 " + g(second) + " vs [1.3, 1.7]");
  return v;
}

Verdict frequency_shift() {
  Verdict v;
  const auto cfg = step_config(1, 2, 1);
  const auto res = kam::run(cfg);
  const auto& rep = res.reports.at(1);
  const double bound = std::sqrt(kam::eps_at(1, cfg.eps0()));
  v.require(rep.shift_max <= bound, "shift " + g(rep.shift_max) + " vs eps1^0.5 " + g(bound));
  v.require(rep.flags.shift_decay, "n-dependent envelope decays like 1/<n>");
  return v;
}

Verdict diophantine_measure() {
  Verdict v;
  std::vector<dioph::MeasureEstimate> rows;
  for (double gamma : {0.01, 0.05, 0.1}) rows.push_back(dioph::resonance_measure({gamma, 1, 4, 2}, 10000, 5));
  const auto fit = dioph::fit_measure(rows);
  std::string fractions;
  for (std::size_t i = 0; i < rows.size(); ++i)
    fractions += (i ? "/" : "") + g(rows[i].fraction) + "(z=" + g(fit.excess[i]) + ")";
  v.note("fractions " + fractions + " fitted C " + g(fit.slope));
  v.require(fit.monotone, "monotone in gamma");
  v.require(fit.bounded, "every point within 2 stderr of C*gamma");
  return v;
}

Verdict scalar_suite() {
  Verdict v;
  const auto specs = verify::default_scalar_suite();
  const auto cases = verify::run_suite(specs, 1);
  std::size_t failed = 0;
  for (const auto& c : cases)
    if (!c.ok()) {
      ++failed;
      v.require(false, c.name + " " + verify::params_digest(c.params));
    }
  v.require(failed == 0, std::to_string(cases.size()) + " cases, " + std::to_string(failed) + " with violations");
  const auto summary = verify::log_sum_dual_summary(cases);
  v.require(summary.find("[tight]") != std::string::npos && summary.find("[loose]") != std::string::npos &&
                summary.find("not run") == std::string::npos,
            "dual report: " + summary);
  return v;
}

Verdict toplitz_lipschitz() {
  Verdict v;
  struct Probe {
    int d;
    int radius;
    Mode n;
    Mode m;
    Mode l;
  };
  for (const auto& pr : {Probe{1, 4, Mode{0}, Mode{2}, Mode{1}}, Probe{1, 4, Mode{-1}, Mode{1}, Mode{1}},
                         Probe{2, 3, Mode{0, 0}, Mode{1, 0}, Mode{0, 1}}}) {
    nls::NlsConfig ncfg;
    ncfg.d = pr.d;
    ncfg.mode_radius = pr.radius;
    const auto h = nls::build_cubic_nls(ncfg);
    const auto shifts = kam::feasible_shifts(h.params(), pr.n, pr.m, pr.l, 2 * pr.radius);
    const std::string tag = "d=" + std::to_string(pr.d) + " n=" + lattice::to_string(pr.n) +
                            " m=" + lattice::to_string(pr.m) + " l=" + lattice::to_string(pr.l);
    if (shifts.empty()) {
      v.require(false, tag + " no feasible shifts");
      continue;
    }
    const auto omega = dioph::sample_frequency(lattice::truncated_modes(pr.d, pr.radius), 8);
    const auto quad = homological::normal_form_hamiltonian(nls::build_normal_form(ncfg, omega), h.params());
    double quad_defect = 0.0;
    for (const auto& row : kam::tl_defect(quad, pr.n, pr.m, pr.l, shifts, 0.4).rows)
      quad_defect = std::max(quad_defect, row.defect);
    const auto table = kam::tl_defect(h, pr.n, pr.m, pr.l, shifts, 0.4);
    bool monotone = true;
    bool nonneg = true;
    for (int f = 0; f < 3; ++f) {
      monotone = monotone && table.non_increasing[static_cast<std::size_t>(f)];
      nonneg = nonneg && table.fitted_c[static_cast<std::size_t>(f)] >= 0.0;
    }
    v.require(quad_defect == 0.0 && monotone && nonneg,
              tag + " |t|<=" + std::to_string(std::abs(table.t_limit)) + " quadratic defect " + g(quad_defect) +
                  (monotone ? " non-increasing" : " increasing") + (nonneg ? " C>=0" : " C<0"));
  }
  return v;
}

std::string determinism_outputs() {
  std::string out = io::steps_csv(kam::run(step_config(1, 2, 2)).reports);
  std::vector<dioph::MeasureEstimate> rows{dioph::resonance_measure({0.05, 1, 4, 2}, 5000, 21)};
  out += io::measure_csv(rows);
  const std::vector<verify::LemmaSpec> specs{{"submultiplicativity", {}, 300}, {"gap", {}, 20000}, {"f_max", {}, 500}};
  out += io::lemma_csv(verify::run_suite(specs, 21));
  return out;
}

Verdict determinism() {
  Verdict v;
  set_thread_count(0);
  const auto first = determinism_outputs();
  const auto second = determinism_outputs();
  const unsigned many = std::max(thread_count(), 4u);
  set_thread_count(many);
  const auto wide = determinism_outputs();
  set_thread_count(1);
  const auto single = determinism_outputs();
  set_thread_count(0);
  v.require(first == second, "two runs byte-identical");
  v.require(first == single && wide == single, "threads 1 vs " + std::to_string(many) + " byte-identical");
  v.note(std::to_string(first.size()) + " bytes compared");
  return v;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "homological residual", 60, homological_residual},
      {2, "gap lemma", 60, gap_lemma},
      {3, "norm calculus",
       120, [] { return run_lemmas({"submultiplicativity", "norm_monotonicity", "transfer_to_plus", "transfer_from_plus"}, 1000); }},
      {4, "bracket algebra", 120, bracket_algebra},
      {5, "bracket/vector-field/second-derivative/flow bounds",
       300, [] { return run_lemmas({"bracket", "vector_field", "second_derivative", "flow"}, 200); }},
      {6, "one-step contraction", 600, step_contraction},
      {7, "frequency shift", 60, frequency_shift},
      {8, "Diophantine measure", 300, diophantine_measure},
      {9, "scalar lemma suite", 120, scalar_suite},
      {10, "Toplitz-Lipschitz defects", 60, toplitz_lipschitz},
      {11, "determinism", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.budget_seconds, "runtime " + g(secs) + "s of " + g(c.budget_seconds) + "s");
    if (!v.pass) ++failed;
    std::printf("%s criterion %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
