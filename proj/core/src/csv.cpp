#include "kamnf/csv.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>

namespace kamnf::io {

namespace {

class Table {
 public:
  Table(std::string_view schema, std::initializer_list<std::string_view> columns) {
    out_ = "# schema=";
    out_ += schema;
    out_ += '\n';
    row(columns);
  }

  void row(std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (auto c : cells) {
      if (!first) out_ += ',';
      out_ += c;
      first = false;
    }
    out_ += '\n';
  }

  [[nodiscard]] std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string steps_csv(std::span<const kam::StepReport> reports) {
  Table t("kamnf-steps/1",
          {"initial", "s", "rho", "rho_next", "eps", "eps_next", "r0_before", "r1_before", "r2_before", "r0_after",
           "r1_after", "r2_after", "chain_r0", "chain_r1", "chain_r2", "nf_chain", "min_divisor", "min_guard_ratio",
           "homological_residual", "eliminated", "deferred", "deferred_mass", "pruned_mass", "dropped_bound", "tail_bound", "error_budget",
           "shift_max", "v_breve_increment", "hat_change", "transform_proxy", "freeze_iterations", "lie_smallness",
           "terms_after", "ok_r0", "ok_r1", "ok_r2", "ok_transform", "ok_hat_change", "ok_shift", "ok_shift_decay",
           "ok_all"});
  for (const auto& r : reports) {
    t.row({flag(r.initial), num(r.s), fmt17(r.rho), fmt17(r.rho_next), fmt17(r.eps), fmt17(r.eps_next),
           fmt17(r.before.r0), fmt17(r.before.r1), fmt17(r.before.r2), fmt17(r.after.r0), fmt17(r.after.r1),
           fmt17(r.after.r2), fmt17(r.chain_plus.r0), fmt17(r.chain_plus.r1), fmt17(r.chain_plus.r2),
           fmt17(r.nf_chain_plus), fmt17(r.min_divisor), fmt17(r.min_guard_ratio), fmt17(r.homological_residual), num(r.eliminated),
           num(r.deferred), fmt17(r.deferred_mass), fmt17(r.pruned_mass), fmt17(r.dropped_bound),
           fmt17(r.tail_bound), fmt17(r.error_budget), fmt17(r.shift_max), fmt17(r.v_breve_increment),
           fmt17(r.hat_change), fmt17(r.transform_proxy), num(r.freeze_iterations), flag(r.lie_smallness),
           num(r.terms_after), flag(r.flags.r0), flag(r.flags.r1), flag(r.flags.r2), flag(r.flags.transform),
           flag(r.flags.hat_change), flag(r.flags.shift), flag(r.flags.shift_decay), flag(r.flags.all())});
  }
  return std::move(t).str();
}

std::string measure_csv(std::span<const dioph::MeasureEstimate> rows) {
  Table t("kamnf-measure/1", {"gamma", "trials", "violations", "fraction", "stderr", "ell_budget", "mode_radius", "seed"});
  for (const auto& m : rows)
    t.row({fmt17(m.gamma), num(m.trials), num(m.violations), fmt17(m.fraction), fmt17(m.stderr_), num(m.ell_budget),
           num(m.mode_radius), std::to_string(m.seed)});
  return std::move(t).str();
}

std::string lemma_csv(std::span<const verify::LemmaCase> cases, bool timing) {
  Table t("kamnf-lemmas/1",
          {"name", "params", "samples", "seed", "violations", "worst_margin", "hypothesis_unmet", "seconds"});
  for (const auto& c : cases)
    t.row({c.name, verify::params_digest(c.params), num(c.samples), std::to_string(c.seed), num(c.violations),
           fmt17(c.worst_margin), num(c.hypothesis_unmet), timing ? fmt17(c.seconds) : "0"});
  return std::move(t).str();
}

std::string tl_csv(const kam::TlTable& table) {
  Table t("kamnf-tl/1", {"family", "t", "defect", "t_limit", "fitted_c", "non_increasing"});
  for (const auto& r : table.rows) {
    const auto f = static_cast<std::size_t>(r.family);
    t.row({kam::family_name(r.family), num(r.t), fmt17(r.defect), num(table.t_limit), fmt17(table.fitted_c[f]),
           flag(table.non_increasing[f])});
  }
  return std::move(t).str();
}

}  // namespace kamnf::io
