#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kamnf/diophantine.hpp"
#include "kamnf/hamiltonian.hpp"
#include "kamnf/homological.hpp"
#include "kamnf/schedule.hpp"

namespace kamnf::kam {

using ham::Hamiltonian;
using homological::NormalForm;
using lattice::Mode;

struct KamConfig {
  int d = 1;
  double sigma = 2.5;
  double r = 1.0;
  double floor_const = 1024.0;
  double gamma = 0.1;
  double epsilon = 1e-6;
  int sign = 1;
  int mode_radius = 2;
  int degree_cap = 8;
  int steps = 1;
  std::uint64_t seed = 1;
  double prune_tol = 1e-18;
  int lie_order_cap = 6;
  double tail_tol = 1e-60;
  int ell_budget = 6;
  bool strict = false;
  bool force = false;
  bool physical_multiplicity = false;

  void validate() const;
  [[nodiscard]] ham::HamParams ham_params() const;
  [[nodiscard]] double eps0() const;
};

// key=value lines; '#' starts a comment. Unknown keys are rejected.
KamConfig parse_config(const std::string& text, KamConfig base = {});
void apply_setting(KamConfig& cfg, const std::string& key, const std::string& value);

struct KamState {
  NormalForm nf;
  std::map<Mode, double> v_star;
  std::map<Mode, double> hat_shift;
  dioph::FrequencyVector omega;
  Hamiltonian r0;
  Hamiltonian r1;
  Hamiltonian r2;
  int s = 0;
  double error_budget = 0.0;
};

struct ClassNorms {
  double r0 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

struct BoundFlags {
  bool r0 = true;            // ||R0+||+ <= eps_{s+1}
  bool r1 = true;            // ||R1+||+ <= eps_{s+1}^0.6
  bool r2 = true;            // ||R2+||+ <= (1 + d_{s+1}) eps_0
  bool transform = true;     // ||Phi - id|| proxy <= eps_s^0.5
  bool hat_change = true;    // ||V_hat+ - V_hat||_inf <= eps_s^0.5
  bool shift = true;         // frequency shift <= eps_{s+1}^0.55
  bool shift_decay = true;   // n-dependent shift envelope decays like 1/<n>
  [[nodiscard]] bool all() const { return r0 && r1 && r2 && transform && hat_change && shift && shift_decay; }
};

struct StepReport {
  bool initial = false;
  int s = 0;
  double rho = 0.0;
  double rho_next = 0.0;
  double eps = 0.0;
  double eps_next = 0.0;
  ClassNorms before;
  ClassNorms after;
  ClassNorms chain_plus;  // plus norms of the R0, R1, R2 Lie chains
  double nf_chain_plus = 0.0;
  double min_divisor = 0.0;
  double min_guard_ratio = 0.0;
  double homological_residual = 0.0;  // relative, star norm at rho
  std::size_t eliminated = 0;
  std::size_t deferred = 0;
  double deferred_mass = 0.0;
  double pruned_mass = 0.0;
  double dropped_bound = 0.0;
  double tail_bound = 0.0;
  double error_budget = 0.0;
  double shift_max = 0.0;
  double v_breve_increment = 0.0;
  double hat_change = 0.0;
  double transform_proxy = 0.0;
  int freeze_iterations = 0;
  bool lie_smallness = true;
  std::size_t terms_after = 0;
  BoundFlags flags;
  std::map<Mode, double> hat_part;  // n-dependent shift at this step
  double wall_seconds = 0.0;
};

struct RunResult {
  KamState state;
  std::vector<StepReport> reports;
  double initial_sup_norm = 0.0;
  dioph::FrequencyVector omega;
};

KamState initial_state(const KamConfig& cfg, const Hamiltonian& h, const dioph::FrequencyVector& omega);
ClassNorms plus_norms(const KamState& state, double rho);

std::pair<KamState, StepReport> kam_step(const KamState& state, const ScheduleParams& sched, const KamConfig& cfg);

// Called with each report and the state it describes, initial report first.
using StepObserver = std::function<void(const StepReport&, const KamState&)>;

RunResult run(const KamConfig& cfg, const StepObserver& observe = {});
RunResult run_from(const KamConfig& cfg, const Hamiltonian& h, const StepObserver& observe = {});

// Shell-envelope check: max over each |n|-shell of |h_n|<n> never rises above earlier shells.
bool shift_envelope_decays(const std::map<Mode, double>& hat_part, double slack);

}  // namespace kamnf::kam
