#pragma once

#include <map>
#include <vector>

#include "kamnf/hamiltonian.hpp"

namespace kamnf::ham {

enum class Representation { expanded, j_collected };

// Replaces every J_n by q_n qbar_n - I_n(0).
Hamiltonian expand(const Hamiltonian& h);
// Regroups |q_n|^2 pairs as I_n(0) + J_n, keeping at most two J-factors per term.
Hamiltonian collect(const Hamiltonian& h);
Hamiltonian canonicalize(const Hamiltonian& h, Representation target);

struct ClassSplit {
  Hamiltonian r0;
  Hamiltonian r1;
  Hamiltonian r2;
};
ClassSplit class_split(const Hamiltonian& h);
Hamiltonian merge(const ClassSplit& parts);

Hamiltonian multiply(const Hamiltonian& h1, const Hamiltonian& h2);

// {h1, h2} = i sum_j (dh1/dq_j dh2/dqbar_j - dh1/dqbar_j dh2/dq_j); throws on degree overflow.
Hamiltonian poisson_bracket(const Hamiltonian& h1, const Hamiltonian& h2);

struct TruncatedBracket {
  Hamiltonian value;
  double dropped_star_bound = 0.0;
  std::size_t dropped_pairs = 0;
};
// Skips pairs whose bracket would exceed degree_cap and bounds their star mass at rho.
TruncatedBracket poisson_bracket_truncated(const Hamiltonian& h1, const Hamiltonian& h2, double rho);

Hamiltonian partial(const Hamiltonian& h, const Mode& n, bool conjugate);
Hamiltonian second_partial(const Hamiltonian& h, const Mode& n, const Mode& m, bool conj_n, bool conj_m);

using StatePoint = std::map<Mode, Complex>;

double initial_action(const Mode& n, const HamParams& p);
Complex evaluate(const Hamiltonian& h, const StatePoint& x);

struct FieldComponent {
  Complex dq;      // i dH/dqbar_n
  Complex dq_bar;  // -i dH/dq_n
  [[nodiscard]] double magnitude() const;
};
std::map<Mode, FieldComponent> vector_field(const Hamiltonian& h, const StatePoint& x);
double vf_sup_norm(const Hamiltonian& h, const StatePoint& x, double rho);

// State with q_n = scale * exp(-rho w_n) on every truncated mode.
StatePoint weighted_point(const HamParams& p, double rho, double scale);

}  // namespace kamnf::ham
