#include "kamnf/lie.hpp"

#include <cmath>
#include <string>

#include "kamnf/algebra.hpp"
#include "kamnf/constants.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/norms.hpp"

namespace kamnf::ham {

LieResult lie_chain(const Hamiltonian& x, const Hamiltonian& f, const LieOptions& opts, int shift) {
  if (opts.order_cap < 1) throw ValidationError("lie order_cap must be >= 1");
  require_same_params(x, f);
  LieResult out{Hamiltonian(x.params()), 0.0, 0.0, 0, {}, true};
  if (opts.delta > 0.0)
    out.smallness_holds = constants::flow_smallness(x.params().lattice.d, x.params().lattice.sigma, opts.delta,
                                                    sup_norm(f, opts.rho));

  double factorial = std::tgamma(shift + 1.0);
  double previous = star_norm(x, opts.rho) / factorial;
  Hamiltonian term = expand(x);
  std::vector<TermEntry> acc;
  bool exhausted = false;
  for (int m = 1; m <= opts.order_cap; ++m) {
    factorial *= (m + shift);
    if (opts.truncate) {
      auto b = poisson_bracket_truncated(term, f, opts.rho);
      term = std::move(b.value);
      out.dropped_bound += b.dropped_star_bound / factorial;
    } else {
      term = poisson_bracket(term, f);
    }
    out.orders = m;
    const double size = star_norm(term, opts.rho) / factorial;
    out.term_norms.push_back(size);
    for (const auto& [key, c] : term) acc.emplace_back(key, c / factorial);
    if (term.empty()) {
      exhausted = true;
      break;
    }
    if (m >= 2 && size > previous && size > opts.tail_tol)
      throw DivergenceError("lie series term " + std::to_string(m) + " grew: " + std::to_string(size) +
                            " > " + std::to_string(previous));
    if (size < opts.tail_tol) {
      exhausted = true;
      previous = size;
      break;
    }
    previous = size;
  }
  out.value = Hamiltonian::from_entries(x.params(), std::move(acc));
  if (!out.term_norms.empty() && !(exhausted && out.term_norms.back() == 0.0)) {
    const double last = out.term_norms.back();
    const double before = out.term_norms.size() >= 2 ? out.term_norms[out.term_norms.size() - 2]
                                                     : star_norm(x, opts.rho) / std::tgamma(shift + 1.0);
    const double ratio = before > 0.0 ? last / before : 0.0;
    out.tail_bound = ratio < 1.0 ? last * ratio / (1.0 - ratio) : constants::kInf;
  }
  out.value.set_error(out.tail_bound + out.dropped_bound);
  return out;
}

LieResult lie_transform(const Hamiltonian& h, const Hamiltonian& f, const LieOptions& opts) {
  LieResult chain = lie_chain(h, f, opts, 0);
  const double err = chain.value.error_budget();
  chain.value = linear_combine(1.0, expand(h), 1.0, chain.value);
  chain.value.set_error(h.error_budget() + err);
  return chain;
}

}  // namespace kamnf::ham
