#include "kamnf/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "kamnf/errors.hpp"
#include "kamnf/norms.hpp"
#include "kamnf/parallel.hpp"

namespace kamnf::ham {

namespace {

constexpr std::size_t kChunk = 32;

bool has_j(const Hamiltonian& h) {
  return std::any_of(h.begin(), h.end(), [](const auto& t) { return !t.first.j.empty(); });
}

std::vector<TermEntry> expand_term(const TermKey& key, Complex c) {
  std::vector<TermEntry> out;
  const std::size_t nj = key.j.size();
  for (unsigned mask = 0; mask < (1u << nj); ++mask) {
    TermKey t{key.a, key.k, key.k_bar, {}};
    Complex coeff = c;
    for (std::size_t i = 0; i < nj; ++i) {
      if (mask & (1u << i)) {
        t.a.add(key.j[i], 1);
        coeff = -coeff;
      } else {
        t.k.add(key.j[i], 1);
        t.k_bar.add(key.j[i], 1);
      }
    }
    out.emplace_back(std::move(t), coeff);
  }
  return out;
}

void collect_term(const TermKey& key, Complex c, std::vector<TermEntry>& out) {
  std::vector<Mode> pairs;
  MultiIndex k = key.k;
  MultiIndex k_bar = key.k_bar;
  for (const auto& [m, e] : key.k.entries()) {
    const int p = std::min(e, key.k_bar.get(m));
    if (p > 0) {
      pairs.insert(pairs.end(), static_cast<std::size_t>(p), m);
      k.add(m, -p);
      k_bar.add(m, -p);
    }
  }
  if (pairs.empty()) {
    out.emplace_back(key, c);
    return;
  }
  MultiIndex all_actions = key.a;
  for (const auto& m : pairs) all_actions.add(m, 1);
  out.emplace_back(TermKey{all_actions, k, k_bar, {}}, c);

  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t e = i;
    while (e < pairs.size() && pairs[e] == pairs[i]) ++e;
    MultiIndex a = all_actions;
    a.add(pairs[i], -1);
    out.emplace_back(TermKey{std::move(a), k, k_bar, {pairs[i]}}, c * static_cast<double>(e - i));
    i = e;
  }

  for (std::size_t l = 1; l < pairs.size(); ++l) {
    MultiIndex kk = k;
    MultiIndex kb = k_bar;
    for (std::size_t pos = l + 1; pos < pairs.size(); ++pos) {
      kk.add(pairs[pos], 1);
      kb.add(pairs[pos], 1);
    }
    for (std::size_t i = 0; i < l; ++i) {
      MultiIndex a = key.a;
      for (std::size_t pos = 0; pos < l; ++pos)
        if (pos != i) a.add(pairs[pos], 1);
      out.emplace_back(make_key(std::move(a), kk, kb, {pairs[i], pairs[l]}), c);
    }
  }
}

// Monomial of (a+A, k+K-e_j, k_bar+K_bar-e_j) for every j with a nonzero factor.
void bracket_pair(const TermKey& x, Complex cx, const TermKey& y, Complex cy, std::vector<TermEntry>& out) {
  std::vector<std::pair<Mode, int>> factors;
  for (const auto& [m, e] : x.k.entries()) {
    const int f = e * y.k_bar.get(m);
    if (f != 0) factors.emplace_back(m, f);
  }
  for (const auto& [m, e] : x.k_bar.entries()) {
    const int f = e * y.k.get(m);
    if (f == 0) continue;
    auto it = std::find_if(factors.begin(), factors.end(), [&](const auto& p) { return p.first == m; });
    if (it == factors.end()) factors.emplace_back(m, -f);
    else it->second -= f;
  }
  if (factors.empty()) return;
  const MultiIndex a = x.a + y.a;
  const MultiIndex k = x.k + y.k;
  const MultiIndex kb = x.k_bar + y.k_bar;
  const Complex base = Complex{0.0, 1.0} * cx * cy;
  for (const auto& [m, f] : factors) {
    if (f == 0) continue;
    TermKey t{a, k, kb, {}};
    t.k.add(m, -1);
    t.k_bar.add(m, -1);
    out.emplace_back(std::move(t), base * static_cast<double>(f));
  }
}

template <class PairFn>
std::vector<TermEntry> pairwise(const Hamiltonian& x, const Hamiltonian& y, PairFn fn) {
  const std::vector<TermEntry> xs = x.entries();
  const std::vector<TermEntry> ys = y.entries();
  return map_chunks<TermEntry>(xs.size(), kChunk, [&](std::size_t b, std::size_t e) {
    std::vector<TermEntry> out;
    for (std::size_t i = b; i < e; ++i)
      for (const auto& [ky, cy] : ys) fn(xs[i].first, xs[i].second, ky, cy, out);
    return out;
  });
}

Hamiltonian expanded_or_self(const Hamiltonian& h) { return has_j(h) ? expand(h) : h; }

}  // namespace

Hamiltonian expand(const Hamiltonian& h) {
  std::vector<TermEntry> entries;
  for (const auto& [key, c] : h) {
    auto parts = expand_term(key, c);
    entries.insert(entries.end(), parts.begin(), parts.end());
  }
  auto out = Hamiltonian::from_entries(h.params(), std::move(entries));
  out.set_error(h.error_budget());
  return out;
}

Hamiltonian collect(const Hamiltonian& h) {
  const Hamiltonian ex = expanded_or_self(h);
  std::vector<TermEntry> entries;
  for (const auto& [key, c] : ex) collect_term(key, c, entries);
  auto out = Hamiltonian::from_entries(h.params(), std::move(entries));
  out.set_error(h.error_budget());
  return out;
}

Hamiltonian canonicalize(const Hamiltonian& h, Representation target) {
  return target == Representation::expanded ? expand(h) : collect(h);
}

ClassSplit class_split(const Hamiltonian& h) {
  const Hamiltonian col = collect(h);
  std::vector<TermEntry> parts[3];
  for (const auto& [key, c] : col) parts[key.j.size()].emplace_back(key, c);
  ClassSplit out{Hamiltonian::from_entries(h.params(), std::move(parts[0])),
                 Hamiltonian::from_entries(h.params(), std::move(parts[1])),
                 Hamiltonian::from_entries(h.params(), std::move(parts[2]))};
  out.r0.set_error(h.error_budget());
  return out;
}

Hamiltonian merge(const ClassSplit& parts) {
  return linear_combine(1.0, linear_combine(1.0, parts.r0, 1.0, parts.r1), 1.0, parts.r2);
}

Hamiltonian multiply(const Hamiltonian& h1, const Hamiltonian& h2) {
  require_same_params(h1, h2);
  const Hamiltonian x = expanded_or_self(h1);
  const Hamiltonian y = expanded_or_self(h2);
  auto entries = pairwise(x, y, [](const TermKey& a, Complex ca, const TermKey& b, Complex cb, auto& out) {
    out.emplace_back(TermKey{a.a + b.a, a.k + b.k, a.k_bar + b.k_bar, {}}, ca * cb);
  });
  return Hamiltonian::from_entries(h1.params(), std::move(entries));
}

Hamiltonian poisson_bracket(const Hamiltonian& h1, const Hamiltonian& h2) {
  require_same_params(h1, h2);
  const Hamiltonian x = expanded_or_self(h1);
  const Hamiltonian y = expanded_or_self(h2);
  auto entries = pairwise(x, y, [](const TermKey& a, Complex ca, const TermKey& b, Complex cb, auto& out) {
    bracket_pair(a, ca, b, cb, out);
  });
  return Hamiltonian::from_entries(h1.params(), std::move(entries));
}

TruncatedBracket poisson_bracket_truncated(const Hamiltonian& h1, const Hamiltonian& h2, double rho) {
  require_same_params(h1, h2);
  const Hamiltonian x = expanded_or_self(h1);
  const Hamiltonian y = expanded_or_self(h2);
  const HamParams& p = x.params();
  const int cap = p.degree_cap;
  auto entries = pairwise(x, y, [cap](const TermKey& a, Complex ca, const TermKey& b, Complex cb, auto& out) {
    if (a.degree() + b.degree() - 2 <= cap) bracket_pair(a, ca, b, cb, out);
  });

  std::map<int, double> ax;
  std::map<int, double> ay;
  std::map<int, std::size_t> nx;
  std::map<int, std::size_t> ny;
  for (const auto& [key, c] : x) {
    ax[key.degree()] += std::abs(c) * star_weight(key, p, rho) * key.degree();
    ++nx[key.degree()];
  }
  for (const auto& [key, c] : y) {
    ay[key.degree()] += std::abs(c) * star_weight(key, p, rho) * key.degree();
    ++ny[key.degree()];
  }
  double mass = 0.0;
  std::size_t pairs = 0;
  for (const auto& [dx, vx] : ax)
    for (const auto& [dy, vy] : ay)
      if (dx + dy - 2 > cap) {
        mass += vx * vy;
        pairs += nx[dx] * ny[dy];
      }
  double boost = 0.0;
  for (const auto& m : lattice::truncated_modes(p.lattice.d, p.mode_radius))
    boost = std::max(boost, lattice::weight(m, p.lattice));
  TruncatedBracket out{Hamiltonian::from_entries(p, std::move(entries)), 0.0, pairs};
  out.dropped_star_bound = mass > 0.0 ? std::exp(2.0 * rho * boost) * mass : 0.0;
  return out;
}

Hamiltonian partial(const Hamiltonian& h, const Mode& n, bool conjugate) {
  const Hamiltonian ex = expanded_or_self(h);
  std::vector<TermEntry> entries;
  for (const auto& [key, c] : ex) {
    const int e = conjugate ? key.k_bar.get(n) : key.k.get(n);
    if (e == 0) continue;
    TermKey t = key;
    (conjugate ? t.k_bar : t.k).add(n, -1);
    entries.emplace_back(std::move(t), c * static_cast<double>(e));
  }
  return Hamiltonian::from_entries(h.params(), std::move(entries));
}

Hamiltonian second_partial(const Hamiltonian& h, const Mode& n, const Mode& m, bool conj_n, bool conj_m) {
  return partial(partial(h, n, conj_n), m, conj_m);
}

double initial_action(const Mode& n, const HamParams& p) {
  return std::exp(-2.0 * p.r * lattice::weight(n, p.lattice));
}

namespace {
Complex lookup(const StatePoint& x, const Mode& m) {
  auto it = x.find(m);
  return it == x.end() ? Complex{} : it->second;
}

Complex monomial_value(const TermKey& key, const HamParams& p, const StatePoint& x) {
  Complex v{1.0, 0.0};
  for (const auto& [m, e] : key.a.entries()) v *= std::pow(initial_action(m, p), e);
  for (const auto& [m, e] : key.k.entries()) v *= std::pow(lookup(x, m), e);
  for (const auto& [m, e] : key.k_bar.entries()) v *= std::pow(std::conj(lookup(x, m)), e);
  return v;
}
}  // namespace

Complex evaluate(const Hamiltonian& h, const StatePoint& x) {
  const Hamiltonian ex = expanded_or_self(h);
  Complex sum{};
  for (const auto& [key, c] : ex) sum += c * monomial_value(key, ex.params(), x);
  return sum;
}

double FieldComponent::magnitude() const { return std::max(std::abs(dq), std::abs(dq_bar)); }

std::map<Mode, FieldComponent> vector_field(const Hamiltonian& h, const StatePoint& x) {
  const Hamiltonian ex = expanded_or_self(h);
  const HamParams& p = ex.params();
  std::map<Mode, FieldComponent> out;
  const Complex i{0.0, 1.0};
  for (const auto& [key, c] : ex) {
    for (const auto& [m, e] : key.k.entries()) {
      TermKey t = key;
      t.k.add(m, -1);
      out[m].dq_bar += -i * c * static_cast<double>(e) * monomial_value(t, p, x);
    }
    for (const auto& [m, e] : key.k_bar.entries()) {
      TermKey t = key;
      t.k_bar.add(m, -1);
      out[m].dq += i * c * static_cast<double>(e) * monomial_value(t, p, x);
    }
  }
  return out;
}

double vf_sup_norm(const Hamiltonian& h, const StatePoint& x, double rho) {
  double best = 0.0;
  for (const auto& [m, comp] : vector_field(h, x))
    best = std::max(best, comp.magnitude() * std::exp(rho * lattice::weight(m, h.params().lattice)));
  return best;
}

StatePoint weighted_point(const HamParams& p, double rho, double scale) {
  StatePoint x;
  for (const auto& m : lattice::truncated_modes(p.lattice.d, p.mode_radius))
    x[m] = scale * std::exp(-rho * lattice::weight(m, p.lattice));
  return x;
}

}  // namespace kamnf::ham
