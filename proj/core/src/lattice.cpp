#include "kamnf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kamnf/errors.hpp"

namespace kamnf::lattice {

Mode::Mode(std::initializer_list<int> coords) {
  if (coords.size() == 0 || coords.size() > kMaxDim)
    throw ValidationError("mode dimension must be in 1.." + std::to_string(kMaxDim));
  dim = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), c.begin());
}

Mode Mode::from_span(std::span<const int> coords) {
  if (coords.empty() || coords.size() > kMaxDim)
    throw ValidationError("mode dimension must be in 1.." + std::to_string(kMaxDim));
  Mode m;
  m.dim = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), m.c.begin());
  return m;
}

Mode Mode::zero(int d) {
  if (d < 1 || d > kMaxDim) throw ValidationError("dimension out of range: " + std::to_string(d));
  Mode m;
  m.dim = static_cast<std::uint8_t>(d);
  return m;
}

std::int64_t Mode::norm2() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) s += static_cast<std::int64_t>(c[i]) * c[i];
  return s;
}

double Mode::euclid() const { return std::sqrt(static_cast<double>(norm2())); }

int Mode::sup() const {
  int s = 0;
  for (int i = 0; i < dim; ++i) s = std::max(s, std::abs(c[i]));
  return s;
}

bool Mode::is_zero() const {
  return std::all_of(c.begin(), c.begin() + dim, [](int v) { return v == 0; });
}

namespace {
void require_same_dim(const Mode& x, const Mode& y) {
  if (x.dim != y.dim) throw ValidationError("mode dimension mismatch");
}
}  // namespace

Mode operator+(const Mode& x, const Mode& y) {
  require_same_dim(x, y);
  Mode r = x;
  for (int i = 0; i < x.dim; ++i) r.c[i] += y.c[i];
  return r;
}

Mode operator-(const Mode& x, const Mode& y) {
  require_same_dim(x, y);
  Mode r = x;
  for (int i = 0; i < x.dim; ++i) r.c[i] -= y.c[i];
  return r;
}

Mode operator*(int s, const Mode& x) {
  Mode r = x;
  for (int i = 0; i < x.dim; ++i) r.c[i] *= s;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Mode& m) {
  os << '(';
  for (int i = 0; i < m.dim; ++i) os << (i ? "," : "") << m.c[i];
  return os << ')';
}

std::string to_string(const Mode& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

void LatticeParams::validate() const {
  if (d < 1 || d > kMaxDim) throw ValidationError("d must be in 1.." + std::to_string(kMaxDim) + ", got " + std::to_string(d));
  if (!(sigma > 2.0)) throw ValidationError("sigma must exceed 2, got " + std::to_string(sigma));
  if (!(floor_const >= 21.0)) throw ValidationError("floor_const must be >= 21, got " + std::to_string(floor_const));
}

ModeNorms mode_norms(const Mode& n, const LatticeParams& p) {
  if (n.dim != p.d) throw ValidationError("mode " + to_string(n) + " does not have dimension " + std::to_string(p.d));
  const double e = n.euclid();
  return {e, std::max(1.0, e), std::max(p.floor_const, e)};
}

double weight(const Mode& n, const LatticeParams& p) {
  return std::pow(std::log(std::max(p.floor_const, n.euclid())), p.sigma);
}

MultiIndex::MultiIndex(std::initializer_list<Entry> entries) {
  for (const auto& [m, e] : entries) add(m, e);
}

MultiIndex MultiIndex::unit(const Mode& n, int count) {
  MultiIndex r;
  r.add(n, count);
  return r;
}

void MultiIndex::add(const Mode& n, int delta) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, const Mode& m) { return e.first < m; });
  if (it != entries_.end() && it->first == n) {
    it->second += delta;
    if (it->second < 0) throw ValidationError("negative exponent at mode " + to_string(n));
    if (it->second == 0) entries_.erase(it);
    return;
  }
  if (delta < 0) throw ValidationError("negative exponent at mode " + to_string(n));
  if (delta > 0) entries_.insert(it, {n, delta});
}

int MultiIndex::get(const Mode& n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, const Mode& m) { return e.first < m; });
  return (it != entries_.end() && it->first == n) ? it->second : 0;
}

int MultiIndex::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0,
                         [](int s, const Entry& e) { return s + e.second; });
}

bool MultiIndex::disjoint(const MultiIndex& other) const {
  auto i = entries_.begin();
  auto j = other.entries_.begin();
  while (i != entries_.end() && j != other.entries_.end()) {
    if (i->first == j->first) return false;
    if (i->first < j->first) ++i; else ++j;
  }
  return true;
}

MultiIndex operator+(const MultiIndex& x, const MultiIndex& y) {
  MultiIndex r;
  r.entries_.reserve(x.entries_.size() + y.entries_.size());
  auto i = x.entries_.begin();
  auto j = y.entries_.begin();
  while (i != x.entries_.end() || j != y.entries_.end()) {
    if (j == y.entries_.end() || (i != x.entries_.end() && i->first < j->first)) {
      r.entries_.push_back(*i++);
    } else if (i == x.entries_.end() || j->first < i->first) {
      r.entries_.push_back(*j++);
    } else {
      r.entries_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return r;
}

SignedIndex SignedIndex::difference(const MultiIndex& k, const MultiIndex& k_bar) {
  SignedIndex s;
  for (const auto& [m, e] : k.entries()) {
    const int v = e - k_bar.get(m);
    if (v > 0) s.pos.add(m, v);
  }
  for (const auto& [m, e] : k_bar.entries()) {
    const int v = e - k.get(m);
    if (v > 0) s.neg.add(m, v);
  }
  return s;
}

bool norm_order(const Mode& x, const Mode& y) {
  const auto nx = x.norm2();
  const auto ny = y.norm2();
  if (nx != ny) return nx > ny;
  return x < y;
}

namespace {
void push_repeated(SortedSystem& out, const MultiIndex& idx, int factor) {
  for (const auto& [m, e] : idx.entries()) out.insert(out.end(), static_cast<std::size_t>(factor * e), m);
}
}  // namespace

SortedSystem sorted_system(const MultiIndex& a, const MultiIndex& k, const MultiIndex& k_bar,
                           std::span<const Mode> jmodes) {
  if (jmodes.size() > 2) throw ValidationError("at most two J-modes allowed");
  SortedSystem out;
  push_repeated(out, a, 2);
  push_repeated(out, k, 1);
  push_repeated(out, k_bar, 1);
  for (const auto& m : jmodes) out.insert(out.end(), 2, m);
  std::sort(out.begin(), out.end(), norm_order);
  return out;
}

SortedSystem sorted_system(const SignedIndex& ell) {
  SortedSystem out;
  push_repeated(out, ell.pos, 1);
  push_repeated(out, ell.neg, 1);
  std::sort(out.begin(), out.end(), norm_order);
  return out;
}

int mass_defect(const MultiIndex& k, const MultiIndex& k_bar) { return k.total() - k_bar.total(); }

Mode momentum_defect(const MultiIndex& k, const MultiIndex& k_bar, int d) {
  Mode r = Mode::zero(d);
  for (const auto& [m, e] : k.entries()) r = r + e * m;
  for (const auto& [m, e] : k_bar.entries()) r = r - e * m;
  return r;
}

Conservation conservation_check(const MultiIndex& k, const MultiIndex& k_bar, int d) {
  return {mass_defect(k, k_bar) == 0, momentum_defect(k, k_bar, d).is_zero()};
}

double momentum_gap(const MultiIndex& a, const MultiIndex& k, const MultiIndex& k_bar,
                    const LatticeParams& p) {
  const Mode defect = momentum_defect(k, k_bar, p.d);
  if (!defect.is_zero())
    throw ValidationError("momentum violated, defect " + to_string(defect));
  const SortedSystem sys = sorted_system(a, k, k_bar);
  if (sys.empty()) return 0.0;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double w = weight(sys[i], p);
    total += w;
    if (i >= 2) tail += w;
  }
  return total - 2.0 * weight(sys[0], p) - 0.5 * tail;
}

std::vector<Mode> truncated_modes(int d, int radius) {
  if (d < 1 || d > kMaxDim) throw ValidationError("dimension out of range: " + std::to_string(d));
  if (radius < 0) throw ValidationError("mode radius must be non-negative");
  std::vector<Mode> out;
  Mode m = Mode::zero(d);
  for (int i = 0; i < d; ++i) m.c[i] = -radius;
  while (true) {
    out.push_back(m);
    int i = d - 1;
    while (i >= 0 && m.c[i] == radius) m.c[i--] = -radius;
    if (i < 0) break;
    ++m.c[i];
  }
  return out;
}

}  // namespace kamnf::lattice
