#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kamnf::lattice {

inline constexpr int kMaxDim = 4;

struct Mode {
  std::uint8_t dim = 0;
  std::array<int, kMaxDim> c{};

  Mode() = default;
  Mode(std::initializer_list<int> coords);
  static Mode from_span(std::span<const int> coords);
  static Mode zero(int d);

  [[nodiscard]] int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::int64_t norm2() const;
  [[nodiscard]] double euclid() const;
  [[nodiscard]] int sup() const;
  [[nodiscard]] bool is_zero() const;

  friend Mode operator+(const Mode& x, const Mode& y);
  friend Mode operator-(const Mode& x, const Mode& y);
  friend Mode operator*(int s, const Mode& x);
  friend auto operator<=>(const Mode&, const Mode&) = default;
  friend bool operator==(const Mode&, const Mode&) = default;
};

std::ostream& operator<<(std::ostream& os, const Mode& m);
std::string to_string(const Mode& m);

struct LatticeParams {
  int d = 1;
  double sigma = 2.5;
  double floor_const = 1024.0;

  void validate() const;
  friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

struct ModeNorms {
  double euclid;
  double angle;
  double floor;
};

ModeNorms mode_norms(const Mode& n, const LatticeParams& p);
double weight(const Mode& n, const LatticeParams& p);

// Finitely supported map Mode -> positive int, kept sorted by mode.
class MultiIndex {
 public:
  using Entry = std::pair<Mode, int>;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<Entry> entries);
  static MultiIndex unit(const Mode& n, int count = 1);

  void add(const Mode& n, int delta);
  [[nodiscard]] int get(const Mode& n) const;
  [[nodiscard]] int total() const;
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::span<const Entry> entries() const { return entries_; }
  [[nodiscard]] std::size_t support_size() const { return entries_.size(); }
  [[nodiscard]] bool disjoint(const MultiIndex& other) const;

  friend MultiIndex operator+(const MultiIndex& x, const MultiIndex& y);
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Entry> entries_;
};

// Signed index stored as (positive part, negative part) with disjoint supports.
struct SignedIndex {
  MultiIndex pos;
  MultiIndex neg;

  static SignedIndex difference(const MultiIndex& k, const MultiIndex& k_bar);
  [[nodiscard]] int get(const Mode& n) const { return pos.get(n) - neg.get(n); }
  [[nodiscard]] int total() const { return pos.total() + neg.total(); }
  [[nodiscard]] bool empty() const { return pos.empty() && neg.empty(); }
  friend auto operator<=>(const SignedIndex&, const SignedIndex&) = default;
  friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
};

using SortedSystem = std::vector<Mode>;

bool norm_order(const Mode& x, const Mode& y);

SortedSystem sorted_system(const MultiIndex& a, const MultiIndex& k, const MultiIndex& k_bar,
                           std::span<const Mode> jmodes = {});
SortedSystem sorted_system(const SignedIndex& ell);

struct Conservation {
  bool mass;
  bool momentum;
};

int mass_defect(const MultiIndex& k, const MultiIndex& k_bar);
Mode momentum_defect(const MultiIndex& k, const MultiIndex& k_bar, int d);
Conservation conservation_check(const MultiIndex& k, const MultiIndex& k_bar, int d);

// S - 2 w(n1*) - tail/2 on the sorted system of (a,k,k_bar); throws if momentum is violated.
double momentum_gap(const MultiIndex& a, const MultiIndex& k, const MultiIndex& k_bar,
                    const LatticeParams& p);

// Sup-norm box |n_i| <= radius in lexicographic order.
std::vector<Mode> truncated_modes(int d, int radius);

}  // namespace kamnf::lattice
