#pragma once

#include <compare>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>

namespace spinopm {

// Angular-momentum quantum number stored as twice its value, so j = 3/2 is
// exactly representable.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT: implicit by design

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // 2j + 1, written [j] in the angular-momentum literature.
  constexpr int multiplicity() const { return twice_ + 1; }

  // Only valid when is_integer().
  constexpr int as_int() const { return twice_ / 2; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }

  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

 private:
  int twice_ = 0;
};

constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

inline constexpr HalfInt kElectronSpin = half(1);

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

// (-1)^k for an integer-valued HalfInt.
inline int phase(HalfInt k) {
  if (!k.is_integer()) throw std::invalid_argument("phase of non-integer exponent " + k.str());
  return (k.as_int() % 2 == 0) ? 1 : -1;
}

// Upper (a = I + 1/2) and lower (b = I - 1/2) ground hyperfine manifolds.
constexpr HalfInt upper_manifold(HalfInt nuclear_spin) { return nuclear_spin + half(1); }
constexpr HalfInt lower_manifold(HalfInt nuclear_spin) { return nuclear_spin - half(1); }

inline bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  return a.twice() >= 0 && b.twice() >= 0 && c.twice() >= 0 &&
         (a.twice() + b.twice() + c.twice()) % 2 == 0 && c.twice() <= a.twice() + b.twice() &&
         c.twice() >= std::abs(a.twice() - b.twice());
}

// j >= 0, |m| <= j and j - m integral.
inline bool valid_projection(HalfInt j, HalfInt m) {
  return j.twice() >= 0 && std::abs(m.twice()) <= j.twice() && (j.twice() - m.twice()) % 2 == 0;
}

}  // namespace spinopm

template <>
struct std::hash<spinopm::HalfInt> {
  std::size_t operator()(spinopm::HalfInt h) const noexcept { return std::hash<int>{}(h.twice()); }
};
