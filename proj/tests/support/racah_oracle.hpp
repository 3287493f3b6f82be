#pragma once

// Exact-rational Racah sums, independent of the library's angular code.
// A symbol is carried as sum * sqrt(radicand) with both factors rational and
// converted to 50-digit floating point only at the end.

#include <cstdlib>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "spinopm/half_int.hpp"

namespace racah {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_bin_float_50;
using spinopm::HalfInt;

inline cpp_int factorial(int n) {
  static std::vector<cpp_int> table{1};
  if (n < 0) std::abort();
  while (static_cast<int>(table.size()) <= n) table.push_back(table.back() * static_cast<int>(table.size()));
  return table[n];
}

// Arguments in units of 1/2; all combinations below must be even.
inline int whole(int twice) { return twice / 2; }

inline bool triad(int a, int b, int c) {
  return a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= std::abs(a - b);
}

// Δ(abc) = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
inline cpp_rational delta(int a, int b, int c) {
  return cpp_rational(factorial(whole(a + b - c)) * factorial(whole(a - b + c)) * factorial(whole(-a + b + c)),
                      factorial(whole(a + b + c) + 1));
}

inline Real to_real(const cpp_rational& sum, const cpp_rational& radicand) {
  if (sum == 0) return Real(0);
  const Real r = Real(numerator(radicand)) / Real(denominator(radicand));
  return Real(numerator(sum)) / Real(denominator(sum)) * sqrt(r);
}

// C^{J M}_{j1 m1; j2 m2}, arguments doubled.
inline Real clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M) {
  if (m1 + m2 != M || !triad(j1, j2, J)) return 0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J) return 0;
  if ((j1 - m1) % 2 || (j2 - m2) % 2 || (J - M) % 2) return 0;
  const cpp_rational radicand = cpp_rational(J + 1) * delta(j1, j2, J) *
                                cpp_rational(factorial(whole(j1 + m1)) * factorial(whole(j1 - m1)) *
                                             factorial(whole(j2 + m2)) * factorial(whole(j2 - m2)) *
                                             factorial(whole(J + M)) * factorial(whole(J - M)));
  cpp_rational sum = 0;
  for (int k = 0;; ++k) {
    const int f[] = {k, whole(j1 + j2 - J) - k, whole(j1 - m1) - k, whole(j2 + m2) - k,
                     whole(J - j2 + m1) + k, whole(J - j1 - m2) + k};
    if (f[1] < 0 || f[2] < 0 || f[3] < 0) break;
    if (f[4] < 0 || f[5] < 0) continue;
    cpp_int den = 1;
    for (int v : f) den *= factorial(v);
    sum += cpp_rational(k % 2 ? -1 : 1, den);
  }
  return to_real(sum, radicand);
}

// {a b c; d e f}, arguments doubled.
inline Real wigner_6j(int a, int b, int c, int d, int e, int f) {
  if (!triad(a, b, c) || !triad(a, e, f) || !triad(d, b, f) || !triad(d, e, c)) return 0;
  const cpp_rational radicand = delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c);
  const int s1 = whole(a + b + c), s2 = whole(a + e + f), s3 = whole(d + b + f), s4 = whole(d + e + c);
  const int p1 = whole(a + b + d + e), p2 = whole(a + c + d + f), p3 = whole(b + c + e + f);
  cpp_rational sum = 0;
  for (int t = std::max({s1, s2, s3, s4}); t <= std::min({p1, p2, p3}); ++t) {
    const cpp_int den = factorial(t - s1) * factorial(t - s2) * factorial(t - s3) * factorial(t - s4) *
                        factorial(p1 - t) * factorial(p2 - t) * factorial(p3 - t);
    sum += cpp_rational(t % 2 ? -factorial(t + 1) : factorial(t + 1), den);
  }
  return to_real(sum, radicand);
}

// {a b c; d e f; g h i} = Σ_x (-1)^{2x}(2x+1){a b c; f i x}{d e f; b x h}{g h i; x a d}
inline Real wigner_9j(int a, int b, int c, int d, int e, int f, int g, int h, int i) {
  if (!triad(a, b, c) || !triad(d, e, f) || !triad(g, h, i) || !triad(a, d, g) || !triad(b, e, h) ||
      !triad(c, f, i))
    return 0;
  const int lo = std::max({std::abs(a - i), std::abs(d - h), std::abs(b - f)});
  const int hi = std::min({a + i, d + h, b + f});
  Real sum = 0;
  for (int x = lo; x <= hi; x += 2) {
    const Real term = wigner_6j(a, b, c, f, i, x) * wigner_6j(d, e, f, b, x, h) * wigner_6j(g, h, i, x, a, d);
    sum += (x % 2 ? -1 : 1) * Real(x + 1) * term;
  }
  return sum;
}

inline Real clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  return clebsch_gordan(j1.twice(), m1.twice(), j2.twice(), m2.twice(), J.twice(), M.twice());
}

}  // namespace racah
