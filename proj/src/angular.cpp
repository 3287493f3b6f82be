#include "spinopm/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace spinopm {
namespace {

namespace mp = boost::multiprecision;

// Factorials are handled as exponent vectors over the primes, so the Racah
// sums reduce to one big-integer sum with a single rounding at the end.
class PrimeTable {
 public:
  static const PrimeTable& instance() {
    static const PrimeTable table(400);
    return table;
  }

  std::size_t size() const { return primes_.size(); }
  int prime(std::size_t k) const { return primes_[k]; }
  int limit() const { return limit_; }

  // Exponent of each prime in n!, added with the given sign.
  void add_factorial(std::vector<int>& exps, int n, int sign) const {
    if (n < 0) throw std::logic_error("negative factorial argument");
    if (n > limit_) throw std::out_of_range("factorial argument beyond prime table");
    for (std::size_t k = 0; k < primes_.size() && primes_[k] <= n; ++k) {
      int e = 0;
      for (long long q = primes_[k]; q <= n; q *= primes_[k]) e += static_cast<int>(n / q);
      exps[k] += sign * e;
    }
  }

  void add_integer(std::vector<int>& exps, int n, int sign) const {
    for (std::size_t k = 0; k < primes_.size() && n > 1; ++k) {
      while (n % primes_[k] == 0) {
        n /= primes_[k];
        exps[k] += sign;
      }
    }
    if (n != 1) throw std::out_of_range("integer beyond prime table");
  }

 private:
  explicit PrimeTable(int limit) : limit_(limit) {
    std::vector<bool> sieve(limit + 1, true);
    for (int n = 2; n <= limit; ++n) {
      if (!sieve[n]) continue;
      primes_.push_back(n);
      for (int m = 2 * n; m <= limit; m += n) sieve[m] = false;
    }
  }

  int limit_;
  std::vector<int> primes_;
};

// sign * sqrt(radicand) * sum_k s_k * term_k, where radicand and the terms
// are products of prime powers.
class SqrtRationalSum {
 public:
  SqrtRationalSum() : radicand_(PrimeTable::instance().size(), 0) {}

  std::vector<int>& radicand() { return radicand_; }

  std::vector<int>& new_term(int sign) {
    terms_.emplace_back(PrimeTable::instance().size(), 0);
    signs_.push_back(sign);
    return terms_.back();
  }

  double evaluate() const {
    if (terms_.empty()) return 0.0;
    const auto& primes = PrimeTable::instance();
    const std::size_t n = primes.size();
    std::vector<int> common = terms_.front();
    for (const auto& t : terms_)
      for (std::size_t k = 0; k < n; ++k) common[k] = std::min(common[k], t[k]);

    mp::cpp_int sum = 0;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      mp::cpp_int term = 1;
      for (std::size_t k = 0; k < n; ++k)
        if (int e = terms_[j][k] - common[k]; e > 0) term *= mp::pow(mp::cpp_int(primes.prime(k)), e);
      sum += signs_[j] > 0 ? term : mp::cpp_int(-term);
    }
    if (sum == 0) return 0.0;
    const int sign = sum < 0 ? -1 : 1;

    // value^2 = sum^2 * prod p^(radicand + 2 common)
    mp::cpp_int num = sum * sum;
    mp::cpp_int den = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const int e = radicand_[k] + 2 * common[k];
      if (e > 0) num *= mp::pow(mp::cpp_int(primes.prime(k)), e);
      if (e < 0) den *= mp::pow(mp::cpp_int(primes.prime(k)), -e);
    }
    using Float = mp::cpp_bin_float_50;
    const Float value = mp::sqrt(Float(num) / Float(den));
    return sign * static_cast<double>(value);
  }

 private:
  std::vector<int> radicand_;
  std::vector<std::vector<int>> terms_;
  std::vector<int> signs_;
};

template <std::size_t N>
struct ArrayHash {
  std::size_t operator()(const std::array<int, N>& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : a) h = (h ^ static_cast<std::size_t>(v + 1024)) * 1099511628211ull;
    return h;
  }
};

// Thread-safe memo keyed on 2j tuples.
template <std::size_t N>
class SymbolCache {
 public:
  template <class Compute>
  double get(const std::array<int, N>& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    const double v = compute();
    std::unique_lock lock(mutex_);
    map_.emplace(key, v);
    return v;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::array<int, N>, double, ArrayHash<N>> map_;
};

void require_projection(HalfInt j, HalfInt m) {
  if (!valid_projection(j, m))
    throw std::invalid_argument("invalid angular momentum pair j=" + j.str() + " m=" + m.str());
}

void require_magnitude(HalfInt j) {
  if (j.twice() < 0) throw std::invalid_argument("negative angular momentum " + j.str());
}

// Racah's single-sum formula; arguments already validated.
double compute_cg(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  const auto& primes = PrimeTable::instance();
  SqrtRationalSum s;
  auto& r = s.radicand();
  primes.add_integer(r, tJ + 1, +1);
  primes.add_factorial(r, (tj1 + tj2 - tJ) / 2, +1);
  primes.add_factorial(r, (tj1 - tj2 + tJ) / 2, +1);
  primes.add_factorial(r, (-tj1 + tj2 + tJ) / 2, +1);
  primes.add_factorial(r, (tj1 + tj2 + tJ) / 2 + 1, -1);
  primes.add_factorial(r, (tj1 + tm1) / 2, +1);
  primes.add_factorial(r, (tj1 - tm1) / 2, +1);
  primes.add_factorial(r, (tj2 + tm2) / 2, +1);
  primes.add_factorial(r, (tj2 - tm2) / 2, +1);
  primes.add_factorial(r, (tJ + tM) / 2, +1);
  primes.add_factorial(r, (tJ - tM) / 2, +1);

  const int a1 = (tj1 + tj2 - tJ) / 2;
  const int a2 = (tj1 - tm1) / 2;
  const int a3 = (tj2 + tm2) / 2;
  const int b1 = (tJ - tj2 + tm1) / 2;
  const int b2 = (tJ - tj1 - tm2) / 2;
  const int kmin = std::max({0, -b1, -b2});
  const int kmax = std::min({a1, a2, a3});
  for (int k = kmin; k <= kmax; ++k) {
    auto& t = s.new_term(k % 2 == 0 ? 1 : -1);
    primes.add_factorial(t, k, -1);
    primes.add_factorial(t, a1 - k, -1);
    primes.add_factorial(t, a2 - k, -1);
    primes.add_factorial(t, a3 - k, -1);
    primes.add_factorial(t, b1 + k, -1);
    primes.add_factorial(t, b2 + k, -1);
  }
  return s.evaluate();
}

void add_delta(std::vector<int>& r, int ta, int tb, int tc) {
  const auto& primes = PrimeTable::instance();
  primes.add_factorial(r, (ta + tb - tc) / 2, +1);
  primes.add_factorial(r, (ta - tb + tc) / 2, +1);
  primes.add_factorial(r, (-ta + tb + tc) / 2, +1);
  primes.add_factorial(r, (ta + tb + tc) / 2 + 1, -1);
}

double compute_6j(int a, int b, int c, int d, int e, int f) {
  const auto& primes = PrimeTable::instance();
  SqrtRationalSum s;
  auto& r = s.radicand();
  add_delta(r, a, b, c);
  add_delta(r, a, e, f);
  add_delta(r, d, b, f);
  add_delta(r, d, e, c);
  const int t1 = (a + b + c) / 2, t2 = (a + e + f) / 2, t3 = (d + b + f) / 2, t4 = (d + e + c) / 2;
  const int u1 = (a + b + d + e) / 2, u2 = (a + c + d + f) / 2, u3 = (b + c + e + f) / 2;
  const int tmin = std::max({t1, t2, t3, t4});
  const int tmax = std::min({u1, u2, u3});
  for (int t = tmin; t <= tmax; ++t) {
    auto& term = s.new_term(t % 2 == 0 ? 1 : -1);
    primes.add_factorial(term, t + 1, +1);
    primes.add_factorial(term, t - t1, -1);
    primes.add_factorial(term, t - t2, -1);
    primes.add_factorial(term, t - t3, -1);
    primes.add_factorial(term, t - t4, -1);
    primes.add_factorial(term, u1 - t, -1);
    primes.add_factorial(term, u2 - t, -1);
    primes.add_factorial(term, u3 - t, -1);
  }
  return s.evaluate();
}

SymbolCache<6>& cg_cache() {
  static SymbolCache<6> cache;
  return cache;
}
SymbolCache<6>& sixj_cache() {
  static SymbolCache<6> cache;
  return cache;
}
SymbolCache<9>& ninej_cache() {
  static SymbolCache<9> cache;
  return cache;
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  require_projection(j1, m1);
  require_projection(j2, m2);
  require_projection(J, M);
  if (m1 + m2 != M || !triangle(j1, j2, J)) return 0.0;
  const std::array<int, 6> key{j1.twice(), m1.twice(), j2.twice(), m2.twice(), J.twice(), M.twice()};
  return cg_cache().get(key, [&] { return compute_cg(key[0], key[1], key[2], key[3], key[4], key[5]); });
}

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  require_projection(j3, m3);
  const double cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3);
  if (cg == 0.0) return 0.0;
  return phase(j1 - j2 - m3) * cg / std::sqrt(static_cast<double>(j3.multiplicity()));
}

double wigner_6j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f) {
  for (HalfInt j : {a, b, c, d, e, f}) require_magnitude(j);
  if (!triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c)) return 0.0;
  const std::array<int, 6> key{a.twice(), b.twice(), c.twice(), d.twice(), e.twice(), f.twice()};
  return sixj_cache().get(key, [&] { return compute_6j(key[0], key[1], key[2], key[3], key[4], key[5]); });
}

double wigner_9j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f, HalfInt g,
                 HalfInt h, HalfInt i) {
  for (HalfInt j : {a, b, c, d, e, f, g, h, i}) require_magnitude(j);
  if (!triangle(a, b, c) || !triangle(d, e, f) || !triangle(g, h, i) || !triangle(a, d, g) ||
      !triangle(b, e, h) || !triangle(c, f, i))
    return 0.0;
  const std::array<int, 9> key{a.twice(), b.twice(), c.twice(), d.twice(), e.twice(),
                               f.twice(), g.twice(), h.twice(), i.twice()};
  return ninej_cache().get(key, [&] {
    // Sum over x of (-1)^{2x} [x] {a b c; f i x}{d e f; b x h}{g h i; x a d}.
    const int lo = std::max({std::abs(a.twice() - i.twice()), std::abs(d.twice() - h.twice()),
                             std::abs(b.twice() - f.twice())});
    const int hi = std::min({a.twice() + i.twice(), d.twice() + h.twice(), b.twice() + f.twice()});
    long double sum = 0.0L;
    for (int tx = lo; tx <= hi; tx += 2) {
      const HalfInt x = half(tx);
      const long double term = static_cast<long double>(wigner_6j(a, b, c, f, i, x)) *
                               wigner_6j(d, e, f, b, x, h) * wigner_6j(g, h, i, x, a, d);
      sum += (tx % 2 == 0 ? 1.0L : -1.0L) * (tx + 1) * term;
    }
    return static_cast<double>(sum);
  });
}

double racah_w(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f) {
  const double sixj = wigner_6j(a, b, e, d, c, f);
  if (sixj == 0.0) return 0.0;
  return phase(a + b + c + d) * sixj;
}

CouplingCoeffs ht_coefficients(HalfInt nuclear_spin) {
  if (nuclear_spin.twice() < 1) throw std::invalid_argument("nuclear spin must be >= 1/2");
  const HalfInt I = nuclear_spin;
  const HalfInt S = kElectronSpin;
  const std::array<HalfInt, 2> manifolds{upper_manifold(I), lower_manifold(I)};
  const int max_rank = upper_manifold(I).twice();  // 2a = 2I + 1
  CouplingCoeffs coeffs(I);

  auto sq = [](double v) { return std::sqrt(v); };
  for (HalfInt f : manifolds) {
    for (HalfInt fp : manifolds) {
      const double dims = static_cast<double>(f.multiplicity()) * fp.multiplicity();
      for (int rank = 0; rank <= max_rank; ++rank) {
        const double x = sq((2 * rank + 1) * dims) * wigner_9j(I, S, f, I, S, fp, rank, 0, rank);
        if (x != 0.0) coeffs.set_x(rank, f, fp, x);
      }
      for (int rank = 0; rank <= 1; ++rank) {
        const double y = sq((2 * rank + 1) * dims) * wigner_9j(I, S, f, I, S, fp, 0, rank, rank);
        if (y != 0.0) coeffs.set_y(rank, f, fp, y);
      }
    }
  }

  const double nuclear_weight = sq(2.0 * I.multiplicity());
  for (HalfInt f : manifolds) {
    for (int rank = 0; rank <= max_rank; ++rank) {
      for (int lambda : {rank - 1, rank + 1}) {
        if (lambda < 0) continue;
        const double ninej = wigner_9j(I, S, f, I, S, f, lambda, 1, rank);
        if (ninej == 0.0) continue;
        const double common = f.multiplicity() * nuclear_weight * sq(3.0 * (2 * lambda + 1)) * ninej;
        for (int proj = -rank; proj <= rank; ++proj) {
          if (std::abs(proj) <= 1) {
            const double z = common * clebsch_gordan(lambda, 0, 1, proj, rank, proj);
            if (z != 0.0) coeffs.set_z(lambda, f, rank, proj, z);
          }
          if (std::abs(proj) <= lambda) {
            const double zp = common * clebsch_gordan(lambda, proj, 1, 0, rank, proj);
            if (zp != 0.0) coeffs.set_zp(lambda, f, rank, proj, zp);
          }
        }
      }
    }
  }
  return coeffs;
}

}  // namespace spinopm
