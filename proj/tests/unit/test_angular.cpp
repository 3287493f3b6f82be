#include <cmath>

#include <doctest.h>

#include "racah_oracle.hpp"
#include "spinopm/angular.hpp"

using namespace spinopm;

TEST_SUITE("angular") {
  TEST_CASE("singlet and selection rules") {
    CHECK(clebsch_gordan(half(1), half(1), half(1), half(-1), 0, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 1, 1, 0, 2, 0) == 0.0);
    CHECK(clebsch_gordan(half(3), half(1), half(1), half(1), 1, 0) == 0.0);
    CHECK_THROWS_AS(clebsch_gordan(1, 1, 1, 1, 1, 2), std::invalid_argument);  // |M| > J
    CHECK_THROWS_AS(clebsch_gordan(1, half(1), 1, 0, 1, half(1)), std::invalid_argument);
  }

  TEST_CASE("C^{11}_{1,1;1,0} against the exact Racah sum") {
    const double exact = static_cast<double>(racah::clebsch_gordan(2, 2, 2, 0, 2, 2));
    CHECK(clebsch_gordan(1, 1, 1, 0, 1, 1) == doctest::Approx(exact).epsilon(1e-15));
    CHECK(exact == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  }

  TEST_CASE("CG orthogonality, all j1, j2 <= 6") {
    double worst = 0.0;
    for (int tj1 = 0; tj1 <= 12; ++tj1)
      for (int tj2 = 0; tj2 <= 12; ++tj2)
        for (int tM = -(tj1 + tj2); tM <= tj1 + tj2; tM += 2) {
          const int lo = std::max(std::abs(tj1 - tj2), std::abs(tM));
          for (int tJ = lo; tJ <= tj1 + tj2; tJ += 2)
            for (int tJp = lo; tJp <= tj1 + tj2; tJp += 2) {
              double sum = 0.0;
              for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2) {
                const int tm2 = tM - tm1;
                if (std::abs(tm2) > tj2) continue;
                sum += clebsch_gordan(half(tj1), half(tm1), half(tj2), half(tm2), half(tJ), half(tM)) *
                       clebsch_gordan(half(tj1), half(tm1), half(tj2), half(tm2), half(tJp), half(tM));
              }
              worst = std::max(worst, std::abs(sum - (tJ == tJp ? 1.0 : 0.0)));
            }
        }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("triangle violations give zero") {
    CHECK(wigner_6j(1, 1, 3, 1, 1, 1) == 0.0);
    CHECK(wigner_9j(1, 1, 3, 1, 1, 1, 1, 1, 1) == 0.0);
    CHECK(wigner_3j(1, 1, 3, 0, 0, 0) == 0.0);
  }

  TEST_CASE("9j from 6j sums equals the contraction of six 3j symbols") {
    // Σ over all projections of the six 3j symbols built from rows and columns.
    auto contracted = [](const std::array<int, 9>& j) {
      double total = 0.0;
      std::array<int, 9> m{};
      auto tj = [](int v) { return half(v); };
      for (m[0] = -j[0]; m[0] <= j[0]; m[0] += 2)
        for (m[1] = -j[1]; m[1] <= j[1]; m[1] += 2)
          for (m[3] = -j[3]; m[3] <= j[3]; m[3] += 2)
            for (m[4] = -j[4]; m[4] <= j[4]; m[4] += 2) {
              m[2] = -m[0] - m[1];
              m[5] = -m[3] - m[4];
              m[6] = -m[0] - m[3];
              m[7] = -m[1] - m[4];
              m[8] = -m[6] - m[7];
              if (std::abs(m[2]) > j[2] || std::abs(m[5]) > j[5] || std::abs(m[6]) > j[6] ||
                  std::abs(m[7]) > j[7] || std::abs(m[8]) > j[8])
                continue;
              total += wigner_3j(tj(j[0]), tj(j[1]), tj(j[2]), tj(m[0]), tj(m[1]), tj(m[2])) *
                       wigner_3j(tj(j[3]), tj(j[4]), tj(j[5]), tj(m[3]), tj(m[4]), tj(m[5])) *
                       wigner_3j(tj(j[6]), tj(j[7]), tj(j[8]), tj(m[6]), tj(m[7]), tj(m[8])) *
                       wigner_3j(tj(j[0]), tj(j[3]), tj(j[6]), tj(m[0]), tj(m[3]), tj(m[6])) *
                       wigner_3j(tj(j[1]), tj(j[4]), tj(j[7]), tj(m[1]), tj(m[4]), tj(m[7])) *
                       wigner_3j(tj(j[2]), tj(j[5]), tj(j[8]), tj(m[2]), tj(m[5]), tj(m[8]));
            }
      return total;
    };
    double worst = 0.0;
    int tested = 0;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b)
        for (int c = std::abs(a - b); c <= a + b && c <= 4; c += 2)
          for (int d = 0; d <= 3; ++d)
            for (int e = 0; e <= 3; ++e)
              for (int f = std::abs(d - e); f <= d + e && f <= 4; f += 2)
                for (int g = std::abs(a - d); g <= a + d && g <= 4; g += 2)
                  for (int h = std::abs(b - e); h <= b + e && h <= 4; h += 2)
                    for (int i = std::abs(c - f); i <= c + f && i <= 4; i += 2) {
                      if ((g + h + i) % 2 || i > g + h || i < std::abs(g - h)) continue;
                      const std::array<int, 9> j{a, b, c, d, e, f, g, h, i};
                      const double lib = wigner_9j(half(a), half(b), half(c), half(d), half(e), half(f), half(g),
                                                   half(h), half(i));
                      worst = std::max(worst, std::abs(lib - contracted(j)));
                      ++tested;
                    }
    CHECK(tested > 1000);
    CHECK(worst < 1e-12);
  }

  TEST_CASE("9j row swap multiplies by (-1)^(sum of all arguments)") {
    for (int tI : {3, 5, 7})
      for (int F : {tI + 1, tI - 1})
        for (int L = 0; L <= tI + 1; ++L)
          for (int lambda = 0; lambda <= tI; ++lambda) {
            const double v = wigner_9j(half(tI), half(1), half(F), half(tI), half(1), half(F), lambda, 1, L);
            // Identical rows: the phase (-1)^{4I+2+2F+L+Λ+1} forces L + Λ odd.
            if ((L + lambda) % 2 == 0) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
          }
    const double direct = wigner_9j(1, half(1), half(3), 2, half(3), half(1), 1, 1, 2);
    const double swapped = wigner_9j(2, half(3), half(1), 1, half(1), half(3), 1, 1, 2);
    const int sum_twice = 2 + 1 + 3 + 4 + 3 + 1 + 2 + 2 + 4;
    CHECK(swapped == doctest::Approx(((sum_twice / 2) % 2 ? -1.0 : 1.0) * direct).epsilon(1e-14));
  }

  TEST_CASE("9j with a zero entry reduces to Y_1") {
    for (int tI : {3, 5, 7}) {
      const HalfInt I = half(tI);
      const CouplingCoeffs c = ht_coefficients(I);
      for (HalfInt F : {upper_manifold(I), lower_manifold(I)})
        for (int L = 0; L <= 3; ++L) {
          const double v = wigner_9j(I, half(1), F, I, half(1), F, 0, 1, L);
          const double expected = L == 1 ? c.y(1, F) / (F.multiplicity() * std::sqrt(3.0)) : 0.0;
          CHECK(v == doctest::Approx(expected).epsilon(1e-14));
        }
    }
  }

  TEST_CASE("X_0(FF) = sqrt([F]/([I][S])) and sum rules") {
    for (int tI : {1, 3, 5, 7}) {
      const HalfInt I = half(tI);
      const CouplingCoeffs c = ht_coefficients(I);
      for (HalfInt F : {upper_manifold(I), lower_manifold(I)})
        CHECK(c.x(0, F) == doctest::Approx(std::sqrt(F.multiplicity() / (2.0 * I.multiplicity()))).epsilon(1e-14));
      for (int lambda = 0; lambda <= tI; ++lambda) {
        double sum = 0.0;
        for (HalfInt F : {upper_manifold(I), lower_manifold(I)})
          for (HalfInt Fp : {upper_manifold(I), lower_manifold(I)}) sum += std::pow(c.x(lambda, F, Fp), 2);
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("Z and Z' vanish unless the nuclear rank is L +- 1") {
    const CouplingCoeffs c = ht_coefficients(half(3));
    for (const auto& [key, v] : c.z_table()) CHECK(std::abs(std::get<0>(key) - std::get<2>(key)) == 1);
    for (const auto& [key, v] : c.zp_table()) CHECK(std::abs(std::get<0>(key) - std::get<2>(key)) == 1);
    CHECK(c.z(2, 2, 2, 1) == 0.0);
  }

  TEST_CASE("Racah W relates to 6j by the standard phase") {
    const double w = racah_w(1, 2, 1, 2, 1, 2);
    CHECK(w == doctest::Approx(wigner_6j(1, 2, 1, 2, 1, 2) * ((1 + 2 + 1 + 2) % 2 ? -1 : 1)).epsilon(1e-15));
  }
}
