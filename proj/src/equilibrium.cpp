#include "spinopm/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinopm/angular.hpp"

namespace spinopm {
namespace {

// Polynomials in p with integer coefficients, lowest order first. The
// variance formulas are ratios of such polynomials; dividing out the common
// power of p removes the p -> 0 singularity exactly.
using Poly = std::vector<double>;

Poly operator*(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly operator+(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

Poly operator-(const Poly& a, Poly b) {
  for (double& v : b) v = -v;
  return a + b;
}

// (p + shift)^n
Poly binomial_power(double shift, int n) {
  Poly out{1.0};
  for (int k = 0; k < n; ++k) out = out * Poly{shift, 1.0};
  return out;
}

std::size_t lowest_order(const Poly& a) {
  std::size_t k = 0;
  while (k < a.size() && a[k] == 0.0) ++k;
  return k;
}

double horner(const Poly& a, std::size_t from, double p) {
  double v = 0.0;
  for (std::size_t k = a.size(); k-- > from;) v = v * p + a[k];
  return v;
}

double reduced_ratio(const Poly& num, const Poly& den, double p) {
  const std::size_t shift = std::min(lowest_order(num), lowest_order(den));
  return horner(num, shift, p) / horner(den, shift, p);
}

}  // namespace

double partition_function(HalfInt K, double beta) {
  if (beta == 0.0) return K.multiplicity();
  return std::sinh(beta * (K.value() + 0.5)) / std::sinh(beta / 2);
}

double mean_spin_projection(HalfInt K, double beta) {
  if (std::abs(beta) < 1e-3) {
    // Direct Boltzmann average; the closed form cancels catastrophically here.
    double num = 0.0, den = 0.0;
    for (int k = 0; k < K.multiplicity(); ++k) {
      const double m = K.value() - k;
      num += m * std::exp(beta * m);
      den += std::exp(beta * m);
    }
    return num / den;
  }
  const double t = std::tanh(beta / 2);
  const double coth_half = 1.0 / t;
  const double coth_full = 1.0 / std::tanh(beta * (K.value() + 0.5));
  return 0.5 * K.multiplicity() * coth_half * coth_full * t - 0.5 * coth_half * coth_half * t;
}

SpinTempState spin_temperature_state(double beta, HalfInt nuclear_spin) {
  const HilbertBasis basis(nuclear_spin);
  SpinTempState st;
  st.beta = beta;
  st.polarization = 2.0 * std::abs(mean_spin_projection(kElectronSpin, beta));
  st.nuclear_spin = nuclear_spin;

  const double z = partition_function(kElectronSpin, beta) * partition_function(nuclear_spin, beta);
  std::vector<double> population(basis.dim());
  st.rho0 = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.dim(); ++k) {
    const auto& [F, m] = basis.coupled()[k];
    // Weight of |F m> in e^{βS_z}e^{βI_z}: sum over its uncoupled components.
    double w = 0.0;
    for (int u = 0; u < basis.dim(); ++u) {
      const auto& [mi, ms] = basis.uncoupled()[u];
      if (mi + ms != m) continue;
      const double c = clebsch_gordan(nuclear_spin, mi, kElectronSpin, ms, F, m);
      w += c * c;
    }
    population[k] = w * std::exp(beta * m.value()) / z;
    st.rho0(k, k) = population[k];
  }

  for (HalfInt F : {upper_manifold(nuclear_spin), lower_manifold(nuclear_spin)}) {
    for (int rank = 0; rank <= F.twice(); ++rank) {
      double v = 0.0;
      for (int k = 0; k < basis.dim(); ++k) {
        const auto& [Fk, m] = basis.coupled()[k];
        if (Fk != F) continue;
        v += phase(m - F) * clebsch_gordan(F, m, F, -m, rank, 0) * population[k];
      }
      st.st_multipoles[{rank, F.twice()}] = v;
    }
  }
  return st;
}

SpinTempState solve_beta(double polarization, HalfInt nuclear_spin) {
  if (!(polarization >= 0.0)) throw std::invalid_argument("polarization must be >= 0");
  if (polarization >= 1.0) throw std::domain_error("polarization must be < 1 (spin temperature diverges)");

  auto residual = [&](double beta) { return 2.0 * mean_spin_projection(kElectronSpin, beta) - polarization; };
  double lo = 0.0, hi = 1.0;
  while (residual(hi) < 0.0) hi *= 2.0;
  while (hi - lo > 1e-14 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  double beta = 0.5 * (lo + hi);
  // d(2<S_z>)/dβ = (1 - tanh²(β/2)) / 2
  const double t = std::tanh(beta / 2);
  if (const double slope = 0.5 * (1.0 - t * t); slope > 0.0) beta -= residual(beta) / slope;

  SpinTempState st = spin_temperature_state(beta, nuclear_spin);
  st.polarization = polarization;
  return st;
}

TransverseVariances transverse_variances(double polarization, HalfInt nuclear_spin) {
  if (polarization < 0.0 || polarization > 1.0) throw std::invalid_argument("polarization outside [0, 1]");
  // The closed form disagrees with direct traces for integer I (checked at I = 1).
  if (nuclear_spin.is_integer())
    throw std::domain_error("closed-form transverse variances require half-integer nuclear spin");
  const int two_i = nuclear_spin.twice();
  const double two_i_plus_2 = two_i + 2;
  const Poly p_minus_1_a = binomial_power(-1.0, two_i + 2);
  const Poly p_plus_1_a = binomial_power(1.0, two_i + 2);
  const Poly upper_num =
      Poly{1.0, two_i_plus_2} * p_minus_1_a + p_plus_1_a * Poly{1.0, -two_i_plus_2};
  const Poly den = Poly{0.0, 0.0, 8.0} * (binomial_power(-1.0, two_i + 1) - binomial_power(1.0, two_i + 1));
  const Poly lower_num = Poly{-1.0, 0.0, 1.0} * (binomial_power(1.0, two_i) * Poly{-1.0, double(two_i)} -
                                                 binomial_power(-1.0, two_i) * Poly{1.0, double(two_i)});
  return {reduced_ratio(upper_num, den, polarization), reduced_ratio(lower_num, den, polarization)};
}

CovarianceBlock equal_time_covariance(const SpinTempState& state, const MultipoleLayout& layout) {
  const HilbertBasis basis(state.nuclear_spin);
  const int n = layout.dim();
  CovarianceBlock cov;
  cov.sigma = Eigen::MatrixXd::Zero(n, n);

  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const MultipoleSlot& sk = layout.slots()[k];
      const MultipoleSlot& sl = layout.slots()[l];
      if (sk.F != sl.F || sk.phantom || sl.phantom) continue;
      const HalfInt F = sk.F;
      const int L = sk.rank, Lp = sl.rank;
      double forward = 0.0, backward = 0.0;
      for (int idx = 0; idx < basis.dim(); ++idx) {
        const auto& [Fi, m] = basis.coupled()[idx];
        if (Fi != F) continue;
        const double w = std::real(state.rho0(idx, idx));
        // <T_{L,1} T_{L',-1}> picks |m><m-1|m-1><m|
        if (valid_projection(F, m - HalfInt(1)))
          forward -= clebsch_gordan(F, m, F, HalfInt(1) - m, L, 1) *
                     clebsch_gordan(F, m - HalfInt(1), F, -m, Lp, -1) * w;
        // <T_{L',-1} T_{L,1}> picks |m><m+1|m+1><m|
        if (valid_projection(F, m + HalfInt(1)))
          backward -= clebsch_gordan(F, m, F, -HalfInt(1) - m, Lp, -1) *
                      clebsch_gordan(F, m + HalfInt(1), F, -m, L, 1) * w;
      }
      cov.sigma(k, l) = 0.5 * (forward + backward);
    }
  }
  cov.r0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cov.r0.topRightCorner(n, n) = cov.sigma;
  cov.r0.bottomLeftCorner(n, n) = cov.sigma.transpose();
  return cov;
}

}  // namespace spinopm
