#include "spinopm/drift.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinopm {
namespace {

void require_same_spin(const SpinTempState& state, const CouplingCoeffs& coeffs, const MultipoleLayout& layout) {
  if (state.nuclear_spin != coeffs.nuclear_spin() || state.nuclear_spin != layout.nuclear_spin())
    throw std::invalid_argument("state, coefficients and layout disagree on the nuclear spin");
}

double manifold_sign(const MultipoleLayout& layout, int slot) { return layout.is_upper(slot) ? 1.0 : -1.0; }

// Σ_F X_Λ(F) <T_Λ0(FF)>_ST: rank-Λ nuclear polarization of the steady state.
double nuclear_polarization(const SpinTempState& state, const CouplingCoeffs& coeffs, int rank) {
  const HalfInt I = state.nuclear_spin;
  double v = 0.0;
  for (HalfInt F : {upper_manifold(I), lower_manifold(I)}) v += coeffs.x(rank, F) * state.multipole(rank, F);
  return v;
}

// Σ_F Y_1(F) <T_10(FF)>_ST: steady-state electron orientation.
double electron_orientation(const SpinTempState& state, const CouplingCoeffs& coeffs) {
  const HalfInt I = state.nuclear_spin;
  double v = 0.0;
  for (HalfInt F : {upper_manifold(I), lower_manifold(I)}) v += coeffs.y(1, F) * state.multipole(1, F);
  return v;
}

// -δ + X_L(F̃) X_L(F') δ_LL'
Eigen::MatrixXd s_damping_form(const CouplingCoeffs& coeffs, const MultipoleLayout& layout) {
  const int n = layout.dim();
  Eigen::MatrixXd out = -Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const auto& row = layout.slots()[k];
      const auto& col = layout.slots()[l];
      if (row.rank == col.rank) out(k, l) += coeffs.x(row.rank, row.F) * coeffs.x(col.rank, col.F);
    }
  }
  return out;
}

}  // namespace

double balanced_pumping_rate(double polarization, double spin_destruction) {
  if (polarization < 0.0 || polarization >= 1.0) throw std::domain_error("polarization must lie in [0, 1)");
  return polarization * spin_destruction / (1.0 - polarization);
}

double gyromagnetic_ratio(HalfInt nuclear_spin, double g_s) {
  return g_s * constants::kBohrMagneton / (nuclear_spin.multiplicity() * constants::kHbar);
}

Eigen::MatrixXd drift_spin_exchange(const SpinTempState& state, const CouplingCoeffs& coeffs,
                                    const MultipoleLayout& layout, double spin_exchange_rate) {
  require_same_spin(state, coeffs, layout);
  const int n = layout.dim();
  const int M = layout.projection();
  const double orientation = electron_orientation(state, coeffs);
  Eigen::MatrixXd out = s_damping_form(coeffs, layout);

  for (int k = 0; k < n; ++k) {
    const auto& row = layout.slots()[k];
    const int L = row.rank;
    for (int l = 0; l < n; ++l) {
      const auto& col = layout.slots()[l];
      const int Lp = col.rank;
      double v = 0.0;
      if (Lp == 1) {
        // Transverse electron spin feeding the steady-state nuclear multipoles.
        if (L == 1) v += coeffs.y(1, row.F) * coeffs.y(1, col.F);
        for (int lambda : {L - 1, L + 1}) {
          if (lambda < 1) continue;
          v += coeffs.z(lambda, row.F, L, M) * nuclear_polarization(state, coeffs, lambda) * coeffs.y(1, col.F);
        }
      }
      // Steady-state electron orientation acting on the nuclear multipoles.
      if (std::abs(Lp - L) == 1) v += coeffs.zp(Lp, row.F, L, M) * coeffs.x(Lp, col.F) * orientation;
      out(k, l) += v;
    }
  }
  return spin_exchange_rate * out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> drift_relaxation_pumping(const SpinTempState& state,
                                                                     const CouplingCoeffs& coeffs,
                                                                     const MultipoleLayout& layout,
                                                                     double spin_destruction_rate,
                                                                     double optical_pumping_rate,
                                                                     double pump_spin) {
  require_same_spin(state, coeffs, layout);
  const Eigen::MatrixXd base = s_damping_form(coeffs, layout);
  const int n = layout.dim();
  const int M = layout.projection();
  const double weight = pump_spin / std::sqrt(2.0 * state.nuclear_spin.multiplicity());

  Eigen::MatrixXd pumping = base;
  for (int k = 0; k < n; ++k) {
    const auto& row = layout.slots()[k];
    for (int l = 0; l < n; ++l) {
      const auto& col = layout.slots()[l];
      if (std::abs(col.rank - row.rank) != 1) continue;
      pumping(k, l) += weight * coeffs.zp(col.rank, row.F, row.rank, M) * coeffs.x(col.rank, col.F);
    }
  }
  return {spin_destruction_rate * base, optical_pumping_rate * pumping};
}

Eigen::MatrixXcd drift_magnetic(const MultipoleLayout& layout, double field_z, double g_s) {
  const double omega0 = gyromagnetic_ratio(layout.nuclear_spin(), g_s) * field_z;
  const int n = layout.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    out(k, k) = std::complex<double>(0.0, layout.projection() * omega0 * manifold_sign(layout, k));
  return out;
}

Eigen::MatrixXcd drift_matrix(const SpinTempState& state, const CouplingCoeffs& coeffs,
                              const MultipoleLayout& layout, const RateSet& rates, double field_z) {
  const auto [damping, pumping] = drift_relaxation_pumping(state, coeffs, layout, rates.spin_destruction,
                                                           rates.optical_pumping, rates.pump_spin);
  const Eigen::MatrixXd relax = drift_spin_exchange(state, coeffs, layout, rates.spin_exchange) + damping + pumping;
  return drift_magnetic(layout, field_z) + relax.cast<std::complex<double>>();
}

Eigen::VectorXcd drive_vector(const SpinTempState& state, const MultipoleLayout& layout) {
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(layout.dim());
  for (int k = 0; k < layout.dim(); ++k) {
    const auto& slot = layout.slots()[k];
    const double L = slot.rank;
    b(k) = manifold_sign(layout, k) * std::sqrt(L * (L + 1) / 2.0) * state.multipole(slot.rank, slot.F);
  }
  return b;
}

std::complex<double> DriftSystem::slowest_mode() const {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < eigenvalues.size(); ++k)
    if (std::abs(eigenvalues(k).real()) < std::abs(eigenvalues(best).real())) best = k;
  return eigenvalues(best);
}

double DriftSystem::resonance_hz() const { return std::abs(slowest_mode().imag()) / (2 * constants::kPi); }

double DriftSystem::linewidth_hz() const { return std::abs(slowest_mode().real()) / (2 * constants::kPi); }

DriftSystem assemble_system(const SpinTempState& state, const CouplingCoeffs& coeffs,
                            const MultipoleLayout& layout, const RateSet& rates, double field_z, double g_s) {
  if (layout.projection() != 1) throw std::invalid_argument("assemble_system expects an M = +1 layout");
  DriftSystem sys{layout, {}, {}, {}, {}, 0.0, 0.0, {}, false};
  sys.gamma_f = gyromagnetic_ratio(state.nuclear_spin, g_s);
  sys.omega0 = sys.gamma_f * field_z;

  const auto [damping, pumping] = drift_relaxation_pumping(state, coeffs, layout, rates.spin_destruction,
                                                           rates.optical_pumping, rates.pump_spin);
  const Eigen::MatrixXd relax = drift_spin_exchange(state, coeffs, layout, rates.spin_exchange) + damping + pumping;
  sys.a_plus = drift_magnetic(layout, field_z, g_s) + relax.cast<std::complex<double>>();
  sys.a_minus = sys.a_plus.conjugate();

  const int n = layout.dim();
  sys.combined = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  sys.combined.topLeftCorner(n, n) = sys.a_plus;
  sys.combined.bottomRightCorner(n, n) = sys.a_minus;
  sys.drive = drive_vector(state, layout);

  sys.eigenvalues = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(sys.a_plus, false).eigenvalues();
  // Modes damped slower than roundoff on the largest rate count as undamped.
  const double floor = 1e-12 * std::max(1.0, sys.eigenvalues.cwiseAbs().maxCoeff());
  sys.stable = (sys.eigenvalues.real().array() < -floor).all();
  return sys;
}

}  // namespace spinopm
