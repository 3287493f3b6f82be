#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinopm/drift.hpp"
#include "spinopm/equilibrium.hpp"
#include "spinopm/operators.hpp"

namespace spinopm {

// Density matrix with validated invariants (Hermitian, unit trace, PSD).
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho, double tolerance = 1e-10);
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  Eigen::MatrixXcd rho_;
};

struct OracleParams {
  HalfInt nuclear_spin = half(3);
  RateSet rates;
  double hyperfine_omega = 0.0;  // A_hfs / ħ, rad/s
  double g_s = constants::kElectronG;
  // Drop hyperfine coherences (project dρ/dt onto the F blocks). The
  // hyperfine term then commutes with ρ and is skipped.
  bool secular = true;
};

// Ground-state master equation in the uncoupled |m_I m_S> basis:
// hyperfine and Zeeman commutators, spin exchange toward (1/2 + 2<S>·S)⊗Tr_S ρ,
// S-damping toward Tr_S ρ ⊗ 1/2 and pumping toward Tr_S ρ ⊗ (1/2 + s·S).
class MasterEquation {
 public:
  explicit MasterEquation(OracleParams params);

  const OracleParams& params() const { return params_; }
  const HilbertBasis& basis() const { return basis_; }

  // dρ/dt for a field vector in tesla.
  Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho, const Eigen::Vector3d& field) const;

  Eigen::MatrixXcd hyperfine_term(const Eigen::MatrixXcd& rho) const;
  Eigen::MatrixXcd zeeman_term(const Eigen::MatrixXcd& rho, const Eigen::Vector3d& field) const;
  Eigen::MatrixXcd collision_terms(const Eigen::MatrixXcd& rho) const;

  Eigen::MatrixXcd partial_trace_electron(const Eigen::MatrixXcd& rho) const;
  // Keep only the F = F' blocks.
  Eigen::MatrixXcd secular_projection(const Eigen::MatrixXcd& op) const;

  const std::array<Eigen::MatrixXcd, 3>& electron_spin() const { return electron_; }

 private:
  OracleParams params_;
  HilbertBasis basis_;
  std::array<Eigen::Matrix2cd, 3> pauli_half_;     // single electron S_k
  std::array<Eigen::MatrixXcd, 3> electron_;       // S_k on the full space
  Eigen::MatrixXcd nuclear_dot_electron_;          // I·S
  std::array<Eigen::MatrixXcd, 2> projectors_;     // P_a, P_b, uncoupled basis
};

// <T_k> for every slot of a layout, ρ in the uncoupled basis.
Eigen::VectorXcd multipole_vector(const HilbertBasis& basis, const Eigen::MatrixXcd& rho_uncoupled,
                                  const MultipoleLayout& layout);

// ρ_ST in the uncoupled basis.
Eigen::MatrixXcd uncoupled_state(const HilbertBasis& basis, const SpinTempState& state);

// Drift matrix of the layout's M from the Jacobian of the master equation at
// ρ_ss: A_kl = Tr[T_k J(T_l†)]. The right-hand side is quadratic in ρ, so a
// central difference with unit step is exact.
Eigen::MatrixXcd linearized_drift(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss,
                                  const MultipoleLayout& layout, double field_z);

// d<T_{L,+1}>/dt produced by a unit transverse field along x (axis 0) or
// y (axis 1) acting on ρ_ss, divided by γ_F.
Eigen::VectorXcd transverse_drive(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss,
                                  const MultipoleLayout& layout, int axis);

struct BruteForceStatics {
  std::map<std::pair<int, int>, double> multipoles;  // (L, 2F) -> Tr[T_L0(FF) ρ]
  TransverseVariances variances;
  Eigen::MatrixXcd sigma;  // <½{T_{k,+1}, T_{l,-1}}> over the layout slots
};

// Direct traces; ρ in the coupled basis.
BruteForceStatics brute_force_statics(const DensityMatrix& rho, const MultipoleLayout& layout);

// Symmetrized Cartesian F_x spectra (aa, bb, ab, ba) at FFT bins, from
// R(τ) = e^{𝒜τ} R(0) sampled every dt and Fourier transformed.
struct TimeDomainSpectrum {
  std::vector<double> freqs;
  std::vector<std::array<std::complex<double>, 4>> fx;  // aa, bb, ab, ba
};

TimeDomainSpectrum time_domain_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                                        const CartesianProjection& proj, double dt, int samples,
                                        double max_freq);

// Adaptive integration settings for the nonlinear master equation.
struct IntegratorSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 1e-8;
};

// Integrates dρ/dt from t0 to t1 under a time-dependent field, symmetrizing
// ρ after each output interval. Throws std::runtime_error on failure.
using FieldFunction = std::function<Eigen::Vector3d(double)>;
Eigen::MatrixXcd evolve(const MasterEquation& eq, Eigen::MatrixXcd rho, const FieldFunction& field, double t0,
                        double t1, const IntegratorSettings& settings = {}, int* steps_taken = nullptr);

struct DrivenSettings {
  double drive_amplitude = 0.0;  // B0_perp, tesla
  double b_angle = 0.0;
  double phi = 0.0;
  double frequency_hz = 0.0;
  double settle_time = 0.0;      // transient to discard, s
  int periods = 20;
  int samples_per_period = 64;
  IntegratorSettings integrator;
};

// Steady-state F_x phasors Z_F (F_x(t) = Re[Z_F e^{iωt}]) per manifold.
struct DrivenResult {
  std::complex<double> upper;
  std::complex<double> lower;
  int steps = 0;
};

// Drive ρ_ss with B = B_z ẑ + B0 [cos b cos ωt x̂ + sin b cos(ωt + φ) ŷ] and
// demodulate F_x(a), F_x(b) over an integer number of periods.
DrivenResult driven_response(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss, double field_z,
                             const DrivenSettings& settings);

// ‖dρ/dt‖_F at ρ with a static longitudinal field.
double stationarity_residual(const MasterEquation& eq, const Eigen::MatrixXcd& rho, double field_z);

}  // namespace spinopm
