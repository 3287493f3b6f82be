#pragma once

#include <utility>

#include <Eigen/Dense>

#include "spinopm/angular.hpp"
#include "spinopm/constants.hpp"
#include "spinopm/equilibrium.hpp"
#include "spinopm/operators.hpp"

namespace spinopm {

// Rates in s^-1; pump_spin is the mean photon spin s0 along z.
struct RateSet {
  double spin_exchange = 0.0;
  double spin_destruction = 0.0;
  double optical_pumping = 0.0;
  double pump_spin = 1.0;
};

// Optical pumping rate that keeps the spin-temperature state stationary at
// polarization p for full circular pumping: R_op = p R_sd / (1 - p).
double balanced_pumping_rate(double polarization, double spin_destruction);

// γ_F = g_s μ_B / ((2I+1) ħ), rad s^-1 T^-1.
double gyromagnetic_ratio(HalfInt nuclear_spin, double g_s = constants::kElectronG);

// Each builder returns the matrix acting on <T_M> for the layout's M.
Eigen::MatrixXd drift_spin_exchange(const SpinTempState& state, const CouplingCoeffs& coeffs,
                                    const MultipoleLayout& layout, double spin_exchange_rate);

// (S-damping matrix, optical-pumping matrix)
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> drift_relaxation_pumping(const SpinTempState& state,
                                                                     const CouplingCoeffs& coeffs,
                                                                     const MultipoleLayout& layout,
                                                                     double spin_destruction_rate,
                                                                     double optical_pumping_rate,
                                                                     double pump_spin);

// diag(i M ω0 (+1 for a, -1 for b)), B_z in tesla.
Eigen::MatrixXcd drift_magnetic(const MultipoleLayout& layout, double field_z,
                                double g_s = constants::kElectronG);

// Full drift matrix for the layout's M.
Eigen::MatrixXcd drift_matrix(const SpinTempState& state, const CouplingCoeffs& coeffs,
                              const MultipoleLayout& layout, const RateSet& rates, double field_z);

// Transverse drive vector: slot (L, F) = ±√(L(L+1)/2) <T_L0(FF)>_ST.
Eigen::VectorXcd drive_vector(const SpinTempState& state, const MultipoleLayout& layout);

struct DriftSystem {
  MultipoleLayout layout;              // M = +1
  Eigen::MatrixXcd a_plus;             // A_1
  Eigen::MatrixXcd a_minus;            // A_{-1} = conj(A_1)
  Eigen::MatrixXcd combined;           // diag(A_1, A_1*)
  Eigen::VectorXcd drive;
  double omega0 = 0.0;                 // rad/s
  double gamma_f = 0.0;                // rad s^-1 T^-1
  Eigen::VectorXcd eigenvalues;        // of A_1
  bool stable = false;

  // Eigenvalue of A_1 with the smallest |Re|.
  std::complex<double> slowest_mode() const;
  double resonance_hz() const;
  double linewidth_hz() const;  // |Re λ_slow| / 2π
};

DriftSystem assemble_system(const SpinTempState& state, const CouplingCoeffs& coeffs,
                            const MultipoleLayout& layout, const RateSet& rates, double field_z,
                            double g_s = constants::kElectronG);

}  // namespace spinopm
