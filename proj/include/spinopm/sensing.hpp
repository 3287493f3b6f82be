#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spinopm/drift.hpp"
#include "spinopm/operators.hpp"
#include "spinopm/optics.hpp"

namespace spinopm {

struct DriveSpec {
  double amplitude = 0.0;  // B0_perp, tesla
  double b_angle = 0.0;
  double phi = 0.0;
};

// 𝔐̃(𝒜₁ − i2πν)⁻¹ℬ(i cos b − sin b e^{iφ}) and 𝔐̃(𝒜₁* − i2πν)⁻¹ℬ(−i cos b − sin b e^{iφ}).
struct ResponseMatrices {
  Eigen::Vector2cd script_a;
  Eigen::Vector2cd script_b;
};
ResponseMatrices response_matrices(const DriftSystem& system, const CartesianProjection& proj, double b_angle,
                                   double phi, double freq_hz);

// Steady-state F_x phasors per manifold per unit γ_F B0:
// F_x(α)(t) = Re[γ_F B0 Z_α e^{i2πνt}].
Eigen::Vector2cd spin_response_phasors(const DriftSystem& system, const CartesianProjection& proj, double b_angle,
                                       double phi, double freq_hz);

struct ResponsePoint {
  double freq_hz = 0.0;
  double ac = 0.0;   // |D_a Z_a − D_b Z_b|
  double chi = 0.0;  // arg(D_a Z_a − D_b Z_b), rad
};

// The weighted response D_a F_ax − D_b F_bx equals γ_F B0 A_c cos(2πνt + χ).
// This is 1/(2√2) of the conventional amplitude prefactor (see README).
ResponsePoint coherent_response(const DriftSystem& system, const CartesianProjection& proj, const DriveSpec& drive,
                                const ProbeCouplings& couplings, double freq_hz);
std::vector<ResponsePoint> coherent_response(const DriftSystem& system, const CartesianProjection& proj,
                                             const DriveSpec& drive, const ProbeCouplings& couplings,
                                             const std::vector<double>& freqs);

// The conventional amplitude factor, 2|(D_a, −D_b)(𝒜script + ℬscript)|.
double published_ac(const DriftSystem& system, const CartesianProjection& proj, const DriveSpec& drive,
                    const ProbeCouplings& couplings, double freq_hz);

// Lock-in response to e^{iω't} for reference ω, record length T and
// single-pole time constant τ: ½[h(ω' + ω) + h(ω' − ω)],
// h(x) = (e^{ixT} − 1)/(ixT(1 + ixτ)).
std::complex<double> lockin_transfer(double omega, double omega_p, double record_time, double time_constant);

// 𝔉(ω, ω') = |lockin_transfer|², with Var[𝔎] = ∫dω' 𝔉 S(ω').
double filter_function(double omega, double omega_p, double record_time, double time_constant);
// The expanded closed form as printed; singular at ω' = ±ω.
double filter_function_published(double omega, double omega_p, double record_time, double time_constant);
// ¼ sinc²((ω − ω')T/2)
double filter_function_sinc2(double omega, double omega_p, double record_time);

// ∫_0^∞ 𝔉(ω, ω') dω' by adaptive quadrature.
double filter_integral(double omega, double record_time, double time_constant);

struct LockinSettings {
  double record_time = 1.0;    // T, s
  double time_constant = 0.0;  // T_bw, s
};

struct LockinStatistics {
  double mean = 0.0;
  double variance_exact = 0.0;     // ∫ S 𝔉 over the measured PSD
  double variance_shortcut = 0.0;  // S'(ν)/(4T)
};

// two_sided_psd(ν) is the polarimeter PSD in Hz⁻¹ convention.
LockinStatistics lockin_statistics(const std::function<double(double)>& two_sided_psd, double response_amplitude,
                                   double freq_hz, const LockinSettings& settings);

struct NoiseBudget {
  double photon_flux = 0.0;
  double coupling = 0.0;         // G
  double atom_number = 0.0;
  double spin_one_sided = 0.0;   // S'(ν), single atom
};

// SNR and sensitivity in the literature form; the spin-noise term carries an
// extra factor 2 relative to snr_lockin.
double snr_published(double gamma_f, double drive_amplitude, double ac, const NoiseBudget& noise, double record_time);
double sensitivity_published(double gamma_f, double ac, const NoiseBudget& noise);
// ⟨𝔎⟩/√Var[𝔎] composed from the lock-in mean and the flat-spectrum variance.
double snr_lockin(double gamma_f, double drive_amplitude, double ac, const NoiseBudget& noise, double record_time);
// B_rms per √BW that gives SNR = 1 at T = 1/(2 BW), from snr_lockin.
double sensitivity_lockin(double gamma_f, double ac, const NoiseBudget& noise);

// Stretched-state projection-noise limit ħ/(g_F μ_B √(2F)) √(Γ/(N T)).
double sql_limit(double relaxation_rate, double atom_number, double record_time, double total_spin, double g_f);

}  // namespace spinopm
