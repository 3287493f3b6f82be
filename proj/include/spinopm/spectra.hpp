#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinopm/drift.hpp"
#include "spinopm/equilibrium.hpp"
#include "spinopm/operators.hpp"
#include "spinopm/optics.hpp"

namespace spinopm {

// Two-sided single-atom F_x spectra in spin²/Hz, S(ν) = ∫R(τ)e^{-i2πντ}dτ.
struct SpinSpectrumPoint {
  double freq_hz = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  std::complex<double> ab;
  std::complex<double> ba;

  // Re[S_ab + S_ba], the combination entering the polarimeter.
  double cross() const { return (ab + ba).real(); }
};

// Spherical spectrum of the stacked [T_{+1}; T_{-1}] vector:
// -(−𝒜 + i2πν)⁻¹(𝒜R0 + R0𝒜ᵀ)(−𝒜ᵀ − i2πν)⁻¹.
Eigen::MatrixXcd spherical_spectrum(const DriftSystem& system, const CovarianceBlock& cov, double freq_hz);

// ℳ S̃ ℳᵀ restricted to the F_x rows.
SpinSpectrumPoint qrt_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                               const CartesianProjection& proj, double freq_hz);
std::vector<SpinSpectrumPoint> qrt_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                                            const CartesianProjection& proj, const std::vector<double>& freqs);

// Uniform grid on [0, max_hz] with `points` samples, merged with a denser
// uniform patch of `refine_points` samples over resonance ± `refine_widths`
// linewidths of the slowest mode.
struct FrequencyGrid {
  double max_hz = 0.0;
  int points = 0;
  int refine_points = 0;
  double refine_widths = 5.0;
};
std::vector<double> frequency_grid(const DriftSystem& system, const FrequencyGrid& grid);

enum class CartesianComponent { aa, bb, ab_plus_ba };

// ∫_{-∞}^{∞} S(ν) dν for one component by adaptive quadrature; equals the
// equal-time (co)variance when the normalization is right.
double spectral_integral(const DriftSystem& system, const CovarianceBlock& cov, const CartesianProjection& proj,
                         CartesianComponent component, double rel_tol = 1e-10);

// Polarimeter output PSD. Two-sided values; one_sided() doubles them.
struct MeasuredPoint {
  double freq_hz = 0.0;
  double spin_effective = 0.0;  // D_a²S_aa + D_b²S_bb − D_aD_b(S_ab + S_ba), single atom
  double measured = 0.0;        // Φ/2 + (Φ²/4) N G² S
  double psn_floor = 0.0;       // Φ/2
};

MeasuredPoint measured_psd(const SpinSpectrumPoint& spin, const ProbeCouplings& couplings, double photon_flux,
                           double atom_number);

struct SpectrumTrace {
  std::vector<SpinSpectrumPoint> spin;
  std::vector<MeasuredPoint> measured;
};

SpectrumTrace spectrum_trace(const DriftSystem& system, const CovarianceBlock& cov, const CartesianProjection& proj,
                             const ProbeCouplings& couplings, double photon_flux, double atom_number,
                             const std::vector<double>& freqs);

// Most prominent interior local minimum of a sampled PSD. Depth is the
// topographic prominence: (lower flanking maximum − minimum) / lower flank,
// flanks taken over everything to the left and right of the minimum.
struct NoiseDip {
  bool present = false;
  double freq_hz = 0.0;
  double depth = 0.0;
};
NoiseDip find_noise_dip(const std::vector<double>& freqs, const std::vector<double>& psd,
                        double min_depth = 1e-6);

}  // namespace spinopm
