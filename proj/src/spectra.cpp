#include "spinopm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spinopm {
namespace {

using cd = std::complex<double>;

void require_stable(const DriftSystem& system) {
  if (!system.stable) throw std::domain_error("drift system is unstable; spectrum undefined");
}

}  // namespace

Eigen::MatrixXcd spherical_spectrum(const DriftSystem& system, const CovarianceBlock& cov, double freq_hz) {
  require_stable(system);
  const Eigen::MatrixXcd& a = system.combined;
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXcd r0 = cov.r0.cast<cd>();
  const cd iw(0.0, 2 * constants::kPi * freq_hz);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> left(-a + iw * id);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> right((-a.transpose() - iw * id).transpose());
  const Eigen::MatrixXcd diffusion = a * r0 + r0 * a.transpose();
  // X (−𝒜ᵀ − iω)⁻¹ = [(−𝒜ᵀ − iω)⁻ᵀ Xᵀ]ᵀ
  const Eigen::MatrixXcd inner = left.solve(diffusion);
  return -right.solve(inner.transpose()).transpose();
}

SpinSpectrumPoint qrt_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                               const CartesianProjection& proj, double freq_hz) {
  const Eigen::MatrixXcd mx = proj.full.topRows(2);
  const Eigen::Matrix2cd s = mx * spherical_spectrum(system, cov, freq_hz) * mx.transpose();
  return {freq_hz, s(0, 0).real(), s(1, 1).real(), s(0, 1), s(1, 0)};
}

std::vector<SpinSpectrumPoint> qrt_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                                            const CartesianProjection& proj, const std::vector<double>& freqs) {
  std::vector<SpinSpectrumPoint> out;
  out.reserve(freqs.size());
  for (double f : freqs) out.push_back(qrt_spectrum(system, cov, proj, f));
  return out;
}

std::vector<double> frequency_grid(const DriftSystem& system, const FrequencyGrid& grid) {
  if (!(grid.max_hz > 0.0) || grid.points < 2) throw std::invalid_argument("frequency grid needs max_hz > 0 and >= 2 points");
  std::vector<double> freqs;
  for (int k = 0; k < grid.points; ++k) freqs.push_back(grid.max_hz * k / (grid.points - 1));
  if (grid.refine_points >= 2) {
    const double centre = system.resonance_hz();
    const double half_width = grid.refine_widths * system.linewidth_hz();
    const double lo = std::max(0.0, centre - half_width);
    const double hi = std::min(grid.max_hz, centre + half_width);
    for (int k = 0; k < grid.refine_points && hi > lo; ++k)
      freqs.push_back(lo + (hi - lo) * k / (grid.refine_points - 1));
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }),
                freqs.end());
  }
  return freqs;
}

double spectral_integral(const DriftSystem& system, const CovarianceBlock& cov, const CartesianProjection& proj,
                         CartesianComponent component, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  auto value = [&](double f) {
    const SpinSpectrumPoint s = qrt_spectrum(system, cov, proj, f);
    switch (component) {
      case CartesianComponent::aa: return s.aa;
      case CartesianComponent::bb: return s.bb;
      case CartesianComponent::ab_plus_ba: return s.cross();
    }
    return 0.0;
  };
  // Split at every mode's resonance so each Lorentzian is resolved.
  std::vector<double> breaks{0.0};
  double widest = 0.0;
  for (const cd& lambda : system.eigenvalues) {
    const double f = std::abs(lambda.imag()) / (2 * constants::kPi);
    const double w = std::abs(lambda.real()) / (2 * constants::kPi);
    widest = std::max(widest, f + w);
    for (double x : {f - w, f, f + w})
      if (x > 0.0) breaks.push_back(x);
  }
  breaks.push_back(20.0 * widest);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    if (breaks[k + 1] > breaks[k])
      total += gauss_kronrod<double, 61>::integrate(value, breaks[k], breaks[k + 1], 15, rel_tol);
  total += gauss_kronrod<double, 61>::integrate(value, breaks.back(), std::numeric_limits<double>::infinity(), 15,
                                                rel_tol);
  // Auto spectra and Re(S_ab + S_ba) are even in ν.
  return 2.0 * total;
}

MeasuredPoint measured_psd(const SpinSpectrumPoint& spin, const ProbeCouplings& c, double photon_flux,
                           double atom_number) {
  if (!(atom_number > 0.0)) throw std::invalid_argument("atom number must be positive");
  MeasuredPoint m;
  m.freq_hz = spin.freq_hz;
  m.spin_effective = c.d_a * c.d_a * spin.aa + c.d_b * c.d_b * spin.bb - c.d_a * c.d_b * spin.cross();
  m.psn_floor = photon_flux / 2.0;
  m.measured = m.psn_floor + photon_flux * photon_flux / 4.0 * atom_number * c.coupling * c.coupling * m.spin_effective;
  return m;
}

SpectrumTrace spectrum_trace(const DriftSystem& system, const CovarianceBlock& cov, const CartesianProjection& proj,
                             const ProbeCouplings& couplings, double photon_flux, double atom_number,
                             const std::vector<double>& freqs) {
  SpectrumTrace trace;
  trace.spin = qrt_spectrum(system, cov, proj, freqs);
  for (const auto& s : trace.spin) trace.measured.push_back(measured_psd(s, couplings, photon_flux, atom_number));
  return trace;
}

NoiseDip find_noise_dip(const std::vector<double>& freqs, const std::vector<double>& psd, double min_depth) {
  if (freqs.size() != psd.size()) throw std::invalid_argument("find_noise_dip: size mismatch");
  const std::size_t n = psd.size();
  NoiseDip best;
  if (n < 3) return best;
  std::vector<double> left_max(n), right_max(n);
  left_max[0] = psd[0];
  for (std::size_t k = 1; k < n; ++k) left_max[k] = std::max(left_max[k - 1], psd[k]);
  right_max[n - 1] = psd[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) right_max[k] = std::max(right_max[k + 1], psd[k]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!(psd[k] < psd[k - 1] && psd[k] <= psd[k + 1])) continue;
    const double flank = std::min(left_max[k], right_max[k]);
    if (!(flank > 0.0)) continue;
    const double depth = (flank - psd[k]) / flank;
    if (depth > min_depth && depth > best.depth) best = {true, freqs[k], depth};
  }
  return best;
}

}  // namespace spinopm
