#include "spinopm/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spinopm/constants.hpp"

namespace spinopm {
namespace {

using cd = std::complex<double>;
using boost::math::quadrature::gauss_kronrod;

// (e^{iy} − 1)/(iy), continued through y = 0.
cd phase_average(double y) {
  if (std::abs(y) < 1e-4) return {1.0 - y * y / 6.0, y / 2.0 - y * y * y / 24.0};
  return (std::exp(cd(0.0, y)) - 1.0) / cd(0.0, y);
}

void require_positive_times(double record_time, double time_constant) {
  if (!(record_time > 0.0) || !(time_constant > 0.0))
    throw std::invalid_argument("record time T and lock-in time constant T_bw must be positive");
}

double weighted(const ProbeCouplings& c, const Eigen::Vector2cd& v, cd* combined = nullptr) {
  const cd w = c.d_a * v(0) - c.d_b * v(1);
  if (combined) *combined = w;
  return std::abs(w);
}

}  // namespace

ResponseMatrices response_matrices(const DriftSystem& system, const CartesianProjection& proj, double b_angle,
                                   double phi, double freq_hz) {
  const int n = system.layout.dim();
  const cd iw(0.0, 2 * constants::kPi * freq_hz);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const cd c_plus = cd(0.0, std::cos(b_angle)) - std::sin(b_angle) * std::exp(cd(0.0, phi));
  const cd c_minus = cd(0.0, -std::cos(b_angle)) - std::sin(b_angle) * std::exp(cd(0.0, phi));
  const Eigen::VectorXcd ra = (system.a_plus - iw * id).partialPivLu().solve(system.drive) * c_plus;
  const Eigen::VectorXcd rb = (system.a_minus - iw * id).partialPivLu().solve(system.drive) * c_minus;
  const Eigen::MatrixXd& m = proj.reduced;
  return {m.cast<cd>() * ra, m.cast<cd>() * rb};
}

Eigen::Vector2cd spin_response_phasors(const DriftSystem& system, const CartesianProjection& proj, double b_angle,
                                       double phi, double freq_hz) {
  const ResponseMatrices r = response_matrices(system, proj, b_angle, phi, freq_hz);
  // The transverse field drives d<T_L1>/dt with ℬ/√2 (C^{L0}_{L1;1-1} = 1/√2).
  return (r.script_a + r.script_b) / std::sqrt(2.0);
}

ResponsePoint coherent_response(const DriftSystem& system, const CartesianProjection& proj, const DriveSpec& drive,
                                const ProbeCouplings& couplings, double freq_hz) {
  cd w;
  ResponsePoint p;
  p.freq_hz = freq_hz;
  p.ac = weighted(couplings, spin_response_phasors(system, proj, drive.b_angle, drive.phi, freq_hz), &w);
  p.chi = std::arg(w);
  return p;
}

std::vector<ResponsePoint> coherent_response(const DriftSystem& system, const CartesianProjection& proj,
                                             const DriveSpec& drive, const ProbeCouplings& couplings,
                                             const std::vector<double>& freqs) {
  std::vector<ResponsePoint> out;
  out.reserve(freqs.size());
  for (double f : freqs) out.push_back(coherent_response(system, proj, drive, couplings, f));
  return out;
}

double published_ac(const DriftSystem& system, const CartesianProjection& proj, const DriveSpec& drive,
                    const ProbeCouplings& couplings, double freq_hz) {
  const ResponseMatrices r = response_matrices(system, proj, drive.b_angle, drive.phi, freq_hz);
  const Eigen::Vector2cd sum = r.script_a + r.script_b;
  const double re = couplings.d_a * sum(0).real() - couplings.d_b * sum(1).real();
  const double im = couplings.d_a * sum(0).imag() - couplings.d_b * sum(1).imag();
  return 2.0 * std::hypot(re, im);
}

std::complex<double> lockin_transfer(double omega, double omega_p, double record_time, double time_constant) {
  auto h = [&](double x) { return phase_average(x * record_time) / cd(1.0, x * time_constant); };
  return 0.5 * (h(omega_p + omega) + h(omega_p - omega));
}

double filter_function(double omega, double omega_p, double record_time, double time_constant) {
  require_positive_times(record_time, time_constant);
  return std::norm(lockin_transfer(omega, omega_p, record_time, time_constant));
}

double filter_function_published(double w, double wp, double T, double tb) {
  require_positive_times(T, tb);
  const double w2 = w * w, wp2 = wp * wp, tb2 = tb * tb;
  const double lead = 2.0 * tb2 * (wp2 + w2) + 1.0;
  double num = -2.0 * wp * w * lead * std::cos((wp - w) * T) + 2.0 * wp * w * lead * std::cos((wp + w) * T);
  num += 4.0 * std::cos(wp * T) *
         (tb * w * (w2 - wp2) * std::sin(w * T) -
          std::cos(w * T) * (tb2 * wp2 * wp2 + 2.0 * tb2 * wp2 * w2 + tb2 * w2 * w2 + wp2));
  num += (wp2 - w2) * (std::cos(2.0 * w * T) * (tb2 * (wp2 - w2) + 1.0) + 2.0 * tb * w * std::sin(2.0 * w * T));
  num += (3.0 * wp2 + w2) * (tb2 * (wp2 + 3.0 * w2) + 1.0);
  const double d = wp2 - w2;
  const double den = 2.0 * T * T * d * d * (tb2 * tb2 * d * d + 2.0 * tb2 * (wp2 + w2) + 1.0);
  return num / den;
}

double filter_function_sinc2(double omega, double omega_p, double record_time) {
  const double y = (omega - omega_p) * record_time / 2.0;
  const double sinc = std::abs(y) < 1e-8 ? 1.0 : std::sin(y) / y;
  return 0.25 * sinc * sinc;
}

namespace {

// ∫_0^∞ f(x) 𝔉(ω, x) dx in angular frequency, resolving the main lobe at ω
// panel by panel.
template <class Weight>
double filtered_integral(double omega, double record_time, double time_constant, Weight&& weight) {
  require_positive_times(record_time, time_constant);
  auto integrand = [&](double x) { return weight(x) * filter_function(omega, x, record_time, time_constant); };
  const double lobe = 2 * constants::kPi / record_time;
  const int half_panels = 400;
  const double lo = std::max(0.0, omega - half_panels * lobe);
  const double hi = omega + half_panels * lobe;
  double total = 0.0;
  const int panels = static_cast<int>(std::ceil((hi - lo) / lobe));
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * (hi - lo) / panels;
    const double b = lo + (k + 1) * (hi - lo) / panels;
    total += gauss_kronrod<double, 21>::integrate(integrand, a, b, 3, 1e-10);
  }
  if (lo > 0.0) total += gauss_kronrod<double, 61>::integrate(integrand, 0.0, lo, 12, 1e-9);
  total += gauss_kronrod<double, 61>::integrate(integrand, hi, std::numeric_limits<double>::infinity(), 12, 1e-9);
  return total;
}

}  // namespace

double filter_integral(double omega, double record_time, double time_constant) {
  return filtered_integral(omega, record_time, time_constant, [](double) { return 1.0; });
}

LockinStatistics lockin_statistics(const std::function<double(double)>& two_sided_psd, double response_amplitude,
                                   double freq_hz, const LockinSettings& s) {
  require_positive_times(s.record_time, s.time_constant);
  const double omega = 2 * constants::kPi * freq_hz;
  LockinStatistics out;
  // Phase-aligned response A cos(ωt) = (A/2)(e^{iωt} + e^{-iωt}).
  out.mean = response_amplitude * lockin_transfer(omega, omega, s.record_time, s.time_constant).real();
  // Var = ∫dν' S(ν') 𝔉(ω, 2πν') = (2/2π) ∫_0^∞ dω' S(ω'/2π) 𝔉.
  out.variance_exact =
      filtered_integral(omega, s.record_time, s.time_constant,
                        [&](double x) { return two_sided_psd(x / (2 * constants::kPi)); }) /
      constants::kPi;
  out.variance_shortcut = 2.0 * two_sided_psd(freq_hz) / (4.0 * s.record_time);
  return out;
}

namespace {

void require_budget(const NoiseBudget& n) {
  if (!(n.photon_flux > 0.0) || !(n.atom_number > 0.0))
    throw std::invalid_argument("photon flux and atom number must be positive");
}

double shot_term(const NoiseBudget& n) {
  return 1.0 / (n.photon_flux * n.coupling * n.coupling * n.atom_number * n.atom_number);
}

}  // namespace

double snr_published(double gamma_f, double drive_amplitude, double ac, const NoiseBudget& n, double record_time) {
  require_budget(n);
  return gamma_f * drive_amplitude * ac /
         (std::sqrt(2.0 / record_time) * std::sqrt(2.0 * shot_term(n) + n.spin_one_sided / n.atom_number));
}

double sensitivity_published(double gamma_f, double ac, const NoiseBudget& n) {
  require_budget(n);
  if (ac == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 * std::sqrt(shot_term(n) + n.spin_one_sided / (2.0 * n.atom_number)) / (gamma_f * ac);
}

double snr_lockin(double gamma_f, double drive_amplitude, double ac, const NoiseBudget& n, double record_time) {
  require_budget(n);
  return gamma_f * drive_amplitude * ac * std::sqrt(record_time) /
         std::sqrt(4.0 * shot_term(n) + n.spin_one_sided / n.atom_number);
}

double sensitivity_lockin(double gamma_f, double ac, const NoiseBudget& n) {
  require_budget(n);
  if (ac == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(4.0 * shot_term(n) + n.spin_one_sided / n.atom_number) / (gamma_f * ac);
}

double sql_limit(double relaxation_rate, double atom_number, double record_time, double total_spin, double g_f) {
  if (!(relaxation_rate > 0.0) || !(atom_number > 0.0) || !(record_time > 0.0) || !(total_spin > 0.0) || !(g_f > 0.0))
    throw std::invalid_argument("sql_limit arguments must be positive");
  return constants::kHbar / (g_f * constants::kBohrMagneton * std::sqrt(2.0 * total_spin)) *
         std::sqrt(relaxation_rate / (atom_number * record_time));
}

}  // namespace spinopm
