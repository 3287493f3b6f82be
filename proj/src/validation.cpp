#include "spinopm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinopm/oracle.hpp"

namespace spinopm {
namespace {

using cd = std::complex<double>;

ValidationCheck make_check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value, tolerance, value <= tolerance, false, std::move(detail)};
}

double max_table_deviation(const CouplingCoeffs& a, const CouplingCoeffs& b) {
  double worst = 0.0;
  auto scan = [&worst](const auto& left, const auto& right, auto lookup) {
    for (const auto& [key, value] : left) worst = std::max(worst, std::abs(value - lookup(right, key)));
    for (const auto& [key, value] : right) worst = std::max(worst, std::abs(value - lookup(left, key)));
  };
  auto find = [](const auto& table, const auto& key) {
    const auto it = table.find(key);
    return it == table.end() ? 0.0 : it->second;
  };
  scan(a.x_table(), b.x_table(), find);
  scan(a.y_table(), b.y_table(), find);
  scan(a.z_table(), b.z_table(), find);
  scan(a.zp_table(), b.zp_table(), find);
  return worst;
}

double tensor_orthonormality(HalfInt I) {
  const HilbertBasis basis(I);
  std::vector<TensorOp> ops;
  for (HalfInt f : {upper_manifold(I), lower_manifold(I)})
    for (HalfInt fp : {upper_manifold(I), lower_manifold(I)})
      for (int rank = 0; rank <= upper_manifold(I).twice(); ++rank) {
        if (!triangle(f, fp, rank)) continue;
        for (int proj = -rank; proj <= rank; ++proj) ops.push_back(tensor_matrix(rank, proj, f, fp, basis));
      }
  double worst = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(hs_inner(ops[i].matrix, ops[j].matrix) - target));
    }
  return worst;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

bool all_passed(const std::vector<ValidationCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed || c.informational; });
}

std::vector<ValidationCheck> validation_suite(const Scenario& sc, const ValidationOptions& options) {
  std::vector<ValidationCheck> out;
  const HalfInt I = sc.config.species.nuclear_spin;
  const RateSet& rates = sc.config.rates;
  const double field = sc.config.field_tesla;

  out.push_back(make_check("coefficients: 9j closed form vs operator overlaps",
                           max_table_deviation(sc.coeffs, overlap_coefficients(I)), 1e-12));
  out.push_back(make_check("tensor orthonormality", tensor_orthonormality(I), 1e-12));

  // Statics against direct traces over ρ_ST.
  const auto [phys_layout, phys_proj] = layout_and_projection(I, 1, LayoutKind::physical);
  const BruteForceStatics statics = brute_force_statics(DensityMatrix(sc.state.rho0), phys_layout);
  if (!I.is_integer()) {
    const TransverseVariances closed = transverse_variances(sc.config.polarization, I);
    const double err = std::max(std::abs(closed.upper - statics.variances.upper) / statics.variances.upper,
                                std::abs(closed.lower - statics.variances.lower) / statics.variances.lower);
    out.push_back(make_check("transverse variances: closed form vs traces", err, 1e-10));
  }
  const CovarianceBlock phys_cov = equal_time_covariance(sc.state, phys_layout);
  out.push_back(make_check("covariance Sigma vs traces", (phys_cov.sigma - statics.sigma).cwiseAbs().maxCoeff(), 1e-10));

  // Dynamics against the master equation linearized about ρ_ST.
  OracleParams params;
  params.nuclear_spin = I;
  params.rates = rates;
  params.hyperfine_omega = sc.config.species.hyperfine_omega();
  const MasterEquation eq(params);
  const Eigen::MatrixXcd rho_ss = uncoupled_state(eq.basis(), sc.state);
  const double rate_scale = std::max({rates.spin_exchange, rates.spin_destruction, rates.optical_pumping});

  const double residual = stationarity_residual(eq, rho_ss, field);
  out.push_back(make_check("spin-temperature fixed point (‖dρ/dt‖ / max rate)", residual / rate_scale, 1e-9,
                           "‖dρ/dt‖ = " + fmt(residual) + " s^-1"));

  const DriftSystem phys_system = assemble_system(sc.state, sc.coeffs, phys_layout, rates, field);
  const Eigen::MatrixXcd jacobian = linearized_drift(eq, rho_ss, phys_layout, field);
  out.push_back(make_check("drift matrix vs master-equation Jacobian (relative to max rate)",
                           (jacobian - phys_system.a_plus).cwiseAbs().maxCoeff() / rate_scale, 1e-9));

  const Eigen::VectorXcd drive_x = transverse_drive(eq, rho_ss, phys_layout, 0);
  const Eigen::VectorXcd expected = cd(0.0, 1.0 / std::sqrt(2.0)) * phys_system.drive;
  out.push_back(make_check("transverse drive vs master equation", (drive_x - expected).cwiseAbs().maxCoeff(), 1e-10));

  // Spectrum normalization.
  const Eigen::MatrixXcd c0 =
      sc.projection.full.topRows(2) * sc.covariance.r0.cast<cd>() * sc.projection.full.topRows(2).transpose();
  const double var_aa = c0(0, 0).real(), var_bb = c0(1, 1).real(), cross = (c0(0, 1) + c0(1, 0)).real();
  const double int_aa = spectral_integral(sc.system, sc.covariance, sc.projection, CartesianComponent::aa);
  const double int_bb = spectral_integral(sc.system, sc.covariance, sc.projection, CartesianComponent::bb);
  const double int_x = spectral_integral(sc.system, sc.covariance, sc.projection, CartesianComponent::ab_plus_ba);
  out.push_back(make_check("sum rule aa", std::abs(int_aa - var_aa) / var_aa, 1e-3));
  out.push_back(make_check("sum rule bb", std::abs(int_bb - var_bb) / var_bb, 1e-3));
  out.push_back(make_check("sum rule ab+ba (relative to sqrt(aa bb))",
                           std::abs(int_x - cross) / std::sqrt(var_aa * var_bb), 1e-3));

  const double nu_res = sc.system.resonance_hz();
  const double band = nu_res > 0.0 ? 5.0 * nu_res : 5.0 * sc.system.linewidth_hz();
  if (options.time_domain) {
    const double fastest = sc.system.eigenvalues.cwiseAbs().maxCoeff();
    const double dt = std::min(1e-7, 0.1 / fastest);
    const double span = 40.0 / std::abs(sc.system.slowest_mode().real());
    int samples = 1024;
    while (samples * dt < span && samples < (1 << 22)) samples *= 2;
    const TimeDomainSpectrum td = time_domain_spectrum(sc.system, sc.covariance, sc.projection, dt, samples, band);
    double worst = 0.0;
    for (std::size_t k = 0; k < td.freqs.size(); ++k) {
      const SpinSpectrumPoint s = qrt_spectrum(sc.system, sc.covariance, sc.projection, td.freqs[k]);
      worst = std::max({worst, std::abs(td.fx[k][0].real() - s.aa) / s.aa, std::abs(td.fx[k][1].real() - s.bb) / s.bb,
                        std::abs((td.fx[k][2] + td.fx[k][3]).real() - s.cross()) / std::sqrt(s.aa * s.bb)});
    }
    out.push_back(make_check("QRT spectrum vs time-domain FFT over [0, 5 nu_res]", worst, 1e-3,
                             std::to_string(td.freqs.size()) + " bins"));
  }

  if (options.driven && nu_res > 0.0) {
    DrivenSettings ds;
    ds.drive_amplitude = 1e-4 * std::abs(field);
    ds.b_angle = sc.config.drive.b_angle;
    ds.phi = sc.config.drive.phi;
    ds.frequency_hz = nu_res;
    ds.settle_time = 10.0 / std::abs(sc.system.slowest_mode().real());
    const DrivenResult full = driven_response(eq, rho_ss, field, ds);
    const cd simulated = sc.couplings.d_a * full.upper - sc.couplings.d_b * full.lower;
    const ResponsePoint predicted = coherent_response(sc.system, sc.projection, sc.config.drive, sc.couplings, nu_res);
    const double scale = sc.system.gamma_f * ds.drive_amplitude;
    const double amp_err = std::abs(std::abs(simulated) / (scale * predicted.ac) - 1.0);
    const double phase_err = std::abs(std::arg(simulated * std::exp(cd(0.0, -predicted.chi)))) * 180.0 / constants::kPi;
    out.push_back(make_check("driven oracle amplitude at nu_res", amp_err, 1e-2,
                             std::to_string(full.steps) + " integrator steps"));
    out.push_back(make_check("driven oracle phase at nu_res (deg)", phase_err, 2.0));

    ds.drive_amplitude *= 0.5;
    const DrivenResult half_drive = driven_response(eq, rho_ss, field, ds);
    const cd simulated_half = sc.couplings.d_a * half_drive.upper - sc.couplings.d_b * half_drive.lower;
    out.push_back(make_check("driven oracle linearity (half drive)",
                             std::abs(std::abs(simulated_half) / std::abs(simulated) - 0.5) / 0.5, 1e-3));
  }

  if (nu_res > 0.0) {
    const double omega = 2 * constants::kPi * nu_res;
    const double record = sc.config.lockin.record_time;
    const double tau = 100.0 / omega;
    const double integral = filter_integral(omega, record, tau);
    // Single-pole filter in series with the T-average: the low-pass removes a
    // fraction T_bw/T of the sinc² area, which π/(2T) ignores.
    const double closed = constants::kPi / (2 * record) * (1.0 - tau / record * (1.0 - std::exp(-record / tau)));
    out.push_back(make_check("lock-in filter integral vs closed form (omega T_bw = 100)",
                             std::abs(integral - closed) / closed, 1e-3));
    const double ideal = constants::kPi / (2 * record);
    out.push_back({"lock-in filter integral / (pi/(2T)) - 1 (omega T_bw = 100)", integral / ideal - 1.0, 0.0, true,
                   true, "approaches 0 only when T_bw << T"});

    LockinSettings white;
    white.record_time = record;
    white.time_constant = sc.time_constant();
    const LockinStatistics stats = lockin_statistics([](double) { return 1.0; }, 1.0, nu_res, white);
    out.push_back(make_check("lock-in white-noise variance: exact vs S'/(4T)",
                             std::abs(stats.variance_exact / stats.variance_shortcut - 1.0), 5e-3));

    const SpinSpectrumPoint spin = qrt_spectrum(sc.system, sc.covariance, sc.projection, nu_res);
    const MeasuredPoint meas = measured_psd(spin, sc.couplings, sc.config.probe.photon_flux, sc.config.atom_number);
    const ResponsePoint resp = coherent_response(sc.system, sc.projection, sc.config.drive, sc.couplings, nu_res);
    const NoiseBudget budget{sc.config.probe.photon_flux, sc.couplings.coupling, sc.config.atom_number,
                             2.0 * meas.spin_effective};
    const double ratio = snr_published(sc.system.gamma_f, sc.config.drive.amplitude, resp.ac, budget, record) /
                         snr_lockin(sc.system.gamma_f, sc.config.drive.amplitude, resp.ac, budget, record);
    ValidationCheck info{"closed-form SNR / lock-in SNR at nu_res", ratio, 0.0, true, true,
                         "the closed form doubles the spin-noise term; snr emits both"};
    out.push_back(info);
  }
  return out;
}

}  // namespace spinopm
