#include "spinopm/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinopm {
namespace {

using cd = std::complex<double>;
namespace odeint = boost::numeric::odeint;

// odeint state: real and imaginary parts interleaved, column-major ρ.
using OdeState = std::vector<double>;

Eigen::Map<const Eigen::MatrixXcd> as_matrix(const OdeState& x, int dim) {
  return {reinterpret_cast<const cd*>(x.data()), dim, dim};
}

Eigen::Map<Eigen::MatrixXcd> as_matrix(OdeState& x, int dim) { return {reinterpret_cast<cd*>(x.data()), dim, dim}; }

OdeState to_state(const Eigen::MatrixXcd& rho) {
  OdeState x(2 * rho.size());
  as_matrix(x, static_cast<int>(rho.rows())) = rho;
  return x;
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

// Adaptive dopri5 stepping that carries its step size across calls.
class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(const MasterEquation& eq, FieldFunction field, const IntegratorSettings& settings)
      : eq_(eq),
        field_(std::move(field)),
        stepper_(odeint::make_controlled(settings.abs_tol, settings.rel_tol, odeint::runge_kutta_dopri5<OdeState>())),
        dt_(settings.initial_step) {}

  void advance(OdeState& x, double& t, double t_end) {
    const int dim = eq_.basis().dim();
    auto system = [&](const OdeState& in, OdeState& out, double time) {
      out.resize(in.size());
      as_matrix(out, dim) = eq_.rhs(as_matrix(in, dim), field_(time));
    };
    int failures = 0;
    while (t < t_end) {
      const bool clipped = t + dt_ > t_end;
      const double saved = dt_;
      double dt = clipped ? t_end - t : dt_;
      if (stepper_.try_step(system, x, t, dt) == odeint::success) {
        ++steps_;
        failures = 0;
        dt_ = clipped ? std::max(saved, dt) : dt;
      } else {
        dt_ = dt;
        if (++failures > 200 || dt_ < 1e-18)
          throw std::runtime_error("master-equation integration failed near t = " + std::to_string(t) +
                                   " s (step " + std::to_string(dt_) + " s)");
      }
    }
    t = t_end;
    as_matrix(x, dim) = hermitian_part(as_matrix(x, dim));
  }

  int steps() const { return steps_; }

 private:
  const MasterEquation& eq_;
  FieldFunction field_;
  decltype(odeint::make_controlled(1.0, 1.0, odeint::runge_kutta_dopri5<OdeState>())) stepper_;
  double dt_;
  int steps_ = 0;
};

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho, double tolerance) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("density matrix must be square");
  if ((rho_ - rho_.adjoint()).norm() > tolerance) throw std::invalid_argument("density matrix not Hermitian");
  if (std::abs(rho_.trace() - cd(1.0)) > tolerance) throw std::invalid_argument("density matrix trace != 1");
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho_).eigenvalues();
  if (ev.minCoeff() < -tolerance) throw std::invalid_argument("density matrix not positive semidefinite");
}

MasterEquation::MasterEquation(OracleParams params) : params_(params), basis_(params.nuclear_spin) {
  const auto s = single_spin_operators(kElectronSpin);
  for (int k = 0; k < 3; ++k) pauli_half_[k] = s[k];
  const SpinOperators ops = spin_operators(basis_);
  electron_ = ops.electron;
  nuclear_dot_electron_ = Eigen::MatrixXcd::Zero(basis_.dim(), basis_.dim());
  for (int k = 0; k < 3; ++k) nuclear_dot_electron_ += ops.nuclear[k] * ops.electron[k];
  const HalfInt I = params.nuclear_spin;
  projectors_[0] = basis_.to_uncoupled(basis_.manifold_projector(upper_manifold(I)));
  projectors_[1] = basis_.to_uncoupled(basis_.manifold_projector(lower_manifold(I)));
}

Eigen::MatrixXcd MasterEquation::partial_trace_electron(const Eigen::MatrixXcd& rho) const {
  const int n = params_.nuclear_spin.multiplicity();
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
  return out;
}

Eigen::MatrixXcd MasterEquation::secular_projection(const Eigen::MatrixXcd& op) const {
  return projectors_[0] * op * projectors_[0] + projectors_[1] * op * projectors_[1];
}

Eigen::MatrixXcd MasterEquation::hyperfine_term(const Eigen::MatrixXcd& rho) const {
  const cd minus_i(0.0, -1.0);
  return minus_i * params_.hyperfine_omega * (nuclear_dot_electron_ * rho - rho * nuclear_dot_electron_);
}

Eigen::MatrixXcd MasterEquation::zeeman_term(const Eigen::MatrixXcd& rho, const Eigen::Vector3d& field) const {
  const double scale = params_.g_s * constants::kBohrMagneton / constants::kHbar;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis_.dim(), basis_.dim());
  for (int k = 0; k < 3; ++k)
    if (field(k) != 0.0) h += (scale * field(k)) * electron_[k];
  return cd(0.0, -1.0) * (h * rho - rho * h);
}

Eigen::MatrixXcd MasterEquation::collision_terms(const Eigen::MatrixXcd& rho) const {
  const RateSet& r = params_.rates;
  const Eigen::MatrixXcd nuclear = partial_trace_electron(rho);
  const Eigen::Matrix2cd half_identity = 0.5 * Eigen::Matrix2cd::Identity();

  Eigen::Matrix2cd exchange_target = half_identity;
  for (int k = 0; k < 3; ++k) exchange_target += 2.0 * (electron_[k] * rho).trace() * pauli_half_[k];
  const Eigen::Matrix2cd pump_target = half_identity + r.pump_spin * pauli_half_[2];

  Eigen::MatrixXcd out = r.spin_exchange * (Eigen::kroneckerProduct(nuclear, exchange_target).eval() - rho);
  out += r.spin_destruction * (Eigen::kroneckerProduct(nuclear, half_identity).eval() - rho);
  out += r.optical_pumping * (Eigen::kroneckerProduct(nuclear, pump_target).eval() - rho);
  return out;
}

Eigen::MatrixXcd MasterEquation::rhs(const Eigen::MatrixXcd& rho, const Eigen::Vector3d& field) const {
  Eigen::MatrixXcd out = zeeman_term(rho, field) + collision_terms(rho);
  if (params_.secular) return secular_projection(out);
  return out + hyperfine_term(rho);
}

Eigen::VectorXcd multipole_vector(const HilbertBasis& basis, const Eigen::MatrixXcd& rho_uncoupled,
                                  const MultipoleLayout& layout) {
  const Eigen::MatrixXcd rho = basis.to_coupled(rho_uncoupled);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(layout.dim());
  for (int k = 0; k < layout.dim(); ++k) {
    const auto& slot = layout.slots()[k];
    if (slot.phantom) continue;
    v(k) = (tensor_matrix(slot.rank, layout.projection(), slot.F, slot.F, basis).matrix * rho).trace();
  }
  return v;
}

Eigen::MatrixXcd uncoupled_state(const HilbertBasis& basis, const SpinTempState& state) {
  return basis.to_uncoupled(state.rho0);
}

Eigen::MatrixXcd linearized_drift(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss,
                                  const MultipoleLayout& layout, double field_z) {
  const HilbertBasis& basis = eq.basis();
  const int n = layout.dim();
  const Eigen::Vector3d field(0.0, 0.0, field_z);
  std::vector<Eigen::MatrixXcd> tensors(n);
  for (int k = 0; k < n; ++k) {
    const auto& slot = layout.slots()[k];
    tensors[k] = slot.phantom ? Eigen::MatrixXcd::Zero(basis.dim(), basis.dim())
                              : basis.to_uncoupled(
                                    tensor_matrix(slot.rank, layout.projection(), slot.F, slot.F, basis).matrix);
  }
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    // A unit change of <T_l> moves ρ along T_l†.
    const Eigen::MatrixXcd dir = tensors[l].adjoint();
    const Eigen::MatrixXcd jac = 0.5 * (eq.rhs(rho_ss + dir, field) - eq.rhs(rho_ss - dir, field));
    for (int k = 0; k < n; ++k) a(k, l) = (tensors[k] * jac).trace();
  }
  return a;
}

Eigen::VectorXcd transverse_drive(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss,
                                  const MultipoleLayout& layout, int axis) {
  Eigen::Vector3d unit = Eigen::Vector3d::Zero();
  unit(axis) = 1.0;
  const Eigen::MatrixXcd d = eq.secular_projection(eq.zeeman_term(rho_ss, unit));
  const double gamma_f = gyromagnetic_ratio(eq.params().nuclear_spin, eq.params().g_s);
  return multipole_vector(eq.basis(), d, layout) / gamma_f;
}

BruteForceStatics brute_force_statics(const DensityMatrix& density, const MultipoleLayout& layout) {
  const Eigen::MatrixXcd& rho = density.matrix();
  const HalfInt I = layout.nuclear_spin();
  const HilbertBasis basis(I);
  if (basis.dim() != density.dim()) throw std::invalid_argument("density matrix dimension mismatch");

  BruteForceStatics out;
  for (HalfInt F : {upper_manifold(I), lower_manifold(I)})
    for (int rank = 0; rank <= F.twice(); ++rank)
      out.multipoles[{rank, F.twice()}] = (tensor_matrix(rank, 0, F, F, basis).matrix * rho).trace().real();

  auto variance = [&](HalfInt F) {
    const Eigen::MatrixXcd fx = manifold_spin(basis, F, 0);
    const cd mean = (fx * rho).trace();
    return ((fx * fx * rho).trace() - mean * mean).real();
  };
  out.variances = {variance(upper_manifold(I)), variance(lower_manifold(I))};

  const int n = layout.dim();
  out.sigma = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const auto& sk = layout.slots()[k];
      const auto& sl = layout.slots()[l];
      if (sk.phantom || sl.phantom) continue;
      const Eigen::MatrixXcd up = tensor_matrix(sk.rank, 1, sk.F, sk.F, basis).matrix;
      const Eigen::MatrixXcd down = tensor_matrix(sl.rank, -1, sl.F, sl.F, basis).matrix;
      out.sigma(k, l) = 0.5 * ((up * down + down * up) * rho).trace();
    }
  }
  return out;
}

TimeDomainSpectrum time_domain_spectrum(const DriftSystem& system, const CovarianceBlock& cov,
                                        const CartesianProjection& proj, double dt, int samples, double max_freq) {
  const Eigen::MatrixXcd& a = system.combined;
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXcd step = (a * dt).exp();
  // Only the F_x rows of ℳ are needed: C(τ) = ℳx e^{𝒜τ} R0 ℳxᵀ.
  const Eigen::MatrixXcd mx = proj.full.topRows(2);
  const Eigen::MatrixXcd right = cov.r0.cast<cd>() * mx.transpose();

  std::array<std::vector<cd>, 4> series;
  for (auto& s : series) s.resize(samples);
  Eigen::MatrixXcd left = mx;
  for (int t = 0; t < samples; ++t) {
    const Eigen::Matrix2cd c = left * right;
    series[0][t] = c(0, 0);
    series[1][t] = c(1, 1);
    series[2][t] = c(0, 1);
    series[3][t] = c(1, 0);
    left = left * step;
  }
  // The trapezoid rule needs half weight at τ = 0.
  for (auto& s : series) s[0] *= 0.5;

  Eigen::FFT<double> fft;
  std::array<std::vector<cd>, 4> spectra;
  for (int c = 0; c < 4; ++c) fft.fwd(spectra[c], series[c]);

  TimeDomainSpectrum out;
  const double df = 1.0 / (samples * dt);
  const int last = std::min(samples / 2 - 1, static_cast<int>(max_freq / df));
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 0; k <= last; ++k) {
    const double omega = 2 * constants::kPi * k * df;
    // Euler-Maclaurin endpoint corrections at τ = 0 (the tail has decayed):
    // ∫ f = h Σ' f_n + h²/12 f'(0) - h⁴/720 f'''(0), f(τ) = C(τ) e^{∓iωτ}.
    auto corrected = [&](double w) {
      const Eigen::MatrixXcd shifted = a - cd(0.0, w) * id;
      const Eigen::MatrixXcd d1 = mx * shifted * right;
      const Eigen::MatrixXcd d3 = mx * shifted * shifted * shifted * right;
      return Eigen::Matrix2cd(dt * dt / 12.0 * d1 - std::pow(dt, 4) / 720.0 * d3);
    };
    const Eigen::Matrix2cd corr_pos = corrected(omega);
    const Eigen::Matrix2cd corr_neg = corrected(-omega);
    const int kneg = (samples - k) % samples;
    // G(ω) from bin k, G(-ω) from bin N-k; S(ω) = G(ω) + G(-ω)ᵀ.
    auto g = [&](int bin, const Eigen::Matrix2cd& corr) {
      Eigen::Matrix2cd m;
      m << spectra[0][bin], spectra[2][bin], spectra[3][bin], spectra[1][bin];
      return Eigen::Matrix2cd(dt * m + corr);
    };
    const Eigen::Matrix2cd s = g(k, corr_pos) + g(kneg, corr_neg).transpose();
    out.freqs.push_back(k * df);
    out.fx.push_back({s(0, 0), s(1, 1), s(0, 1), s(1, 0)});
  }
  return out;
}

Eigen::MatrixXcd evolve(const MasterEquation& eq, Eigen::MatrixXcd rho, const FieldFunction& field, double t0,
                        double t1, const IntegratorSettings& settings, int* steps_taken) {
  AdaptiveIntegrator integrator(eq, field, settings);
  OdeState x = to_state(rho);
  double t = t0;
  integrator.advance(x, t, t1);
  if (steps_taken) *steps_taken = integrator.steps();
  return as_matrix(x, eq.basis().dim());
}

DrivenResult driven_response(const MasterEquation& eq, const Eigen::MatrixXcd& rho_ss, double field_z,
                             const DrivenSettings& s) {
  if (s.frequency_hz <= 0.0 || s.periods < 1 || s.samples_per_period < 4)
    throw std::invalid_argument("driven_response: invalid demodulation settings");
  const double omega = 2 * constants::kPi * s.frequency_hz;
  const double bx = s.drive_amplitude * std::cos(s.b_angle);
  const double by = s.drive_amplitude * std::sin(s.b_angle);
  FieldFunction field = [=](double t) {
    return Eigen::Vector3d(bx * std::cos(omega * t), by * std::cos(omega * t + s.phi), field_z);
  };

  const HilbertBasis& basis = eq.basis();
  const HalfInt I = eq.params().nuclear_spin;
  const Eigen::MatrixXcd fx_upper = basis.to_uncoupled(manifold_spin(basis, upper_manifold(I), 0));
  const Eigen::MatrixXcd fx_lower = basis.to_uncoupled(manifold_spin(basis, lower_manifold(I), 0));

  AdaptiveIntegrator integrator(eq, field, s.integrator);
  OdeState x = to_state(rho_ss);
  double t = 0.0;
  const double period = 1.0 / s.frequency_hz;
  // Start demodulating on a period boundary.
  const double start = std::ceil(s.settle_time / period) * period;
  integrator.advance(x, t, start);

  const int total = s.periods * s.samples_per_period;
  const double h = period / s.samples_per_period;
  cd upper = 0.0, lower = 0.0;
  for (int k = 0; k < total; ++k) {
    const double tk = start + k * h;
    if (k > 0) integrator.advance(x, t, tk);
    const auto rho = as_matrix(x, basis.dim());
    const cd phase_factor = std::exp(cd(0.0, -omega * tk));
    upper += (fx_upper * rho).trace().real() * phase_factor;
    lower += (fx_lower * rho).trace().real() * phase_factor;
  }
  // Rectangle rule over whole periods is exact for the fundamental.
  return {2.0 * upper / double(total), 2.0 * lower / double(total), integrator.steps()};
}

double stationarity_residual(const MasterEquation& eq, const Eigen::MatrixXcd& rho, double field_z) {
  return eq.rhs(rho, Eigen::Vector3d(0.0, 0.0, field_z)).norm();
}

}  // namespace spinopm
