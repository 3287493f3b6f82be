#pragma once

#include <map>
#include <utility>

#include <Eigen/Dense>

#include "spinopm/half_int.hpp"
#include "spinopm/operators.hpp"

namespace spinopm {

// Z(K, β) = sinh[β(K + 1/2)] / sinh(β/2)
double partition_function(HalfInt K, double beta);

// <K_z> in the state e^{βK_z}/Z(K, β).
double mean_spin_projection(HalfInt K, double beta);

struct SpinTempState {
  double beta = 0.0;
  double polarization = 0.0;  // p = 2<S_z>
  HalfInt nuclear_spin;
  Eigen::MatrixXcd rho0;      // coupled basis
  std::map<std::pair<int, int>, double> st_multipoles;  // (L, 2F) -> <T_L0(FF)>

  double multipole(int rank, HalfInt F) const {
    auto it = st_multipoles.find({rank, F.twice()});
    return it == st_multipoles.end() ? 0.0 : it->second;
  }
};

// Throws std::domain_error for p >= 1 and std::invalid_argument for p < 0.
SpinTempState solve_beta(double polarization, HalfInt nuclear_spin);

// Spin-temperature state at given β (either sign).
SpinTempState spin_temperature_state(double beta, HalfInt nuclear_spin);

struct TransverseVariances {
  double upper = 0.0;  // Var[F_{a,x}]
  double lower = 0.0;  // Var[F_{b,x}]
};

// Closed-form transverse variances, valid on 0 <= p <= 1 including the
// removable singularity at p = 0. Half-integer I only (std::domain_error
// otherwise).
TransverseVariances transverse_variances(double polarization, HalfInt nuclear_spin);

// Sigma(k, l) = <½{T_{k,+1}, T_{l,-1}}> over the rank slots of an |M| = 1
// layout; R0 = [[0, Sigma], [Sigma, 0]] for the stacked [T_{+1}; T_{-1}].
struct CovarianceBlock {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd r0;
};

CovarianceBlock equal_time_covariance(const SpinTempState& state, const MultipoleLayout& layout);

}  // namespace spinopm
