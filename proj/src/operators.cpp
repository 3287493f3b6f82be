#include "spinopm/operators.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "spinopm/angular.hpp"

namespace spinopm {
namespace {

using cd = std::complex<double>;

// Index of projection m within a spin-K multiplet ordered m = K, K-1, ...
int descending_index(HalfInt K, HalfInt m) { return (K.twice() - m.twice()) / 2; }

HalfInt descending_value(HalfInt K, int index) { return K - HalfInt(index); }

}  // namespace

HilbertBasis::HilbertBasis(HalfInt nuclear_spin) : nuclear_spin_(nuclear_spin) {
  if (nuclear_spin.twice() < 1) throw std::invalid_argument("nuclear spin must be >= 1/2");
  const HalfInt I = nuclear_spin;
  const HalfInt S = kElectronSpin;
  dim_ = I.multiplicity() * S.multiplicity();

  for (int i = 0; i < I.multiplicity(); ++i)
    for (int s = 0; s < S.multiplicity(); ++s)
      uncoupled_.push_back({descending_value(I, i), descending_value(S, s)});

  for (HalfInt F : {upper_manifold(I), lower_manifold(I)})
    for (int k = 0; k < F.multiplicity(); ++k) coupled_.push_back({F, descending_value(F, k)});

  unitary_ = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int c = 0; c < dim_; ++c) {
    const auto& [F, m] = coupled_[c];
    for (int u = 0; u < dim_; ++u) {
      const auto& [mi, ms] = uncoupled_[u];
      if (mi + ms != m) continue;
      unitary_(u, c) = clebsch_gordan(I, mi, S, ms, F, m);
    }
  }
}

int HilbertBasis::coupled_index(HalfInt F, HalfInt m) const {
  for (int k = 0; k < dim_; ++k)
    if (coupled_[k].F == F && coupled_[k].m == m) return k;
  return -1;
}

int HilbertBasis::uncoupled_index(HalfInt m_nuclear, HalfInt m_electron) const {
  for (int k = 0; k < dim_; ++k)
    if (uncoupled_[k].m_nuclear == m_nuclear && uncoupled_[k].m_electron == m_electron) return k;
  return -1;
}

Eigen::MatrixXcd HilbertBasis::to_coupled(const Eigen::MatrixXcd& uncoupled_op) const {
  return unitary_.transpose().cast<cd>() * uncoupled_op * unitary_.cast<cd>();
}

Eigen::MatrixXcd HilbertBasis::to_uncoupled(const Eigen::MatrixXcd& coupled_op) const {
  return unitary_.cast<cd>() * coupled_op * unitary_.transpose().cast<cd>();
}

Eigen::MatrixXcd HilbertBasis::manifold_projector(HalfInt F) const {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    if (coupled_[k].F == F) p(k, k) = 1.0;
  return p;
}

Eigen::MatrixXcd spin_tensor(int rank, int projection, HalfInt K, HalfInt Kp) {
  if (!triangle(K, Kp, rank) || std::abs(projection) > rank)
    throw std::invalid_argument("spin_tensor: forbidden rank " + std::to_string(rank) + " for (" +
                                K.str() + ", " + Kp.str() + ")");
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(K.multiplicity(), Kp.multiplicity());
  for (int r = 0; r < K.multiplicity(); ++r) {
    const HalfInt m = descending_value(K, r);
    const HalfInt mp = m - HalfInt(projection);
    if (!valid_projection(Kp, mp)) continue;
    // |K m><K' m-M| (-1)^{m-M-K'} C^{LM}_{K m; K' M-m}
    t(r, descending_index(Kp, mp)) =
        phase(mp - Kp) * clebsch_gordan(K, m, Kp, -mp, rank, projection);
  }
  return t;
}

TensorOp tensor_matrix(int rank, int projection, HalfInt F, HalfInt Fp, const HilbertBasis& basis) {
  const Eigen::MatrixXcd block = spin_tensor(rank, projection, F, Fp);
  const int row0 = basis.coupled_index(F, F);
  const int col0 = basis.coupled_index(Fp, Fp);
  if (row0 < 0 || col0 < 0) throw std::invalid_argument("tensor_matrix: manifold outside the basis");
  TensorOp op{rank, projection, F, Fp, Eigen::MatrixXcd::Zero(basis.dim(), basis.dim())};
  op.matrix.block(row0, col0, block.rows(), block.cols()) = block;
  return op;
}

TensorOp tensor_matrix(int rank, int projection, HalfInt F, HalfInt Fp, HalfInt nuclear_spin) {
  return tensor_matrix(rank, projection, F, Fp, HilbertBasis(nuclear_spin));
}

Eigen::MatrixXcd product_tensor(int nuclear_rank, int nuclear_proj, int electron_rank,
                                int electron_proj, const HilbertBasis& basis) {
  const HalfInt I = basis.nuclear_spin();
  const Eigen::MatrixXcd nuc = spin_tensor(nuclear_rank, nuclear_proj, I, I);
  const Eigen::MatrixXcd el = spin_tensor(electron_rank, electron_proj, kElectronSpin, kElectronSpin);
  return basis.to_coupled(Eigen::kroneckerProduct(nuc, el).eval());
}

std::complex<double> hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.adjoint() * b).trace();
}

CouplingCoeffs overlap_coefficients(HalfInt nuclear_spin) {
  const HalfInt I = nuclear_spin;
  const HilbertBasis basis(I);
  const std::array<HalfInt, 2> manifolds{upper_manifold(I), lower_manifold(I)};
  const int max_rank = upper_manifold(I).twice();
  const int max_nuclear_rank = I.twice();
  const double nuclear_weight = std::sqrt(2.0 * I.multiplicity());
  auto overlap = [&](const Eigen::MatrixXcd& coupled, const Eigen::MatrixXcd& product) {
    return hs_inner(coupled, product).real();
  };
  CouplingCoeffs coeffs(I);

  for (HalfInt f : manifolds) {
    for (HalfInt fp : manifolds) {
      for (int rank = 0; rank <= max_nuclear_rank; ++rank) {
        if (!triangle(f, fp, rank)) continue;
        const double x = overlap(tensor_matrix(rank, 0, f, fp, basis).matrix, product_tensor(rank, 0, 0, 0, basis));
        if (x != 0.0) coeffs.set_x(rank, f, fp, x);
      }
      for (int rank = 0; rank <= 1; ++rank) {
        if (!triangle(f, fp, rank)) continue;
        const double y = overlap(tensor_matrix(rank, 0, f, fp, basis).matrix, product_tensor(0, 0, rank, 0, basis));
        if (y != 0.0) coeffs.set_y(rank, f, fp, y);
      }
    }
  }

  for (HalfInt f : manifolds) {
    for (int rank = 0; rank <= max_rank; ++rank) {
      if (!triangle(f, f, rank)) continue;
      for (int lambda : {rank - 1, rank + 1}) {
        if (lambda < 0 || lambda > max_nuclear_rank) continue;
        for (int proj = -rank; proj <= rank; ++proj) {
          const Eigen::MatrixXcd coupled = tensor_matrix(rank, proj, f, f, basis).matrix;
          if (std::abs(proj) <= 1) {
            const double z = nuclear_weight * overlap(coupled, product_tensor(lambda, 0, 1, proj, basis));
            if (std::abs(z) > 1e-15) coeffs.set_z(lambda, f, rank, proj, z);
          }
          if (std::abs(proj) <= lambda) {
            const double zp = nuclear_weight * overlap(coupled, product_tensor(lambda, proj, 1, 0, basis));
            if (std::abs(zp) > 1e-15) coeffs.set_zp(lambda, f, rank, proj, zp);
          }
        }
      }
    }
  }
  return coeffs;
}

std::array<Eigen::MatrixXcd, 3> single_spin_operators(HalfInt K) {
  const int n = K.multiplicity();
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
  const double k = K.value();
  for (int r = 0; r < n; ++r) {
    const double m = descending_value(K, r).value();
    z(r, r) = m;
    // K+ |m> = sqrt(k(k+1) - m(m+1)) |m+1>, and m+1 sits one row up.
    if (r > 0) raise(r - 1, r) = std::sqrt(k * (k + 1) - m * (m + 1));
  }
  const Eigen::MatrixXcd lower = raise.adjoint();
  return {(raise + lower) / 2.0, (raise - lower) / cd(0.0, 2.0), z};
}

SpinOperators spin_operators(const HilbertBasis& basis) {
  const auto s = single_spin_operators(kElectronSpin);
  const auto i = single_spin_operators(basis.nuclear_spin());
  const Eigen::MatrixXcd id_s = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd id_i =
      Eigen::MatrixXcd::Identity(basis.nuclear_spin().multiplicity(), basis.nuclear_spin().multiplicity());
  SpinOperators ops;
  for (int k = 0; k < 3; ++k) {
    ops.electron[k] = Eigen::kroneckerProduct(id_i, s[k]);
    ops.nuclear[k] = Eigen::kroneckerProduct(i[k], id_s);
    ops.total[k] = ops.electron[k] + ops.nuclear[k];
  }
  return ops;
}

Eigen::MatrixXcd manifold_spin(const HilbertBasis& basis, HalfInt F, int axis) {
  const Eigen::MatrixXcd total = basis.to_coupled(spin_operators(basis).total.at(axis));
  const Eigen::MatrixXcd p = basis.manifold_projector(F);
  return p * total * p;
}

int MultipoleLayout::index_of(int rank, HalfInt F) const {
  for (int k = 0; k < dim(); ++k)
    if (slots_[k].rank == rank && slots_[k].F == F) return k;
  return -1;
}

MultipoleLayout multipole_layout(HalfInt nuclear_spin, int projection, LayoutKind kind) {
  const HalfInt a = upper_manifold(nuclear_spin);
  const HalfInt b = lower_manifold(nuclear_spin);
  const int lowest = std::max(1, std::abs(projection));
  std::vector<MultipoleSlot> slots;
  if (kind == LayoutKind::physical) {
    for (int rank = lowest; rank <= a.twice(); ++rank) {
      slots.push_back({rank, a, false});
      if (rank <= b.twice()) slots.push_back({rank, b, false});
    }
  } else {
    for (int rank = lowest; rank <= nuclear_spin.twice(); ++rank) {
      slots.push_back({rank, a, false});
      slots.push_back({rank, b, rank > b.twice()});
    }
  }
  return MultipoleLayout(nuclear_spin, projection, kind, std::move(slots));
}

CartesianProjection cartesian_projection(const MultipoleLayout& layout) {
  const double I = layout.nuclear_spin().value();
  CartesianProjection proj;
  proj.weights.setZero();
  proj.weights(0, 0) = std::sqrt((I + 1) * (2 * I + 1) * (2 * I + 3)) / (2 * std::sqrt(3.0));
  proj.weights(1, 1) = std::sqrt(std::max(0.0, I * (2 * I - 1) * (2 * I + 1))) / (2 * std::sqrt(3.0));

  const int n = layout.dim();
  proj.reduced = Eigen::MatrixXd::Zero(2, n);
  const HalfInt manifolds[2] = {upper_manifold(layout.nuclear_spin()), lower_manifold(layout.nuclear_spin())};
  for (int k = 0; k < 2; ++k)
    if (int slot = layout.index_of(1, manifolds[k]); slot >= 0 && !layout.slots()[slot].phantom)
      proj.reduced(k, slot) = proj.weights(k, k);

  // F_x = 𝔐 (T_{-1} - T_{+1}),  F_y = i 𝔐 (T_{+1} + T_{-1})
  const Eigen::MatrixXcd r = proj.reduced.cast<std::complex<double>>();
  const std::complex<double> i(0.0, 1.0);
  proj.full = Eigen::MatrixXcd::Zero(4, 2 * n);
  proj.full.block(0, 0, 2, n) = -r;
  proj.full.block(0, n, 2, n) = r;
  proj.full.block(2, 0, 2, n) = i * r;
  proj.full.block(2, n, 2, n) = i * r;
  return proj;
}

std::pair<MultipoleLayout, CartesianProjection> layout_and_projection(HalfInt nuclear_spin, int projection,
                                                                      LayoutKind kind) {
  MultipoleLayout layout = multipole_layout(nuclear_spin, projection, kind);
  CartesianProjection proj = cartesian_projection(layout);
  return {std::move(layout), std::move(proj)};
}

}  // namespace spinopm
