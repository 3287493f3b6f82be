#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinopm/angular.hpp"
#include "spinopm/half_int.hpp"

namespace spinopm {

struct CoupledLabel {
  HalfInt F;
  HalfInt m;
};

struct UncoupledLabel {
  HalfInt m_nuclear;
  HalfInt m_electron;
};

// Ground-state Hilbert space of an alkali atom with nuclear spin I and
// electron spin 1/2. Coupled ordering: |a, a>, |a, a-1>, ..., |a, -a>, then
// the b manifold likewise. Uncoupled ordering: nuclear index major, electron
// minor, each with m descending, so kron(A_I, B_S) acts directly.
class HilbertBasis {
 public:
  explicit HilbertBasis(HalfInt nuclear_spin);

  HalfInt nuclear_spin() const { return nuclear_spin_; }
  int dim() const { return dim_; }
  const std::vector<CoupledLabel>& coupled() const { return coupled_; }
  const std::vector<UncoupledLabel>& uncoupled() const { return uncoupled_; }

  // -1 when the label is not in the space.
  int coupled_index(HalfInt F, HalfInt m) const;
  int uncoupled_index(HalfInt m_nuclear, HalfInt m_electron) const;

  // Column k holds coupled state k expanded over the uncoupled basis.
  const Eigen::MatrixXd& coupled_to_uncoupled() const { return unitary_; }

  Eigen::MatrixXcd to_coupled(const Eigen::MatrixXcd& uncoupled_op) const;
  Eigen::MatrixXcd to_uncoupled(const Eigen::MatrixXcd& coupled_op) const;

  // Projector onto the F manifold, coupled basis.
  Eigen::MatrixXcd manifold_projector(HalfInt F) const;

 private:
  HalfInt nuclear_spin_;
  int dim_ = 0;
  std::vector<CoupledLabel> coupled_;
  std::vector<UncoupledLabel> uncoupled_;
  Eigen::MatrixXd unitary_;
};

struct TensorOp {
  int rank = 0;
  int projection = 0;
  HalfInt F;
  HalfInt Fp;
  Eigen::MatrixXcd matrix;  // coupled basis
};

// T_LM(K K') on a bare spin space, rows over |K m>, columns over |K' m'>,
// m descending. Used for the nuclear and electron factors.
Eigen::MatrixXcd spin_tensor(int rank, int projection, HalfInt K, HalfInt Kp);

// T_LM(FF') embedded in the coupled basis. Throws std::invalid_argument when
// (F, F', L) violates the triangle rule or |M| > L.
TensorOp tensor_matrix(int rank, int projection, HalfInt F, HalfInt Fp, const HilbertBasis& basis);
TensorOp tensor_matrix(int rank, int projection, HalfInt F, HalfInt Fp, HalfInt nuclear_spin);

// T_Λμ(II) ⊗ T_jm(SS), coupled basis.
Eigen::MatrixXcd product_tensor(int nuclear_rank, int nuclear_proj, int electron_rank,
                                int electron_proj, const HilbertBasis& basis);

// Hilbert-Schmidt inner product Tr[A† B].
std::complex<double> hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// The same table as ht_coefficients, built from explicit Hilbert-Schmidt
// overlaps of the coupled and product tensor matrices.
CouplingCoeffs overlap_coefficients(HalfInt nuclear_spin);

// Cartesian spin operators in the uncoupled basis.
struct SpinOperators {
  std::array<Eigen::MatrixXcd, 3> electron;
  std::array<Eigen::MatrixXcd, 3> nuclear;
  std::array<Eigen::MatrixXcd, 3> total;
};
SpinOperators spin_operators(const HilbertBasis& basis);

// Single-spin Cartesian operators (x, y, z) for spin K, m descending.
std::array<Eigen::MatrixXcd, 3> single_spin_operators(HalfInt K);

// Component of F restricted to manifold F (P_F F_k P_F), coupled basis;
// axis 0, 1, 2 = x, y, z.
Eigen::MatrixXcd manifold_spin(const HilbertBasis& basis, HalfInt F, int axis);

enum class LayoutKind {
  physical,     // aa up to L = 2I+1, bb up to L = 2I-1
  paired,  // (aa, bb) for L = 1..2I, with a phantom bb slot at L = 2I
};

struct MultipoleSlot {
  int rank = 0;
  HalfInt F;
  bool phantom = false;  // slot whose tensor does not exist (paired only)
};

class MultipoleLayout {
 public:
  MultipoleLayout(HalfInt nuclear_spin, int projection, LayoutKind kind, std::vector<MultipoleSlot> slots)
      : nuclear_spin_(nuclear_spin), projection_(projection), kind_(kind), slots_(std::move(slots)) {}

  HalfInt nuclear_spin() const { return nuclear_spin_; }
  int projection() const { return projection_; }
  LayoutKind kind() const { return kind_; }
  const std::vector<MultipoleSlot>& slots() const { return slots_; }
  int dim() const { return static_cast<int>(slots_.size()); }
  int index_of(int rank, HalfInt F) const;
  bool is_upper(int slot) const { return slots_[slot].F == upper_manifold(nuclear_spin_); }

 private:
  HalfInt nuclear_spin_;
  int projection_;
  LayoutKind kind_;
  std::vector<MultipoleSlot> slots_;
};

MultipoleLayout multipole_layout(HalfInt nuclear_spin, int projection,
                                 LayoutKind kind = LayoutKind::physical);

// weights = diag(𝔐_a, 𝔐_b); reduced = 𝔐̃ (2 x dim) picks the rank-1 slots;
// full = ℳ maps [T_{+1}; T_{-1}] to [F_x(a), F_x(b), F_y(a), F_y(b)].
struct CartesianProjection {
  Eigen::Matrix2d weights;
  Eigen::MatrixXd reduced;
  Eigen::MatrixXcd full;
};

CartesianProjection cartesian_projection(const MultipoleLayout& layout);

std::pair<MultipoleLayout, CartesianProjection> layout_and_projection(
    HalfInt nuclear_spin, int projection, LayoutKind kind = LayoutKind::physical);

}  // namespace spinopm
