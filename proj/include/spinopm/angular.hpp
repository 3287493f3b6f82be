#pragma once

#include <map>
#include <tuple>

#include "spinopm/half_int.hpp"

namespace spinopm {

// Condon-Shortley Clebsch-Gordan coefficient C^{J M}_{j1 m1; j2 m2}.
// Throws std::invalid_argument when a (j, m) pair is malformed.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

// {a b c; d e f}
double wigner_6j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f);

// {a b c; d e f; g h i}
double wigner_9j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f, HalfInt g,
                 HalfInt h, HalfInt i);

// W(abcd; ef) = (-1)^{a+b+c+d} {a b e; d c f}
double racah_w(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f);

// Overlaps between coupled tensors T_LM(FF') and products of nuclear and
// electron tensors T_Λμ(II) ⊗ T_jm(SS), for a fixed nuclear spin.
//
//   x(Λ, F, F')    = <T_Λμ(FF') | T_Λμ(II) ⊗ T_00(SS)>
//   y(L, F, F')    = <T_LM(FF') | T_00(II) ⊗ T_LM(SS)>
//   z(Λ, F, L, M)  = √(2[I]) <T†_LM(FF) | T_Λ0(II) ⊗ T_1M(SS)>
//   zp(Λ, F, L, M) = √(2[I]) <T†_LM(FF) | T_ΛM(II) ⊗ T_10(SS)>
//
// z and zp carry the geometry of the spin-exchange and pumping couplings
// between ranks L and Λ = L ± 1.
class CouplingCoeffs {
 public:
  using RankKey = std::tuple<int, int, int>;           // (rank, 2F, 2F')
  using ProjKey = std::tuple<int, int, int, int>;      // (Λ, 2F, L, M)

  explicit CouplingCoeffs(HalfInt nuclear_spin) : nuclear_spin_(nuclear_spin) {}

  HalfInt nuclear_spin() const { return nuclear_spin_; }

  // Absent entries are zero by selection rules.
  double x(int rank, HalfInt f, HalfInt fp) const { return lookup(x_, {rank, f.twice(), fp.twice()}); }
  double x(int rank, HalfInt f) const { return x(rank, f, f); }
  double y(int rank, HalfInt f, HalfInt fp) const { return lookup(y_, {rank, f.twice(), fp.twice()}); }
  double y(int rank, HalfInt f) const { return y(rank, f, f); }
  double z(int lambda, HalfInt f, int rank, int proj) const {
    return lookup(z_, {lambda, f.twice(), rank, proj});
  }
  double zp(int lambda, HalfInt f, int rank, int proj) const {
    return lookup(zp_, {lambda, f.twice(), rank, proj});
  }

  const std::map<RankKey, double>& x_table() const { return x_; }
  const std::map<RankKey, double>& y_table() const { return y_; }
  const std::map<ProjKey, double>& z_table() const { return z_; }
  const std::map<ProjKey, double>& zp_table() const { return zp_; }

  void set_x(int rank, HalfInt f, HalfInt fp, double v) { x_[{rank, f.twice(), fp.twice()}] = v; }
  void set_y(int rank, HalfInt f, HalfInt fp, double v) { y_[{rank, f.twice(), fp.twice()}] = v; }
  void set_z(int lambda, HalfInt f, int rank, int proj, double v) { z_[{lambda, f.twice(), rank, proj}] = v; }
  void set_zp(int lambda, HalfInt f, int rank, int proj, double v) {
    zp_[{lambda, f.twice(), rank, proj}] = v;
  }

 private:
  template <class Map>
  static double lookup(const Map& m, const typename Map::key_type& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }

  HalfInt nuclear_spin_;
  std::map<RankKey, double> x_;
  std::map<RankKey, double> y_;
  std::map<ProjKey, double> z_;
  std::map<ProjKey, double> zp_;
};

// All coefficients for the two ground manifolds of nuclear spin I, from the
// 9j closed forms. z/zp are tabulated for 0 <= L <= 2I+1, |M| <= L.
CouplingCoeffs ht_coefficients(HalfInt nuclear_spin);

}  // namespace spinopm
