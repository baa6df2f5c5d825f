#pragma once

#include "corrlab/bicat.hpp"

#include <optional>
#include <vector>

namespace corrlab {

/// n-simplex (A_i, E_ij, u_ijk) of the nerve of the correspondence bicategory.
/// Storage is dense; only i <= j (<= k) entries are meaningful.
class NCorrSimplex {
 public:
  NCorrSimplex() = default;
  explicit NCorrSimplex(std::vector<FdCstarAlgebra> algebras);

  int dim() const noexcept { return n_; }
  const FdCstarAlgebra& algebra(int i) const { return algebras_.at(static_cast<std::size_t>(i)); }
  const std::vector<FdCstarAlgebra>& algebras() const noexcept { return algebras_; }
  const Correspondence& corr(int i, int j) const;
  const CorrIso& iso(int i, int j, int k) const;

  void set_corr(int i, int j, Correspondence e);
  void set_iso(int i, int j, int k, CorrIso u);
  bool has_corr(int i, int j) const;
  bool has_iso(int i, int j, int k) const;

  /// E_ii = identity, u_iik = left unitor, u_ikk = right unitor.
  void set_unit_data();

 private:
  std::size_t pair(int i, int j) const;
  std::size_t triple(int i, int j, int k) const;

  int n_ = -1;
  std::vector<FdCstarAlgebra> algebras_;
  std::vector<std::optional<Correspondence>> corrs_;
  std::vector<std::optional<CorrIso>> isos_;
};

/// Residual of the pentagon at (i,j,k,l):
///   u_ijl (id (x) u_jkl) assoc  vs  u_ikl (u_ijk (x) id).
double pentagon_residual(const NCorrSimplex& s, int i, int j, int k, int l);

struct SimplexReport {
  double worst_unit = 0.0;
  double worst_pentagon = 0.0;
  std::vector<std::pair<std::vector<int>, double>> pentagons;
};

/// Checks endpoints, unit conditions and every pentagon with i < j < k < l
/// (the others follow from the unit conditions). Throws
/// UnitConditionViolated / PentagonViolated / EndpointMismatch.
NCorrSimplex validate_simplex(const NCorrSimplex& raw, SimplexReport* report = nullptr);

/// Pulls back along a weakly increasing map [m] -> [n] given by its values.
/// Throws NotMonotone.
NCorrSimplex apply_map(const NCorrSimplex& s, const std::vector<int>& phi);
NCorrSimplex face(const NCorrSimplex& s, int j);
NCorrSimplex degeneracy(const NCorrSimplex& s, int j);

/// Simplex of a chain A_0 -> ... -> A_n of homs.
NCorrSimplex gamma_simplex(const std::vector<StarHom>& chain);
NCorrSimplex gamma_simplex_vertex(const FdCstarAlgebra& a);

bool simplex_equal(const NCorrSimplex& a, const NCorrSimplex& b, double tol);
double simplex_residual(const NCorrSimplex& a, const NCorrSimplex& b);

struct HornSpec {
  int n = 0;
  int k = 0;
  /// faces[j] = d_j of the missing simplex; faces[k] is empty.
  std::vector<std::optional<NCorrSimplex>> faces;
};

/// The horn of an existing simplex.
HornSpec horn_of(const NCorrSimplex& s, int k);

/// 0 < k < n. Throws IncompatibleFaces.
NCorrSimplex fill_inner_horn(const HornSpec& horn);

/// k = n with E_{n-1,n} an equivalence. Throws NotAnEquivalence,
/// IncompatibleFaces.
NCorrSimplex fill_special_outer_horn(const HornSpec& horn);

/// Assembles every E and u the faces provide (checking agreement); the
/// result may lack data that only the missing face carries.
NCorrSimplex assemble_from_faces(const HornSpec& horn);

}  // namespace corrlab
