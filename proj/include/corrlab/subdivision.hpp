#pragma once

#include "corrlab/nerve.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace corrlab {

/// Nonempty subset of [n] as a bit mask.
using Subset = std::uint32_t;

int subset_max(Subset s);
int subset_size(Subset s);
Subset full_subset(int n);
std::string subset_name(Subset s);

/// Largest n the enumerations accept.
inline constexpr int kMaxSubdivisionDim = 4;

/// Chain S_0 <= ... <= S_l of nonempty subsets of [n].
struct SubsetChain {
  int n = 0;
  std::vector<Subset> sets;

  int dim() const { return static_cast<int>(sets.size()) - 1; }
  bool nondegenerate() const;
  friend bool operator==(const SubsetChain&, const SubsetChain&) = default;
};

/// Simplex (i_0, ..., i_k, S_{k+1}, ..., S_l) of the augmented subdivision.
/// Stored as one mask per entry: the prefix entries are the singletons
/// {i_0}, ..., {i_k}, every suffix entry has at least two elements, so the
/// split point is implicit.
struct AugChain {
  int n = 0;
  std::vector<Subset> entries;

  int dim() const { return static_cast<int>(entries.size()) - 1; }
  /// Index of the last prefix entry; -1 without prefix.
  int k() const;
  /// S_l; for a prefix-only chain the set {i_0, ..., i_k}.
  Subset top() const;
  bool nondegenerate() const;
  /// Lies in Sd: the entries form an inclusion chain.
  bool in_sd() const;
  std::string name() const;

  friend bool operator==(const AugChain&, const AugChain&) = default;
  friend auto operator<=>(const AugChain& a, const AugChain& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    return a.entries <=> b.entries;
  }
};

/// Validates the shape. Throws ShapeViolation.
AugChain make_aug_chain(int n, std::vector<Subset> entries);
AugChain aug_from_prefix(int n, const std::vector<int>& prefix, const std::vector<Subset>& suffix);
AugChain aug_from_sd(const SubsetChain& c);

/// All l-simplices, degenerate ones included. Throws DimensionTooLarge.
std::vector<SubsetChain> enumerate_sd(int n, int l);
std::vector<AugChain> enumerate_csd(int n, int l);

/// Throws IndexOutOfRange, ShapeViolation.
AugChain face(const AugChain& c, int j);
AugChain degeneracy(const AugChain& c, int j);

/// phi_* for a weakly increasing phi: [m] -> [n]. Throws NotMonotone.
AugChain phi_star(const std::vector<int>& phi, int n, const AugChain& c);

/// Chain of d_v(simplex) whose image under the v-th coface is c; requires
/// v not to occur in c.
AugChain restrict_away(const AugChain& c, int v);

/// E_S = sum over l in S (increasing) of E_{l, max S}.
HilbertModule module_E_S(const NCorrSimplex& sigma, Subset s);
FdCstarAlgebra algebra_A_S(const NCorrSimplex& sigma, Subset s);

/// Throws NotNested.
StarHom f_ST(const NCorrSimplex& sigma, Subset s, Subset t);

struct FunctorReport {
  double worst = 0.0;
  int chains = 0;
};

/// The functor Sd(n) -> C*-algebras of a simplex.
class SubdivisionFunctor {
 public:
  SubdivisionFunctor() = default;
  explicit SubdivisionFunctor(NCorrSimplex sigma);

  int n() const { return sigma_.dim(); }
  const NCorrSimplex& simplex() const { return sigma_; }
  const FdCstarAlgebra& algebra(Subset s) const;
  /// Cached f_ST.
  const StarHom& hom(Subset s, Subset t) const;
  /// Homs along a chain; identities for repeated entries.
  std::vector<StarHom> homs_along(const std::vector<Subset>& chain) const;

  /// Checks f_TU f_ST = f_SU for every chain. Throws FunctorialityViolated.
  FunctorReport check(double tol) const;

 private:
  NCorrSimplex sigma_;
  std::map<Subset, FdCstarAlgebra> algebras_;
  mutable std::map<std::pair<Subset, Subset>, StarHom> homs_;
};

/// Builds and checks the functor. Throws FunctorialityViolated.
SubdivisionFunctor subdivision_functor(const NCorrSimplex& sigma, FunctorReport* report = nullptr);

}  // namespace corrlab
