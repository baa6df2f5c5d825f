#pragma once

#include "corrlab/errors.hpp"
#include "corrlab/subdivision.hpp"

#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace corrlab {

template <class S>
struct Horn {
  int n = 0;
  int k = 0;
  /// faces[j] = d_j of the missing simplex; faces[k] is empty.
  std::vector<std::optional<S>> faces;
};

/// Target quasi-category, given by its simplices and fillers.
template <class D>
concept QCOracle = requires(const D& d, const typename D::Simplex& s, const Horn<typename D::Simplex>& h) {
  { d.dim(s) } -> std::convertible_to<int>;
  { d.face(s, 0) } -> std::same_as<typename D::Simplex>;
  { d.degeneracy(s, 0) } -> std::same_as<typename D::Simplex>;
  { d.equal(s, s) } -> std::convertible_to<bool>;
  { d.fill_inner(h) } -> std::same_as<typename D::Simplex>;
  { d.fill_special(h) } -> std::same_as<typename D::Simplex>;
  { d.guided_fill(h, s) } -> std::same_as<std::optional<typename D::Simplex>>;
  { d.is_equivalence(s) } -> std::convertible_to<bool>;
  { d.max_fill_dim() } -> std::convertible_to<int>;
};

/// Functor on C*-algebras into D. `simplex` sends a composable chain
/// (starting at `a0`) to a D-simplex; `certify` returns an equivalence
/// certificate for marked arrows (corner embeddings).
template <class D>
struct CstFunctor {
  using Simplex = typename D::Simplex;
  std::string name;
  std::function<Simplex(const FdCstarAlgebra& a0, const std::vector<StarHom>& homs)> simplex;
  std::function<std::optional<std::string>(const StarHom&)> certify;
};

struct TraceEntry {
  int level = 0;
  int simplex = 0;
  std::string chain;
  int horn_dim = 0;
  int horn_k = 0;
  bool special = false;
  std::string certificate;
};

/// Data one extension run needs about its simplex.
template <class D>
struct ExtensionContext {
  using Simplex = typename D::Simplex;
  int n = 0;
  /// G on nondegenerate Sd chains.
  std::function<Simplex(const AugChain&)> sd_value;
  /// Value on the chain c of the face d_v.
  std::function<Simplex(int v, const AugChain& c)> lower;
  /// Certificate for the edge (i_k, S) closing a special horn.
  std::function<std::optional<std::string>(const AugChain& edge)> certify;
  /// Preferred value of the missing edge at n = 1.
  std::optional<Simplex> preferred_edge;
};

std::vector<AugChain> fill_targets(int n, int k, int l);
AugChain top_chain(int n);

/// G-bar: ĈSd(n) -> D for one simplex.
template <QCOracle D>
class GBar {
 public:
  using Simplex = typename D::Simplex;

  GBar(const D& d, ExtensionContext<D> ctx) : d_(&d), ctx_(std::move(ctx)) {}

  int n() const { return ctx_.n; }

  Simplex value(const AugChain& c) const {
    if (c.n != n()) throw Error(ErrorKind::ShapeViolation, "chain belongs to another subdivision");
    for (int j = 0; j < c.dim(); ++j)
      if (c.entries[static_cast<std::size_t>(j)] == c.entries[static_cast<std::size_t>(j + 1)])
        return d_->degeneracy(value(face(c, j)), j);
    const Subset top = c.top();
    if (top != full_subset(n())) {
      int v = 0;
      while (top & (Subset{1} << v)) ++v;
      return ctx_.lower(v, restrict_away(c, v));
    }
    if (c.k() <= 0) return ctx_.sd_value(c);
    const auto it = table_.find(c);
    if (it == table_.end())
      throw Error(ErrorKind::OracleFillFailed, "value of " + c.name() + " requested before it was filled");
    return it->second;
  }

  /// The recursion over k = 1..n and l ascending.
  void run(int level, int id, std::vector<TraceEntry>* trace) {
    const int n = ctx_.n;
    if (n + 1 > d_->max_fill_dim())
      throw Error(ErrorKind::DimensionTooLarge, "target fills only up to dimension " +
                                                    std::to_string(d_->max_fill_dim()));
    for (int k = 1; k <= n; ++k)
      for (int l = k + 1; l <= n + 1; ++l)
        for (const auto& c : fill_targets(n, k, l)) {
          const auto missing = face(c, k + 1);
          if (table_.count(c) || table_.count(missing))
            throw Error(ErrorKind::OracleFillFailed, "horn at " + c.name() + " already has a value");
          Horn<Simplex> horn{l, k + 1, {}};
          for (int j = 0; j <= l; ++j) {
            if (j == k + 1) {
              horn.faces.emplace_back();
              continue;
            }
            const auto f = face(c, j);
            // faces j <= k lower k, faces j >= k+2 lower l
            if (!(j <= k ? f.k() < k : f.dim() < l))
              throw Error(ErrorKind::OracleFillFailed, "recursion order broken at " + c.name());
            horn.faces.emplace_back(value(f));
          }
          Simplex filled;
          std::string cert;
          const bool special = l == k + 1;
          try {
            if (!special) {
              filled = d_->fill_inner(horn);
            } else {
              const AugChain edge = make_aug_chain(n, {c.entries[static_cast<std::size_t>(k)], c.entries.back()});
              const auto certificate = ctx_.certify(edge);
              if (!certificate || !d_->is_equivalence(value(edge)))
                throw Error(ErrorKind::NotAnEquivalence, "edge " + edge.name() + " is not certified");
              cert = *certificate;
              std::optional<Simplex> guided;
              if (ctx_.preferred_edge && l == 2) {
                guided = d_->guided_fill(horn, *ctx_.preferred_edge);
                if (!guided) throw Error(ErrorKind::OracleFillFailed, "preferred edge does not fit " + c.name());
              }
              filled = guided ? *guided : d_->fill_special(horn);
            }
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::OracleFillFailed) throw;
            throw Error(ErrorKind::OracleFillFailed, "horn " + c.name() + ": " + e.what());
          }
          for (int j = 0; j <= l; ++j)
            if (j != k + 1 && !d_->equal(d_->face(filled, j), *horn.faces[static_cast<std::size_t>(j)]))
              throw Error(ErrorKind::OracleFillFailed, "filler of " + c.name() + " changed face " + std::to_string(j));
          table_.emplace(missing, d_->face(filled, k + 1));
          table_.emplace(c, std::move(filled));
          if (trace) trace->push_back({level, id, c.name(), l, k + 1, special, cert});
        }
  }

  /// Post-hoc check of faces and of agreement with G on the Sd chains that
  /// reach the top vertex set. Throws CompatibilityViolated.
  void check() const {
    const int n = ctx_.n;
    for (int l = 0; l <= n + 1; ++l)
      for (const auto& c : enumerate_csd(n, l)) {
        if (!c.nondegenerate()) continue;
        const auto v = value(c);
        if (d_->dim(v) != l) throw Error(ErrorKind::CompatibilityViolated, c.name() + " has the wrong dimension");
        if (c.in_sd() && c.top() == full_subset(n) && !d_->equal(v, ctx_.sd_value(c)))
          throw Error(ErrorKind::CompatibilityViolated, c.name() + " differs from G");
        if (l == 0) continue;
        for (int j = 0; j <= l; ++j)
          if (!d_->equal(d_->face(v, j), value(face(c, j))))
            throw Error(ErrorKind::CompatibilityViolated, c.name() + " face " + std::to_string(j));
      }
  }

  std::size_t filled() const { return table_.size(); }

 private:
  const D* d_;
  ExtensionContext<D> ctx_;
  std::map<AugChain, Simplex> table_;
};

/// j with sigma = s_j d_j sigma, if any.
std::optional<int> degenerate_index(const NCorrSimplex& sigma);

/// Faces of a composable chain: drop an end or compose two neighbours.
std::vector<StarHom> chain_face(const std::vector<StarHom>& chain, int v);

/// F-bar on simplices of the nerve, with memo and trace.
template <QCOracle D>
class Extender {
 public:
  using Simplex = typename D::Simplex;
  using Hint = std::optional<std::vector<StarHom>>;

  Extender(D d, CstFunctor<D> f, bool guided = false, bool check = true)
      : d_(std::move(d)), f_(std::move(f)), guided_(guided), check_(check) {}

  const D& oracle() const { return d_; }
  const CstFunctor<D>& functor() const { return f_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  std::size_t memo_size() const { return memo_.size(); }

  /// G-bar of sigma; `hint` is a chain with sigma = gamma_simplex(hint).
  const GBar<D>& extend(const NCorrSimplex& sigma, const Hint& hint = std::nullopt) {
    if (sigma.dim() > 3) throw Error(ErrorKind::DimensionTooLarge, "extension supports n <= 3");
    for (const auto& entry : memo_)
      if (entry.first.dim() == sigma.dim() && entry.first.algebras() == sigma.algebras() &&
          simplex_equal(entry.first, sigma, eps()))
        return *entry.second;
    const int n = sigma.dim();
    std::vector<const GBar<D>*> faces;
    for (int v = 0; v <= n && n > 0; ++v)
      faces.push_back(&extend(face(sigma, v), hint ? Hint(chain_face(*hint, v)) : std::nullopt));
    auto functor = std::make_shared<SubdivisionFunctor>(subdivision_functor(sigma));
    ExtensionContext<D> ctx;
    ctx.n = n;
    ctx.sd_value = [this, functor](const AugChain& c) {
      return f_.simplex(functor->algebra(c.entries.front()), functor->homs_along(c.entries));
    };
    ctx.lower = [faces](int v, const AugChain& c) { return faces[static_cast<std::size_t>(v)]->value(c); };
    ctx.certify = [this, functor](const AugChain& edge) {
      return f_.certify(functor->hom(edge.entries.front(), edge.entries.back()));
    };
    if (guided_ && hint && n == 1) ctx.preferred_edge = f_.simplex(sigma.algebra(0), *hint);
    auto g = std::make_unique<GBar<D>>(d_, std::move(ctx));
    g->run(n, static_cast<int>(memo_.size()), &trace_);
    if (check_) g->check();
    return store(sigma, std::move(g));
  }

  /// Degenerate simplices go to degeneracies of their faces.
  Simplex bar_F(const NCorrSimplex& sigma, const Hint& hint = std::nullopt) {
    if (const auto j = degenerate_index(sigma))
      return d_.degeneracy(bar_F(face(sigma, *j), hint ? Hint(chain_face(*hint, *j)) : std::nullopt), *j);
    return extend(sigma, hint).value(top_chain(sigma.dim()));
  }

 private:
  const GBar<D>& store(const NCorrSimplex& sigma, std::unique_ptr<GBar<D>> g) {
    memo_.emplace_back(sigma, std::move(g));
    return *memo_.back().second;
  }

  D d_;
  CstFunctor<D> f_;
  bool guided_;
  bool check_;
  std::vector<std::pair<NCorrSimplex, std::unique_ptr<GBar<D>>>> memo_;
  std::vector<TraceEntry> trace_;
};

// ---------------------------------------------------------------------------
// Targets.

/// Simplex of the nerve of free abelian groups: ranks and all composites.
struct K0Simplex {
  std::vector<int> ranks;
  /// maps[i][j] : Z^{r_i} -> Z^{r_j} for i <= j.
  std::vector<std::vector<IntMat>> maps;

  int dim() const { return static_cast<int>(ranks.size()) - 1; }
  const IntMat& map(int i, int j) const { return maps.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)); }
};

/// From ranks and the spine maps r_i -> r_{i+1}.
K0Simplex k0_simplex(const std::vector<int>& ranks, const std::vector<IntMat>& spine);
bool k0_equal(const K0Simplex& a, const K0Simplex& b);

class K0Nerve {
 public:
  using Simplex = K0Simplex;
  int dim(const Simplex& s) const { return s.dim(); }
  Simplex face(const Simplex& s, int j) const;
  Simplex degeneracy(const Simplex& s, int j) const;
  bool equal(const Simplex& a, const Simplex& b) const { return k0_equal(a, b); }
  Simplex fill_inner(const Horn<Simplex>& h) const;
  Simplex fill_special(const Horn<Simplex>& h) const;
  std::optional<Simplex> guided_fill(const Horn<Simplex>& h, const Simplex& edge) const;
  bool is_equivalence(const Simplex& edge) const;
  int max_fill_dim() const { return 8; }
};

class NCorrNerve {
 public:
  using Simplex = NCorrSimplex;
  int dim(const Simplex& s) const { return s.dim(); }
  Simplex face(const Simplex& s, int j) const { return corrlab::face(s, j); }
  Simplex degeneracy(const Simplex& s, int j) const { return corrlab::degeneracy(s, j); }
  bool equal(const Simplex& a, const Simplex& b) const;
  Simplex fill_inner(const Horn<Simplex>& h) const;
  Simplex fill_special(const Horn<Simplex>& h) const;
  std::optional<Simplex> guided_fill(const Horn<Simplex>& h, const Simplex& edge) const;
  bool is_equivalence(const Simplex& edge) const;
  int max_fill_dim() const { return 4; }
};

/// K_0 on finite-dimensional algebras: Z^{#blocks}, multiplicity transposes.
CstFunctor<K0Nerve> k0_functor();
/// Checks every marked arrow (corner embedding) of a diagram. Throws
/// NotStableOnDiagram.
void check_stable_on(const CstFunctor<K0Nerve>& f, const std::vector<StarHom>& marked);
/// A K_0-type functor conjugated by unimodular matrices Q_A that depend only
/// on A and the salt.
IntMat k0_twist(const FdCstarAlgebra& a, unsigned salt);
CstFunctor<K0Nerve> twisted_k0_functor(unsigned salt);

/// Gamma into the nerve of correspondences.
CstFunctor<NCorrNerve> gamma_functor();

// ---------------------------------------------------------------------------
// Relative extension over a 1-simplex.

/// h on (chain, s) where s is a weakly increasing 0/1 sequence of the chain's length.
using K0Homotopy =
    std::function<K0Simplex(const FdCstarAlgebra& a0, const std::vector<StarHom>& homs, const std::vector<int>& s)>;

/// The homotopy K0 -> twisted K0 with components Q_A.
K0Homotopy k0_twist_homotopy(unsigned salt);

/// H on NCorr x Δ^m for m <= 1, from h and the boundary extensions.
class RelativeExtender {
 public:
  using Hint = std::optional<std::vector<StarHom>>;
  /// m = 0: boundary0 alone is used and h must agree with it.
  RelativeExtender(int m, K0Homotopy h, Extender<K0Nerve>* boundary0, Extender<K0Nerve>* boundary1);

  const GBar<K0Nerve>& extend(const NCorrSimplex& sigma, const std::vector<int>& s, const Hint& hint = std::nullopt);
  K0Simplex value(const NCorrSimplex& sigma, const std::vector<int>& s, const Hint& hint = std::nullopt);
  /// h restricted to the boundary must equal the boundary on Gamma of the
  /// given chains. Throws BoundaryMismatch.
  void check_boundary(const std::vector<std::vector<StarHom>>& chains, const std::vector<FdCstarAlgebra>& objects);

 private:
  int m_;
  K0Homotopy h_;
  K0Nerve d_;
  Extender<K0Nerve>* boundary_[2];
  std::vector<std::tuple<NCorrSimplex, std::vector<int>, std::unique_ptr<GBar<K0Nerve>>>> memo_;
};

}  // namespace corrlab
