#include "corrlab/nerve.hpp"

#include "corrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace corrlab {

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

std::string idx(std::initializer_list<int> v) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (int x : v) {
    os << (first ? "" : ",") << x;
    first = false;
  }
  os << ")";
  return os.str();
}

/// Vertex a of the face d_j sits at this vertex of the full simplex.
int coface(int a, int j) { return a < j ? a : a + 1; }

}  // namespace

NCorrSimplex::NCorrSimplex(std::vector<FdCstarAlgebra> algebras)
    : n_(static_cast<int>(algebras.size()) - 1), algebras_(std::move(algebras)) {
  if (n_ < 0) throw Error(ErrorKind::ShapeMismatch, "simplex needs at least one vertex");
  const std::size_t v = z(n_ + 1);
  corrs_.resize(v * v);
  isos_.resize(v * v * v);
}

std::size_t NCorrSimplex::pair(int i, int j) const {
  if (i < 0 || j > n_ || i > j) throw Error(ErrorKind::IndexOutOfRange, "corr index " + idx({i, j}));
  return z(i) * z(n_ + 1) + z(j);
}

std::size_t NCorrSimplex::triple(int i, int j, int k) const {
  if (i < 0 || k > n_ || i > j || j > k) throw Error(ErrorKind::IndexOutOfRange, "iso index " + idx({i, j, k}));
  const std::size_t v = z(n_ + 1);
  return (z(i) * v + z(j)) * v + z(k);
}

const Correspondence& NCorrSimplex::corr(int i, int j) const {
  const auto& e = corrs_[pair(i, j)];
  if (!e) throw Error(ErrorKind::ShapeMismatch, "missing correspondence " + idx({i, j}));
  return *e;
}

const CorrIso& NCorrSimplex::iso(int i, int j, int k) const {
  const auto& u = isos_[triple(i, j, k)];
  if (!u) throw Error(ErrorKind::ShapeMismatch, "missing iso " + idx({i, j, k}));
  return *u;
}

void NCorrSimplex::set_corr(int i, int j, Correspondence e) { corrs_[pair(i, j)] = std::move(e); }
void NCorrSimplex::set_iso(int i, int j, int k, CorrIso u) { isos_[triple(i, j, k)] = std::move(u); }
bool NCorrSimplex::has_corr(int i, int j) const { return corrs_[pair(i, j)].has_value(); }
bool NCorrSimplex::has_iso(int i, int j, int k) const { return isos_[triple(i, j, k)].has_value(); }

void NCorrSimplex::set_unit_data() {
  for (int i = 0; i <= n_; ++i)
    if (!has_corr(i, i)) set_corr(i, i, identity_corr(algebra(i)));
  for (int i = 0; i <= n_; ++i)
    for (int k = i; k <= n_; ++k) {
      if (!has_corr(i, k)) continue;
      if (!has_iso(i, i, k)) set_iso(i, i, k, left_unitor(corr(i, k)));
      if (!has_iso(i, k, k)) set_iso(i, k, k, right_unitor(corr(i, k)));
    }
}

double pentagon_residual(const NCorrSimplex& s, int i, int j, int k, int l) {
  const auto assoc = associator(s.corr(i, j), s.corr(j, k), s.corr(k, l));
  const auto inner = whisker_left(s.corr(i, j), s.iso(j, k, l));
  const auto lhs = block_compose(s.iso(i, j, l).unitary(), block_compose(inner.unitary(), assoc.unitary()));
  const auto outer = whisker_right(s.iso(i, j, k), s.corr(k, l));
  const auto rhs = block_compose(s.iso(i, k, l).unitary(), outer.unitary());
  return block_residual(lhs, rhs);
}

NCorrSimplex validate_simplex(const NCorrSimplex& raw, SimplexReport* report) {
  const int n = raw.dim();
  const double tol = eps();
  SimplexReport local;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const auto& e = raw.corr(i, j);
      if (!(e.src() == raw.algebra(i)) || !(e.dst() == raw.algebra(j)))
        throw Error(ErrorKind::EndpointMismatch, "E" + idx({i, j}) + " has the wrong endpoints");
    }
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int k = j; k <= n; ++k) {
        const auto& u = raw.iso(i, j, k);
        if (!corr_equal(u.src(), tensor(raw.corr(i, j), raw.corr(j, k)), tol) ||
            !corr_equal(u.dst(), raw.corr(i, k), tol))
          throw Error(ErrorKind::EndpointMismatch, "u" + idx({i, j, k}) + " has the wrong source or target");
      }

  for (int i = 0; i <= n; ++i) {
    const auto id = identity_corr(raw.algebra(i));
    if (!corr_equal(raw.corr(i, i), id, tol))
      throw ResidualError(ErrorKind::UnitConditionViolated, "E" + idx({i, i}) + " is not the identity",
                          hom_residual(raw.corr(i, i).left_action(), id.left_action()));
  }
  for (int i = 0; i <= n; ++i)
    for (int k = i; k <= n; ++k) {
      const double rl = iso_residual(raw.iso(i, i, k), left_unitor(raw.corr(i, k)));
      const double rr = iso_residual(raw.iso(i, k, k), right_unitor(raw.corr(i, k)));
      local.worst_unit = std::max({local.worst_unit, rl, rr});
      if (rl > tol) throw ResidualError(ErrorKind::UnitConditionViolated, "u" + idx({i, i, k}), rl);
      if (rr > tol) throw ResidualError(ErrorKind::UnitConditionViolated, "u" + idx({i, k, k}), rr);
    }

  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          const double r = pentagon_residual(raw, i, j, k, l);
          local.pentagons.push_back({{i, j, k, l}, r});
          local.worst_pentagon = std::max(local.worst_pentagon, r);
          if (r > tol) {
            if (report) *report = local;
            throw ResidualError(ErrorKind::PentagonViolated, "pentagon " + idx({i, j, k, l}), r);
          }
        }
  if (report) *report = local;
  return raw;
}

NCorrSimplex apply_map(const NCorrSimplex& s, const std::vector<int>& phi) {
  if (phi.empty()) throw Error(ErrorKind::NotMonotone, "empty map");
  for (std::size_t a = 0; a < phi.size(); ++a) {
    if (phi[a] < 0 || phi[a] > s.dim()) throw Error(ErrorKind::IndexOutOfRange, "map value out of range");
    if (a > 0 && phi[a] < phi[a - 1]) throw Error(ErrorKind::NotMonotone, "map must be weakly increasing");
  }
  std::vector<FdCstarAlgebra> algebras;
  for (int v : phi) algebras.push_back(s.algebra(v));
  NCorrSimplex t(std::move(algebras));
  const int m = t.dim();
  for (int a = 0; a <= m; ++a)
    for (int b = a; b <= m; ++b) {
      t.set_corr(a, b, s.corr(phi[z(a)], phi[z(b)]));
      for (int c = b; c <= m; ++c) t.set_iso(a, b, c, s.iso(phi[z(a)], phi[z(b)], phi[z(c)]));
    }
  return t;
}

NCorrSimplex face(const NCorrSimplex& s, int j) {
  if (j < 0 || j > s.dim() || s.dim() == 0) throw Error(ErrorKind::IndexOutOfRange, "face index");
  std::vector<int> phi;
  for (int a = 0; a <= s.dim(); ++a)
    if (a != j) phi.push_back(a);
  return apply_map(s, phi);
}

NCorrSimplex degeneracy(const NCorrSimplex& s, int j) {
  if (j < 0 || j > s.dim()) throw Error(ErrorKind::IndexOutOfRange, "degeneracy index");
  std::vector<int> phi;
  for (int a = 0; a <= s.dim() + 1; ++a) phi.push_back(a <= j ? a : a - 1);
  return apply_map(s, phi);
}

NCorrSimplex gamma_simplex_vertex(const FdCstarAlgebra& a) {
  NCorrSimplex s({a});
  s.set_unit_data();
  return s;
}

NCorrSimplex gamma_simplex(const std::vector<StarHom>& chain) {
  if (chain.empty()) throw Error(ErrorKind::ShapeMismatch, "gamma_simplex needs at least one hom");
  std::vector<FdCstarAlgebra> algebras{chain.front().src()};
  for (std::size_t a = 0; a < chain.size(); ++a) {
    if (!(chain[a].src() == algebras.back())) throw Error(ErrorKind::ShapeMismatch, "chain is not composable");
    algebras.push_back(chain[a].dst());
  }
  const int n = static_cast<int>(chain.size());
  std::vector<std::vector<std::optional<StarHom>>> hom(z(n + 1), std::vector<std::optional<StarHom>>(z(n + 1)));
  for (int i = 0; i < n; ++i) {
    hom[z(i)][z(i + 1)] = chain[z(i)];
    for (int j = i + 2; j <= n; ++j) hom[z(i)][z(j)] = compose_homs(chain[z(j - 1)], *hom[z(i)][z(j - 1)]);
  }
  NCorrSimplex s(algebras);
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) s.set_corr(i, j, gamma_of_hom(*hom[z(i)][z(j)]));
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        const auto g = gamma_multiplicativity(*hom[z(i)][z(j)], *hom[z(j)][z(k)]);
        s.set_iso(i, j, k, make_iso(g.src(), s.corr(i, k), g.unitary()));
      }
  s.set_unit_data();
  return validate_simplex(s);
}

double simplex_residual(const NCorrSimplex& a, const NCorrSimplex& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a.dim() != b.dim()) return inf;
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    if (!(a.algebra(i) == b.algebra(i))) return inf;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const auto& e = a.corr(i, j);
      const auto& f = b.corr(i, j);
      if (e.mult() != f.mult()) return inf;
      worst = std::max(worst, hom_residual(e.left_action(), f.left_action()));
      for (int k = j; k <= n; ++k) worst = std::max(worst, iso_residual(a.iso(i, j, k), b.iso(i, j, k)));
    }
  return worst;
}

bool simplex_equal(const NCorrSimplex& a, const NCorrSimplex& b, double tol) {
  return simplex_residual(a, b) <= tol;
}

HornSpec horn_of(const NCorrSimplex& s, int k) {
  HornSpec h;
  h.n = s.dim();
  h.k = k;
  for (int j = 0; j <= s.dim(); ++j) {
    if (j == k)
      h.faces.emplace_back();
    else
      h.faces.emplace_back(face(s, j));
  }
  return h;
}

NCorrSimplex assemble_from_faces(const HornSpec& horn) {
  const int n = horn.n;
  if (n < 1 || static_cast<int>(horn.faces.size()) != n + 1 || horn.k < 0 || horn.k > n)
    throw Error(ErrorKind::ShapeMismatch, "malformed horn");
  const double tol = eps();
  std::vector<std::optional<FdCstarAlgebra>> algebras(z(n + 1));
  for (int j = 0; j <= n; ++j) {
    const auto& f = horn.faces[z(j)];
    if (j == horn.k) {
      if (f) throw Error(ErrorKind::ShapeMismatch, "the missing face must be empty");
      continue;
    }
    if (!f) throw Error(ErrorKind::ShapeMismatch, "horn face " + std::to_string(j) + " missing");
    if (f->dim() != n - 1) throw Error(ErrorKind::ShapeMismatch, "horn face has the wrong dimension");
    for (int a = 0; a < n; ++a) {
      auto& slot = algebras[z(coface(a, j))];
      if (!slot)
        slot = f->algebra(a);
      else if (!(*slot == f->algebra(a)))
        throw Error(ErrorKind::IncompatibleFaces, "faces disagree on vertex " + std::to_string(coface(a, j)));
    }
  }
  std::vector<FdCstarAlgebra> verts;
  for (auto& a : algebras) {
    if (!a) throw Error(ErrorKind::IncompatibleFaces, "a vertex is covered by no face");
    verts.push_back(*a);
  }
  NCorrSimplex s(verts);
  for (int j = 0; j <= n; ++j) {
    if (j == horn.k) continue;
    const auto& f = *horn.faces[z(j)];
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const int ia = coface(a, j), ib = coface(b, j);
        if (!s.has_corr(ia, ib))
          s.set_corr(ia, ib, f.corr(a, b));
        else if (!corr_equal(s.corr(ia, ib), f.corr(a, b), tol))
          throw Error(ErrorKind::IncompatibleFaces, "faces disagree on E" + idx({ia, ib}));
        for (int c = b; c < n; ++c) {
          const int ic = coface(c, j);
          if (!s.has_iso(ia, ib, ic))
            s.set_iso(ia, ib, ic, f.iso(a, b, c));
          else if (iso_residual(s.iso(ia, ib, ic), f.iso(a, b, c)) > tol)
            throw ResidualError(ErrorKind::IncompatibleFaces, "faces disagree on u" + idx({ia, ib, ic}),
                                iso_residual(s.iso(ia, ib, ic), f.iso(a, b, c)));
        }
      }
  }
  return s;
}

NCorrSimplex fill_inner_horn(const HornSpec& horn) {
  if (horn.k <= 0 || horn.k >= horn.n) throw Error(ErrorKind::Unfillable, "not an inner horn");
  auto s = assemble_from_faces(horn);
  if (horn.n == 2) {
    s.set_corr(0, 2, tensor(s.corr(0, 1), s.corr(1, 2)));
    s.set_iso(0, 1, 2, identity_iso(s.corr(0, 2)));
  } else if (horn.n == 3) {
    const auto& e01 = s.corr(0, 1);
    const auto& e12 = s.corr(1, 2);
    const auto& e23 = s.corr(2, 3);
    const auto assoc = associator(e01, e12, e23);
    const auto inner = whisker_left(e01, s.iso(1, 2, 3));
    const auto outer = whisker_right(s.iso(0, 1, 2), e23);
    if (horn.k == 1) {
      // u_023 (u_012 (x) id) = u_013 (id (x) u_123) assoc
      const auto u = compose_isos(s.iso(0, 1, 3), compose_isos(inner, compose_isos(assoc, inverse_iso(outer))));
      s.set_iso(0, 2, 3, u);
    } else {
      const auto u = compose_isos(s.iso(0, 2, 3),
                                  compose_isos(outer, compose_isos(inverse_iso(assoc), inverse_iso(inner))));
      s.set_iso(0, 1, 3, u);
    }
  }
  s.set_unit_data();
  return validate_simplex(s);
}

NCorrSimplex fill_special_outer_horn(const HornSpec& horn) {
  if (horn.k != horn.n || horn.n < 2) throw Error(ErrorKind::Unfillable, "not a special outer horn");
  const int n = horn.n;
  auto s = assemble_from_faces(horn);
  const auto& last = s.corr(n - 1, n);
  const auto witness = is_equivalence(last);
  if (!witness) throw Error(ErrorKind::NotAnEquivalence, "last edge of the horn is not an equivalence");
  if (n == 2) {
    const auto& e02 = s.corr(0, 2);
    const auto e01 = tensor(e02, witness->inverse);
    s.set_corr(0, 1, e01);
    const auto u = compose_isos(right_unitor(e02), compose_isos(whisker_left(e02, witness->counit),
                                                                associator(e02, witness->inverse, last)));
    s.set_iso(0, 1, 2, u);
  } else if (n == 3) {
    const auto& e01 = s.corr(0, 1);
    const auto& e12 = s.corr(1, 2);
    // u_012 (x) id_E23 = u_023^-1 u_013 (id (x) u_123) assoc; E23 is an
    // equivalence so its action is a block permutation and we can read u_012
    // off the blocks.
    const auto x = compose_isos(inverse_iso(s.iso(0, 2, 3)),
                                compose_isos(s.iso(0, 1, 3), compose_isos(whisker_left(e01, s.iso(1, 2, 3)),
                                                                          associator(e01, e12, last))));
    const auto src = tensor(e01, e12);
    BlockOp u;
    for (int i = 0; i < last.src().num_blocks(); ++i) {
      int target = -1;
      for (int k = 0; k < last.dst().num_blocks(); ++k)
        if (last.action_mult()(i, k) == 1) target = k;
      u.push_back(src.mult(i) == 0 ? Mat(0, 0) : x.unitary()[z(target)]);
    }
    s.set_iso(0, 1, 2, make_iso(src, s.corr(0, 2), u));
  }
  s.set_unit_data();
  return validate_simplex(s);
}

}  // namespace corrlab
