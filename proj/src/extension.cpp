#include "corrlab/extension.hpp"

#include <sstream>

namespace corrlab {

namespace {

Subset bit(int i) { return Subset{1} << i; }

void strict_chains(Subset from, Subset to, int count, std::vector<Subset>& cur,
                   std::vector<std::vector<Subset>>& out) {
  if (count == 1) {
    if (from == to) out.push_back(cur);
    return;
  }
  // proper supersets of `from` inside `to`
  const Subset free = to & ~from;
  for (Subset extra = free; extra; extra = (extra - 1) & free) {
    cur.push_back(from | extra);
    strict_chains(from | extra, to, count - 1, cur, out);
    cur.pop_back();
  }
}

std::string int_mat_string(const IntMat& m) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) os << ';';
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
  }
  os << ']';
  return os.str();
}

int coface(int a, int j) { return a < j ? a : a + 1; }

IntMat int_identity(int r) { return IntMat::Identity(r, r); }

HornSpec to_spec(const Horn<NCorrSimplex>& h) { return HornSpec{h.n, h.k, h.faces}; }

using MaybeMaps = std::vector<std::vector<std::optional<IntMat>>>;

struct K0Partial {
  std::vector<int> ranks;
  MaybeMaps maps;
};

K0Partial k0_assemble(const Horn<K0Simplex>& h) {
  const int n = h.n;
  if (n < 2 || static_cast<int>(h.faces.size()) != n + 1)
    throw Error(ErrorKind::Unfillable, "horn must have n + 1 >= 3 face slots");
  K0Partial p{std::vector<int>(static_cast<std::size_t>(n + 1), -1),
              MaybeMaps(static_cast<std::size_t>(n + 1), std::vector<std::optional<IntMat>>(static_cast<std::size_t>(n + 1)))};
  for (int j = 0; j <= n; ++j) {
    if (j == h.k) continue;
    const auto& f = h.faces[static_cast<std::size_t>(j)];
    if (!f) throw Error(ErrorKind::Unfillable, "horn is missing face " + std::to_string(j));
    if (f->dim() != n - 1) throw Error(ErrorKind::IncompatibleFaces, "face of the wrong dimension");
    for (int a = 0; a < n; ++a) {
      int& r = p.ranks[static_cast<std::size_t>(coface(a, j))];
      if (r >= 0 && r != f->ranks[static_cast<std::size_t>(a)])
        throw Error(ErrorKind::IncompatibleFaces, "faces disagree on vertex " + std::to_string(coface(a, j)));
      r = f->ranks[static_cast<std::size_t>(a)];
    }
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        auto& slot = p.maps[static_cast<std::size_t>(coface(a, j))][static_cast<std::size_t>(coface(b, j))];
        if (slot && *slot != f->map(a, b))
          throw Error(ErrorKind::IncompatibleFaces,
                      "faces disagree on the map " + std::to_string(coface(a, j)) + std::to_string(coface(b, j)));
        slot = f->map(a, b);
      }
  }
  return p;
}

K0Simplex k0_finish(K0Partial p) {
  const int n = static_cast<int>(p.ranks.size()) - 1;
  K0Simplex s{p.ranks, std::vector<std::vector<IntMat>>(static_cast<std::size_t>(n + 1),
                                                          std::vector<IntMat>(static_cast<std::size_t>(n + 1)))};
  for (int i = 0; i <= n; ++i) {
    s.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = int_identity(p.ranks[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j <= n; ++j) {
      const auto& m = p.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!m) throw Error(ErrorKind::Unfillable, "no face carries the map " + std::to_string(i) + std::to_string(j));
      s.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = *m;
    }
  }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        if (s.map(i, k) != s.map(j, k) * s.map(i, j))
          throw Error(ErrorKind::IncompatibleFaces,
                      "maps do not compose at " + std::to_string(i) + std::to_string(j) + std::to_string(k));
  return s;
}

K0Simplex k0_apply(const K0Simplex& s, const std::vector<int>& phi) {
  const int m = static_cast<int>(phi.size()) - 1;
  K0Simplex out;
  out.maps.assign(static_cast<std::size_t>(m + 1), std::vector<IntMat>(static_cast<std::size_t>(m + 1)));
  for (int a = 0; a <= m; ++a) {
    out.ranks.push_back(s.ranks.at(static_cast<std::size_t>(phi[static_cast<std::size_t>(a)])));
    for (int b = a; b <= m; ++b)
      out.maps[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          s.map(phi[static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(b)]);
  }
  return out;
}

IntMat k0_of_hom(const StarHom& phi) { return phi.mult_matrix().transpose(); }

std::vector<int> k0_ranks(const FdCstarAlgebra& a0, const std::vector<StarHom>& homs) {
  std::vector<int> ranks{a0.num_blocks()};
  for (const auto& h : homs) {
    if (!(h.src() == a0) && ranks.size() == 1) throw Error(ErrorKind::EndpointMismatch, "chain does not start at a0");
    ranks.push_back(h.dst().num_blocks());
  }
  return ranks;
}

IntMat int_inverse_or_throw(const IntMat& m) {
  bool ok = false;
  IntMat inv = integer_inverse(m, ok);
  if (!ok) throw Error(ErrorKind::NotAnEquivalence, "map is not invertible over Z");
  return inv;
}

}  // namespace

std::vector<AugChain> fill_targets(int n, int k, int l) {
  std::vector<AugChain> out;
  if (k < 1 || k > n || l <= k) return out;
  const Subset full = full_subset(n);
  // prefixes: k + 1 distinct increasing vertices
  for (Subset p = 1; p <= full; ++p) {
    if (subset_size(p) != k + 1) continue;
    std::vector<Subset> prefix;
    for (int i = 0; i <= n; ++i)
      if (p & bit(i)) prefix.push_back(bit(i));
    std::vector<std::vector<Subset>> suffixes;
    std::vector<Subset> cur{p};
    strict_chains(p, full, l - k, cur, suffixes);
    for (const auto& suffix : suffixes) {
      auto entries = prefix;
      entries.insert(entries.end(), suffix.begin(), suffix.end());
      out.push_back(make_aug_chain(n, std::move(entries)));
    }
  }
  return out;
}

AugChain top_chain(int n) {
  std::vector<Subset> entries;
  for (int i = 0; i <= n; ++i) entries.push_back(bit(i));
  return make_aug_chain(n, std::move(entries));
}

std::optional<int> degenerate_index(const NCorrSimplex& sigma) {
  for (int j = 0; j < sigma.dim(); ++j) {
    if (!(sigma.algebra(j) == sigma.algebra(j + 1))) continue;
    if (!corr_equal(sigma.corr(j, j + 1), identity_corr(sigma.algebra(j)), eps())) continue;
    if (simplex_equal(sigma, degeneracy(face(sigma, j), j), eps())) return j;
  }
  return std::nullopt;
}

std::vector<StarHom> chain_face(const std::vector<StarHom>& chain, int v) {
  const int n = static_cast<int>(chain.size());
  if (v < 0 || v > n) throw Error(ErrorKind::IndexOutOfRange, "face index out of range");
  if (n == 0) throw Error(ErrorKind::IndexOutOfRange, "a vertex has no faces");
  std::vector<StarHom> out;
  for (int i = 0; i < n; ++i) {
    if (v == 0 && i == 0) continue;
    if (v == n && i == n - 1) continue;
    if (v > 0 && v < n && i == v - 1) continue;
    if (v > 0 && v < n && i == v) {
      out.push_back(compose_homs(chain[static_cast<std::size_t>(v)], chain[static_cast<std::size_t>(v - 1)]));
      continue;
    }
    out.push_back(chain[static_cast<std::size_t>(i)]);
  }
  return out;
}

// ---------------------------------------------------------------------------

K0Simplex k0_simplex(const std::vector<int>& ranks, const std::vector<IntMat>& spine) {
  const int n = static_cast<int>(ranks.size()) - 1;
  if (n < 0 || static_cast<int>(spine.size()) != n) throw Error(ErrorKind::ShapeMismatch, "spine length must be n");
  K0Simplex s{ranks, std::vector<std::vector<IntMat>>(static_cast<std::size_t>(n + 1),
                                                       std::vector<IntMat>(static_cast<std::size_t>(n + 1)))};
  for (int i = 0; i <= n; ++i) {
    IntMat acc = int_identity(ranks[static_cast<std::size_t>(i)]);
    s.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = acc;
    for (int j = i + 1; j <= n; ++j) {
      const IntMat& m = spine[static_cast<std::size_t>(j - 1)];
      if (m.rows() != ranks[static_cast<std::size_t>(j)] || m.cols() != ranks[static_cast<std::size_t>(j - 1)])
        throw Error(ErrorKind::ShapeMismatch, "spine map has the wrong shape");
      acc = m * acc;
      s.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  }
  return s;
}

bool k0_equal(const K0Simplex& a, const K0Simplex& b) {
  if (a.ranks != b.ranks) return false;
  for (int i = 0; i <= a.dim(); ++i)
    for (int j = i + 1; j <= a.dim(); ++j)
      if (a.map(i, j) != b.map(i, j)) return false;
  return true;
}

K0Simplex K0Nerve::face(const K0Simplex& s, int j) const {
  if (j < 0 || j > s.dim() || s.dim() == 0) throw Error(ErrorKind::IndexOutOfRange, "face index out of range");
  std::vector<int> phi;
  for (int a = 0; a <= s.dim(); ++a)
    if (a != j) phi.push_back(a);
  return k0_apply(s, phi);
}

K0Simplex K0Nerve::degeneracy(const K0Simplex& s, int j) const {
  if (j < 0 || j > s.dim()) throw Error(ErrorKind::IndexOutOfRange, "degeneracy index out of range");
  std::vector<int> phi;
  for (int a = 0; a <= s.dim(); ++a) {
    phi.push_back(a);
    if (a == j) phi.push_back(a);
  }
  return k0_apply(s, phi);
}

K0Simplex K0Nerve::fill_inner(const Horn<K0Simplex>& h) const {
  if (h.k <= 0 || h.k >= h.n) throw Error(ErrorKind::Unfillable, "not an inner horn");
  auto p = k0_assemble(h);
  if (h.n == 2) p.maps[0][2] = *p.maps[1][2] * *p.maps[0][1];
  return k0_finish(std::move(p));
}

K0Simplex K0Nerve::fill_special(const Horn<K0Simplex>& h) const {
  if (h.k != h.n || h.n < 2) throw Error(ErrorKind::Unfillable, "not a special outer horn");
  auto p = k0_assemble(h);
  const auto last = static_cast<std::size_t>(h.n);
  const IntMat inv = int_inverse_or_throw(*p.maps[last - 1][last]);
  if (h.n == 2) p.maps[0][1] = inv * *p.maps[0][2];
  return k0_finish(std::move(p));
}

std::optional<K0Simplex> K0Nerve::guided_fill(const Horn<K0Simplex>& h, const K0Simplex& edge) const {
  const K0Simplex s = h.k < h.n ? fill_inner(h) : fill_special(h);
  if (h.n != 2 || edge.dim() != 1) return s;
  const int a = h.k == 0 ? 1 : 0;
  const int b = h.k == 2 ? 1 : 2;
  if (s.ranks[static_cast<std::size_t>(a)] != edge.ranks[0] || s.ranks[static_cast<std::size_t>(b)] != edge.ranks[1] ||
      s.map(a, b) != edge.map(0, 1))
    return std::nullopt;
  return s;
}

bool K0Nerve::is_equivalence(const K0Simplex& edge) const {
  if (edge.dim() != 1 || edge.ranks[0] != edge.ranks[1]) return false;
  bool ok = false;
  integer_inverse(edge.map(0, 1), ok);
  return ok;
}

// ---------------------------------------------------------------------------

bool NCorrNerve::equal(const NCorrSimplex& a, const NCorrSimplex& b) const {
  return a.dim() == b.dim() && a.algebras() == b.algebras() && simplex_equal(a, b, eps());
}

NCorrSimplex NCorrNerve::fill_inner(const Horn<NCorrSimplex>& h) const { return fill_inner_horn(to_spec(h)); }

NCorrSimplex NCorrNerve::fill_special(const Horn<NCorrSimplex>& h) const {
  return fill_special_outer_horn(to_spec(h));
}

std::optional<NCorrSimplex> NCorrNerve::guided_fill(const Horn<NCorrSimplex>& h, const NCorrSimplex& edge) const {
  if (h.n != 2 || edge.dim() != 1) return h.k < h.n ? fill_inner(h) : fill_special(h);
  if (h.k == 0) return std::nullopt;
  const NCorrSimplex f = h.k == 1 ? fill_inner(h) : fill_special(h);
  const Correspondence& pref = edge.corr(0, 1);
  NCorrSimplex out(f.algebras());
  out.set_corr(0, 1, f.corr(0, 1));
  out.set_corr(1, 2, f.corr(1, 2));
  out.set_corr(0, 2, f.corr(0, 2));
  if (h.k == 2) {
    if (!(pref.src() == f.algebra(0)) || !(pref.dst() == f.algebra(1))) return std::nullopt;
    const auto t = normal_form_iso(pref, f.corr(0, 1));
    if (!t) return std::nullopt;
    out.set_corr(0, 1, pref);
    out.set_iso(0, 1, 2, compose_isos(f.iso(0, 1, 2), whisker_right(*t, f.corr(1, 2))));
  } else {
    if (!(pref.src() == f.algebra(0)) || !(pref.dst() == f.algebra(2))) return std::nullopt;
    const auto t = normal_form_iso(pref, f.corr(0, 2));
    if (!t) return std::nullopt;
    out.set_corr(0, 2, pref);
    out.set_iso(0, 1, 2, compose_isos(inverse_iso(*t), f.iso(0, 1, 2)));
  }
  out.set_unit_data();
  return validate_simplex(out);
}

bool NCorrNerve::is_equivalence(const NCorrSimplex& edge) const {
  return edge.dim() == 1 && corrlab::is_equivalence(edge.corr(0, 1)).has_value();
}

// ---------------------------------------------------------------------------

CstFunctor<K0Nerve> k0_functor() {
  CstFunctor<K0Nerve> f;
  f.name = "K0";
  f.simplex = [](const FdCstarAlgebra& a0, const std::vector<StarHom>& homs) {
    std::vector<IntMat> spine;
    for (const auto& h : homs) spine.push_back(k0_of_hom(h));
    return k0_simplex(k0_ranks(a0, homs), spine);
  };
  f.certify = [](const StarHom& phi) -> std::optional<std::string> {
    bool ok = false;
    const IntMat inv = integer_inverse(k0_of_hom(phi), ok);
    if (!ok) return std::nullopt;
    return "K0 inverse " + int_mat_string(inv);
  };
  return f;
}

void check_stable_on(const CstFunctor<K0Nerve>& f, const std::vector<StarHom>& marked) {
  for (std::size_t i = 0; i < marked.size(); ++i)
    if (!f.certify(marked[i]))
      throw Error(ErrorKind::NotStableOnDiagram, "marked arrow " + std::to_string(i) + " is not sent to an isomorphism");
}

IntMat k0_twist(const FdCstarAlgebra& a, unsigned salt) {
  const int r = a.num_blocks();
  IntMat q = int_identity(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j)
      q(i, j) = static_cast<long long>((static_cast<unsigned>(a.block(i) + 2 * a.block(j) + i * j) + salt) % 3) - 1;
  return q;
}

CstFunctor<K0Nerve> twisted_k0_functor(unsigned salt) {
  CstFunctor<K0Nerve> f;
  f.name = "K0 twisted " + std::to_string(salt);
  f.simplex = [salt](const FdCstarAlgebra& a0, const std::vector<StarHom>& homs) {
    std::vector<IntMat> spine;
    for (const auto& h : homs)
      spine.push_back(k0_twist(h.dst(), salt) * k0_of_hom(h) * int_inverse_or_throw(k0_twist(h.src(), salt)));
    return k0_simplex(k0_ranks(a0, homs), spine);
  };
  f.certify = [salt](const StarHom& phi) -> std::optional<std::string> {
    bool ok = false;
    const IntMat m = k0_twist(phi.dst(), salt) * k0_of_hom(phi) * int_inverse_or_throw(k0_twist(phi.src(), salt));
    const IntMat inv = integer_inverse(m, ok);
    if (!ok) return std::nullopt;
    return "K0 inverse " + int_mat_string(inv);
  };
  return f;
}

K0Homotopy k0_twist_homotopy(unsigned salt) {
  return [salt](const FdCstarAlgebra& a0, const std::vector<StarHom>& homs, const std::vector<int>& s) {
    if (s.size() != homs.size() + 1) throw Error(ErrorKind::ShapeMismatch, "level sequence has the wrong length");
    std::vector<IntMat> spine;
    for (std::size_t i = 0; i < homs.size(); ++i) {
      const auto& h = homs[i];
      if (s[i] > s[i + 1]) throw Error(ErrorKind::NotMonotone, "level sequence must be weakly increasing");
      IntMat m = k0_of_hom(h);
      if (s[i + 1] == 1) m = k0_twist(h.dst(), salt) * m;
      if (s[i] == 1) m = m * int_inverse_or_throw(k0_twist(h.src(), salt));
      spine.push_back(m);
    }
    return k0_simplex(k0_ranks(a0, homs), spine);
  };
}

CstFunctor<NCorrNerve> gamma_functor() {
  CstFunctor<NCorrNerve> f;
  f.name = "Gamma";
  f.simplex = [](const FdCstarAlgebra& a0, const std::vector<StarHom>& homs) {
    return homs.empty() ? gamma_simplex_vertex(a0) : gamma_simplex(homs);
  };
  f.certify = [](const StarHom& phi) -> std::optional<std::string> {
    const auto w = is_equivalence(gamma_of_hom(phi));
    if (!w) return std::nullopt;
    return "Morita inverse " + int_mat_string(w->inverse.action_mult());
  };
  return f;
}

// ---------------------------------------------------------------------------

RelativeExtender::RelativeExtender(int m, K0Homotopy h, Extender<K0Nerve>* boundary0, Extender<K0Nerve>* boundary1)
    : m_(m), h_(std::move(h)), boundary_{boundary0, boundary1} {
  if (m != 0 && m != 1) throw Error(ErrorKind::DimensionTooLarge, "relative extension supports m <= 1");
  if (m == 1 && (!boundary0 || !boundary1)) throw Error(ErrorKind::BoundaryMismatch, "m = 1 needs both ends");
}

const GBar<K0Nerve>& RelativeExtender::extend(const NCorrSimplex& sigma, const std::vector<int>& s,
                                              const Hint& hint) {
  const int n = sigma.dim();
  if (n > 3) throw Error(ErrorKind::DimensionTooLarge, "extension supports n <= 3");
  if (static_cast<int>(s.size()) != n + 1) throw Error(ErrorKind::ShapeMismatch, "level sequence has the wrong length");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] > m_) throw Error(ErrorKind::IndexOutOfRange, "level out of range");
    if (i > 0 && s[i] < s[i - 1]) throw Error(ErrorKind::NotMonotone, "level sequence must be weakly increasing");
  }
  if (m_ == 1 && s.front() == s.back()) return boundary_[s.front()]->extend(sigma, hint);
  for (const auto& [key, levels, g] : memo_)
    if (levels == s && key.dim() == n && key.algebras() == sigma.algebras() && simplex_equal(key, sigma, eps()))
      return *g;
  std::vector<const GBar<K0Nerve>*> faces;
  for (int v = 0; v <= n && n > 0; ++v) {
    std::vector<int> fs = s;
    fs.erase(fs.begin() + v);
    faces.push_back(&extend(face(sigma, v), fs, hint ? Hint(chain_face(*hint, v)) : std::nullopt));
  }
  auto functor = std::make_shared<SubdivisionFunctor>(subdivision_functor(sigma));
  ExtensionContext<K0Nerve> ctx;
  ctx.n = n;
  ctx.sd_value = [this, functor, s](const AugChain& c) {
    std::vector<int> levels;
    for (Subset e : c.entries) levels.push_back(s[static_cast<std::size_t>(subset_max(e))]);
    return h_(functor->algebra(c.entries.front()), functor->homs_along(c.entries), levels);
  };
  ctx.lower = [faces](int v, const AugChain& c) { return faces[static_cast<std::size_t>(v)]->value(c); };
  ctx.certify = [this, sd = ctx.sd_value](const AugChain& edge) -> std::optional<std::string> {
    const K0Simplex e = sd(edge);
    if (!d_.is_equivalence(e)) return std::nullopt;
    bool ok = false;
    return "K0 inverse " + int_mat_string(integer_inverse(e.map(0, 1), ok));
  };
  auto g = std::make_unique<GBar<K0Nerve>>(d_, std::move(ctx));
  g->run(n, static_cast<int>(memo_.size()), nullptr);
  g->check();
  memo_.emplace_back(sigma, s, std::move(g));
  return *std::get<2>(memo_.back());
}

K0Simplex RelativeExtender::value(const NCorrSimplex& sigma, const std::vector<int>& s, const Hint& hint) {
  if (const auto j = degenerate_index(sigma); j && s[static_cast<std::size_t>(*j)] == s[static_cast<std::size_t>(*j + 1)]) {
    std::vector<int> fs = s;
    fs.erase(fs.begin() + *j);
    return d_.degeneracy(value(face(sigma, *j), fs, hint ? Hint(chain_face(*hint, *j)) : std::nullopt), *j);
  }
  return extend(sigma, s, hint).value(top_chain(sigma.dim()));
}

void RelativeExtender::check_boundary(const std::vector<std::vector<StarHom>>& chains,
                                      const std::vector<FdCstarAlgebra>& objects) {
  for (int level = 0; level <= m_; ++level) {
    Extender<K0Nerve>* b = boundary_[level];
    if (!b) continue;
    for (const auto& a : objects) {
      const auto mine = h_(a, {}, {level});
      if (!k0_equal(mine, b->bar_F(gamma_simplex_vertex(a))))
        throw Error(ErrorKind::BoundaryMismatch, "vertex disagrees at level " + std::to_string(level));
    }
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const auto& chain = chains[c];
      const std::vector<int> levels(chain.size() + 1, level);
      const auto mine = h_(chain.front().src(), chain, levels);
      if (!k0_equal(mine, b->bar_F(gamma_simplex(chain), chain)))
        throw Error(ErrorKind::BoundaryMismatch,
                    "chain " + std::to_string(c) + " disagrees at level " + std::to_string(level));
    }
  }
}

}  // namespace corrlab
