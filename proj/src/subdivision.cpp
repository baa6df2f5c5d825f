#include "corrlab/subdivision.hpp"

#include "corrlab/errors.hpp"

#include <bit>
#include <functional>
#include <sstream>

namespace corrlab {

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

bool is_singleton(Subset s) { return std::popcount(s) == 1; }
int vertex_of(Subset s) { return std::countr_zero(s); }
Subset bit(int i) { return Subset{1} << i; }

void check_n(int n) {
  if (n < 0) throw Error(ErrorKind::ShapeViolation, "negative dimension");
  if (n > kMaxSubdivisionDim)
    throw Error(ErrorKind::DimensionTooLarge, "n = " + std::to_string(n) + " exceeds " +
                                                  std::to_string(kMaxSubdivisionDim));
}

void validate(const AugChain& c) {
  if (c.entries.empty()) throw Error(ErrorKind::ShapeViolation, "empty chain");
  const Subset all = full_subset(c.n);
  std::size_t p = 0;
  while (p < c.entries.size() && is_singleton(c.entries[p])) ++p;
  Subset prefix = 0;
  for (std::size_t a = 0; a < c.entries.size(); ++a) {
    const Subset s = c.entries[a];
    if (s == 0 || (s & ~all) != 0) throw Error(ErrorKind::ShapeViolation, "entry outside [n]");
    if (a < p) {
      if (a > 0 && vertex_of(s) < vertex_of(c.entries[a - 1]))
        throw Error(ErrorKind::ShapeViolation, "prefix must be weakly increasing");
      prefix |= s;
    } else {
      if (is_singleton(s)) throw Error(ErrorKind::ShapeViolation, "singleton after a suffix entry");
      if (a == p) {
        if ((prefix & ~s) != 0) throw Error(ErrorKind::ShapeViolation, "prefix not contained in S_{k+1}");
      } else if ((c.entries[a - 1] & ~s) != 0) {
        throw Error(ErrorKind::ShapeViolation, "suffix must be an inclusion chain");
      }
    }
  }
}

}  // namespace

int subset_max(Subset s) { return 31 - std::countl_zero(s); }
int subset_size(Subset s) { return std::popcount(s); }
Subset full_subset(int n) { return (Subset{1} << (n + 1)) - 1; }

std::string subset_name(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (s & bit(i)) {
      out += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  return out + "}";
}

bool SubsetChain::nondegenerate() const {
  for (std::size_t a = 1; a < sets.size(); ++a)
    if (sets[a] == sets[a - 1]) return false;
  return true;
}

int AugChain::k() const {
  int p = 0;
  while (p < static_cast<int>(entries.size()) && is_singleton(entries[z(p)])) ++p;
  return p - 1;
}

Subset AugChain::top() const {
  if (k() < dim()) return entries.back();
  Subset s = 0;
  for (Subset e : entries) s |= e;
  return s;
}

bool AugChain::nondegenerate() const {
  for (std::size_t a = 1; a < entries.size(); ++a)
    if (entries[a] == entries[a - 1]) return false;
  return true;
}

bool AugChain::in_sd() const {
  for (std::size_t a = 1; a < entries.size(); ++a)
    if ((entries[a - 1] & ~entries[a]) != 0) return false;
  return true;
}

std::string AugChain::name() const {
  std::ostringstream os;
  os << "(";
  const int kk = k();
  for (int a = 0; a <= dim(); ++a) {
    if (a > 0) os << ",";
    if (a <= kk)
      os << vertex_of(entries[z(a)]);
    else
      os << subset_name(entries[z(a)]);
  }
  os << ")";
  return os.str();
}

AugChain make_aug_chain(int n, std::vector<Subset> entries) {
  check_n(n);
  AugChain c{n, std::move(entries)};
  validate(c);
  return c;
}

AugChain aug_from_prefix(int n, const std::vector<int>& prefix, const std::vector<Subset>& suffix) {
  std::vector<Subset> entries;
  for (int i : prefix) {
    if (i < 0 || i > n) throw Error(ErrorKind::ShapeViolation, "prefix vertex outside [n]");
    entries.push_back(bit(i));
  }
  for (Subset s : suffix) {
    if (is_singleton(s)) throw Error(ErrorKind::ShapeViolation, "suffix sets need two elements");
    entries.push_back(s);
  }
  return make_aug_chain(n, std::move(entries));
}

AugChain aug_from_sd(const SubsetChain& c) { return make_aug_chain(c.n, c.sets); }

std::vector<SubsetChain> enumerate_sd(int n, int l) {
  check_n(n);
  if (l < 0) throw Error(ErrorKind::IndexOutOfRange, "negative simplex dimension");
  const Subset all = full_subset(n);
  std::vector<SubsetChain> out;
  std::vector<Subset> cur;
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == l + 1) {
      out.push_back({n, cur});
      return;
    }
    for (Subset s = 1; s <= all; ++s) {
      if (!cur.empty() && (cur.back() & ~s) != 0) continue;
      cur.push_back(s);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<AugChain> enumerate_csd(int n, int l) {
  check_n(n);
  if (l < 0) throw Error(ErrorKind::IndexOutOfRange, "negative simplex dimension");
  const Subset all = full_subset(n);
  std::vector<AugChain> out;
  std::vector<Subset> cur;
  // Entries are generated in order; once a suffix entry appears no singleton may follow.
  std::function<void(Subset, bool)> rec = [&](Subset prefix, bool in_suffix) {
    if (static_cast<int>(cur.size()) == l + 1) {
      out.push_back({n, cur});
      return;
    }
    if (!in_suffix)
      for (int i = cur.empty() ? 0 : vertex_of(cur.back()); i <= n; ++i) {
        cur.push_back(bit(i));
        rec(prefix | bit(i), false);
        cur.pop_back();
      }
    for (Subset s = 1; s <= all; ++s) {
      if (is_singleton(s)) continue;
      if (in_suffix ? (cur.back() & ~s) != 0 : (prefix & ~s) != 0) continue;
      cur.push_back(s);
      rec(prefix, true);
      cur.pop_back();
    }
  };
  rec(0, false);
  return out;
}

AugChain face(const AugChain& c, int j) {
  if (j < 0 || j > c.dim()) throw Error(ErrorKind::IndexOutOfRange, "face index " + std::to_string(j));
  if (c.dim() == 0) throw Error(ErrorKind::ShapeViolation, "a vertex has no faces");
  AugChain out = c;
  out.entries.erase(out.entries.begin() + j);
  validate(out);
  return out;
}

AugChain degeneracy(const AugChain& c, int j) {
  if (j < 0 || j > c.dim()) throw Error(ErrorKind::IndexOutOfRange, "degeneracy index " + std::to_string(j));
  AugChain out = c;
  out.entries.insert(out.entries.begin() + j, c.entries[z(j)]);
  validate(out);
  return out;
}

AugChain phi_star(const std::vector<int>& phi, int n, const AugChain& c) {
  check_n(n);
  if (static_cast<int>(phi.size()) != c.n + 1) throw Error(ErrorKind::ShapeViolation, "map has the wrong source");
  for (std::size_t a = 0; a < phi.size(); ++a) {
    if (phi[a] < 0 || phi[a] > n) throw Error(ErrorKind::IndexOutOfRange, "map value out of range");
    if (a > 0 && phi[a] < phi[a - 1]) throw Error(ErrorKind::NotMonotone, "map must be weakly increasing");
  }
  AugChain out{n, {}};
  for (Subset s : c.entries) {
    Subset img = 0;
    for (int i = 0; i <= c.n; ++i)
      if (s & bit(i)) img |= bit(phi[z(i)]);
    out.entries.push_back(img);
  }
  validate(out);
  return out;
}

AugChain restrict_away(const AugChain& c, int v) {
  AugChain out{c.n - 1, {}};
  const Subset low = bit(v) - 1;
  for (Subset s : c.entries) {
    if (s & bit(v)) throw Error(ErrorKind::ShapeViolation, "chain meets the removed vertex");
    out.entries.push_back((s & low) | ((s >> 1) & ~low));
  }
  validate(out);
  return out;
}

HilbertModule module_E_S(const NCorrSimplex& sigma, Subset s) {
  const int top = subset_max(s);
  if (s == 0 || top > sigma.dim()) throw Error(ErrorKind::ShapeViolation, "subset outside [n]");
  const auto& base = sigma.algebra(top);
  std::vector<int> mult(z(base.num_blocks()), 0);
  for (int l = 0; l <= top; ++l)
    if (s & bit(l))
      for (int c = 0; c < base.num_blocks(); ++c) mult[z(c)] += sigma.corr(l, top).mult(c);
  return make_module(base, mult);
}

FdCstarAlgebra algebra_A_S(const NCorrSimplex& sigma, Subset s) { return module_E_S(sigma, s).compacts(); }

StarHom f_ST(const NCorrSimplex& sigma, Subset s, Subset t) {
  if (s == 0 || (s & ~t) != 0)
    throw Error(ErrorKind::NotNested, subset_name(s) + " is not contained in " + subset_name(t));
  const int i = subset_max(s), j = subset_max(t);
  const auto es = module_E_S(sigma, s), et = module_E_S(sigma, t);
  const auto& bj = sigma.algebra(j);

  // Offset of summand l inside E_T, block k.
  const auto offset_in = [&](Subset set, int top, int l, int k) {
    int off = 0;
    for (int q = 0; q < l; ++q)
      if (set & bit(q)) off += sigma.corr(q, top).mult(k);
    return off;
  };

  // R_k maps the coordinates X acts on into E_T, block k.
  std::vector<Mat> r;
  if (i == j) {
    for (int k = 0; k < bj.num_blocks(); ++k) {
      Mat rk = Mat::Zero(et.mult(k), es.mult(k));
      for (int l = 0; l <= i; ++l) {
        if (!(s & bit(l))) continue;
        const int m = sigma.corr(l, i).mult(k);
        rk.block(offset_in(t, j, l, k), offset_in(s, i, l, k), m, m).setIdentity();
      }
      r.push_back(std::move(rk));
    }
  } else {
    const auto& eij = sigma.corr(i, j);
    const auto& ai = sigma.algebra(i);
    const auto& rm = eij.action_mult();
    for (int k = 0; k < bj.num_blocks(); ++k) {
      int width = 0;
      for (int c = 0; c < ai.num_blocks(); ++c) width += es.mult(c) * static_cast<int>(rm(c, k));
      Mat rk = Mat::Zero(et.mult(k), width);
      for (int l = 0; l <= i; ++l) {
        if (!(s & bit(l))) continue;
        const Mat& u = sigma.iso(l, i, j).unitary()[z(k)];
        const int row0 = offset_in(t, j, l, k);
        int chunk_s = 0, chunk_l = 0;
        for (int c = 0; c < ai.num_blocks(); ++c) {
          const int rr = static_cast<int>(rm(c, k));
          const int ml = sigma.corr(l, i).mult(c);
          const int off = offset_in(s, i, l, c);
          for (int a = 0; a < ml; ++a)
            for (int q = 0; q < rr; ++q)
              rk.block(row0, chunk_s + (off + a) * rr + q, u.rows(), 1) = u.col(chunk_l + a * rr + q);
          chunk_s += es.mult(c) * rr;
          chunk_l += ml * rr;
        }
      }
      r.push_back(std::move(rk));
    }
  }

  return star_hom_from_function(es.compacts(), et.compacts(), [&](const AlgElement& x) {
    BlockOp xs = to_block_op(es, x);
    if (i != j) xs = tensor_operator(xs, sigma.corr(i, j));
    BlockOp out;
    for (int k = 0; k < bj.num_blocks(); ++k) {
      const Mat& rk = r[z(k)];
      out.push_back(rk.cols() == 0 ? Mat::Zero(rk.rows(), rk.rows()) : Mat(rk * xs[z(k)] * rk.adjoint()));
    }
    return from_block_op(et, out);
  });
}

SubdivisionFunctor::SubdivisionFunctor(NCorrSimplex sigma) : sigma_(std::move(sigma)) {
  check_n(sigma_.dim());
  for (Subset s = 1; s <= full_subset(sigma_.dim()); ++s) algebras_.emplace(s, algebra_A_S(sigma_, s));
}

const FdCstarAlgebra& SubdivisionFunctor::algebra(Subset s) const {
  const auto it = algebras_.find(s);
  if (it == algebras_.end()) throw Error(ErrorKind::IndexOutOfRange, "no vertex " + subset_name(s));
  return it->second;
}

const StarHom& SubdivisionFunctor::hom(Subset s, Subset t) const {
  const auto key = std::make_pair(s, t);
  auto it = homs_.find(key);
  if (it == homs_.end()) {
    algebra(t);
    it = homs_.emplace(key, s == t ? identity_hom(algebra(s)) : f_ST(sigma_, s, t)).first;
  }
  return it->second;
}

std::vector<StarHom> SubdivisionFunctor::homs_along(const std::vector<Subset>& chain) const {
  std::vector<StarHom> out;
  for (std::size_t a = 1; a < chain.size(); ++a) out.push_back(hom(chain[a - 1], chain[a]));
  return out;
}

FunctorReport SubdivisionFunctor::check(double tol) const {
  FunctorReport rep;
  const Subset all = full_subset(n());
  for (Subset u = 1; u <= all; ++u)
    for (Subset t = 1; t <= u; ++t) {
      if ((t & ~u) != 0) continue;
      for (Subset s = 1; s <= t; ++s) {
        if ((s & ~t) != 0) continue;
        const Mat comp = hom(t, u).matrix() * hom(s, t).matrix();
        const double res = frob(comp - hom(s, u).matrix());
        ++rep.chains;
        rep.worst = std::max(rep.worst, res);
        if (res > tol)
          throw ResidualError(ErrorKind::FunctorialityViolated,
                              subset_name(s) + "," + subset_name(t) + "," + subset_name(u), res);
      }
    }
  return rep;
}

SubdivisionFunctor subdivision_functor(const NCorrSimplex& sigma, FunctorReport* report) {
  SubdivisionFunctor f(sigma);
  const auto rep = f.check(eps());
  if (report) *report = rep;
  return f;
}

}  // namespace corrlab
