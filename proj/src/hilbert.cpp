#include "corrlab/hilbert.hpp"

#include "corrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrlab {

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

Mat hstack(const std::vector<Mat>& parts, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& p : parts) cols += p.cols();
  Mat out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p;
    c += p.cols();
  }
  return out;
}

Mat vstack(const std::vector<Mat>& parts, Eigen::Index cols) {
  Eigen::Index rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Mat out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

void require_same_endpoints(const Correspondence& a, const Correspondence& b, const char* what) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst()))
    throw Error(ErrorKind::EndpointMismatch, what);
}

}  // namespace

HilbertModule make_module(const FdCstarAlgebra& base, std::vector<int> mult) {
  if (static_cast<int>(mult.size()) != base.num_blocks())
    throw Error(ErrorKind::LengthMismatch, "mult length must equal number of base blocks");
  HilbertModule e;
  e.base_ = base;
  std::vector<int> blocks;
  for (std::size_t i = 0; i < mult.size(); ++i) {
    if (mult[i] < 0) throw Error(ErrorKind::LengthMismatch, "negative multiplicity");
    if (mult[i] > 0) {
      e.to_compact_.push_back(static_cast<int>(blocks.size()));
      e.to_base_.push_back(static_cast<int>(i));
      blocks.push_back(mult[i]);
    } else {
      e.to_compact_.push_back(-1);
    }
  }
  e.mult_ = std::move(mult);
  e.compacts_ = algebra_from_blocks(std::move(blocks));
  return e;
}

ModElement HilbertModule::zero() const {
  ModElement x;
  for (int i = 0; i < num_blocks(); ++i) x.push_back(Mat::Zero(mult(i), base_.block(i)));
  return x;
}

bool HilbertModule::is_full() const {
  return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m > 0; });
}

AlgElement inner(const HilbertModule& e, const ModElement& x, const ModElement& y) {
  AlgElement out{e.base(), {}};
  for (std::size_t i = 0; i < x.size(); ++i) out.mats.push_back(x[i].adjoint() * y[i]);
  return out;
}

ModElement right_mult(const ModElement& x, const AlgElement& b) {
  ModElement out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] * b.mats[i]);
  return out;
}

double module_residual(const ModElement& x, const ModElement& y) { return block_residual(x, y); }

BlockOp to_block_op(const HilbertModule& e, const AlgElement& t) {
  BlockOp out;
  for (int i = 0; i < e.num_blocks(); ++i) {
    const int c = e.compact_block(i);
    out.push_back(c < 0 ? Mat(0, 0) : t.mats[z(c)]);
  }
  return out;
}

AlgElement from_block_op(const HilbertModule& e, const BlockOp& t) {
  AlgElement out{e.compacts(), {}};
  for (int c = 0; c < e.compacts().num_blocks(); ++c) out.mats.push_back(t[z(e.base_block(c))]);
  return out;
}

ModElement apply_op(const BlockOp& t, const ModElement& x) {
  ModElement out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(t[i] * x[i]);
  return out;
}

ModuleSum direct_sum(const HilbertModule& e, const HilbertModule& f) {
  if (!(e.base() == f.base())) throw Error(ErrorKind::BaseMismatch, "direct_sum over different bases");
  std::vector<int> mult;
  BlockOp first, second;
  for (int i = 0; i < e.num_blocks(); ++i) {
    const int a = e.mult(i), b = f.mult(i);
    mult.push_back(a + b);
    Mat j1 = Mat::Zero(a + b, a), j2 = Mat::Zero(a + b, b);
    j1.topRows(a).setIdentity();
    j2.bottomRows(b).setIdentity();
    first.push_back(std::move(j1));
    second.push_back(std::move(j2));
  }
  return {make_module(e.base(), std::move(mult)), std::move(first), std::move(second)};
}

Correspondence make_corr(const HilbertModule& module, const StarHom& left) {
  if (!(left.dst() == module.compacts()))
    throw Error(ErrorKind::ShapeMismatch, "left action must land in the compacts of the module");
  if (!left.is_unital()) throw Error(ErrorKind::NotUnital, "left action is degenerate");
  Correspondence e;
  e.module_ = module;
  e.left_ = left;
  e.action_mult_ = IntMat::Zero(left.src().num_blocks(), module.num_blocks());
  for (int k = 0; k < module.num_blocks(); ++k) {
    const int c = module.compact_block(k);
    if (c < 0) {
      e.frames_.push_back(Mat(0, 0));
      continue;
    }
    e.action_mult_.col(k) = left.mult_matrix().col(c);
    e.frames_.push_back(left.frame(c));
  }
  return e;
}

BlockOp Correspondence::act(const AlgElement& a) const { return to_block_op(module_, left_(a)); }

ModElement Correspondence::act(const AlgElement& a, const ModElement& x) const { return apply_op(act(a), x); }

bool corr_equal(const Correspondence& e, const Correspondence& f, double tol) {
  return e.src() == f.src() && e.dst() == f.dst() && e.mult() == f.mult() &&
         hom_residual(e.left_action(), f.left_action()) <= tol;
}

Correspondence identity_corr(const FdCstarAlgebra& a) {
  return make_corr(make_module(a, a.blocks()), identity_hom(a));
}

bool is_full_corr(const Correspondence& e) { return e.module().is_full(); }

BlockOp tensor_operator(const BlockOp& t, const Correspondence& f) {
  const auto& r = f.action_mult();
  BlockOp out;
  for (int k = 0; k < f.module().num_blocks(); ++k) {
    std::vector<Mat> parts;
    for (int i = 0; i < f.src().num_blocks(); ++i)
      if (r(i, k) > 0 && t[z(i)].size() > 0) parts.push_back(kron_identity(t[z(i)], static_cast<int>(r(i, k))));
    out.push_back(direct_sum(parts));
  }
  return out;
}

Correspondence tensor(const Correspondence& e, const Correspondence& f) {
  if (!(e.dst() == f.src())) throw Error(ErrorKind::EndpointMismatch, "tensor: E.dst != F.src");
  const auto& r = f.action_mult();
  std::vector<int> mult;
  for (int k = 0; k < f.module().num_blocks(); ++k) {
    long long q = 0;
    for (int i = 0; i < e.dst().num_blocks(); ++i) q += e.mult(i) * r(i, k);
    mult.push_back(static_cast<int>(q));
  }
  const auto module = make_module(f.dst(), mult);
  const auto left = star_hom_from_function(e.src(), module.compacts(), [&](const AlgElement& a) {
    return from_block_op(module, tensor_operator(e.act(a), f));
  });
  return make_corr(module, left);
}

ModElement tensor_element(const Correspondence& e, const Correspondence& f, const ModElement& x,
                          const ModElement& y) {
  const auto& r = f.action_mult();
  ModElement out;
  for (int k = 0; k < f.module().num_blocks(); ++k) {
    const Mat& w = f.action_frame(k);
    std::vector<Mat> parts;
    int off = 0;
    for (int i = 0; i < e.dst().num_blocks(); ++i) {
      const int ri = static_cast<int>(r(i, k));
      const int width = e.dst().block(i) * ri;
      if (ri > 0 && e.mult(i) > 0)
        parts.push_back(kron_identity(x[z(i)], ri) * (w.middleCols(off, width).adjoint() * y[z(k)]));
      off += width;
    }
    out.push_back(vstack(parts, f.dst().block(k)));
  }
  return out;
}

double IsoResiduals::worst() const { return std::max({unitary, right_linear, intertwining}); }

IsoResiduals iso_residuals(const Correspondence& src, const Correspondence& dst, const BlockOp& u) {
  IsoResiduals res;
  res.unitary = unitarity_residual(u);
  // Block unitaries act on the left, so right-linearity holds structurally.
  res.right_linear = 0.0;
  for (int a = 0; a < src.src().dim(); ++a) {
    const auto basis = basis_element(src.src(), a);
    const auto ls = src.act(basis), ld = dst.act(basis);
    res.intertwining = std::max(res.intertwining, block_residual(block_compose(u, ls), block_compose(ld, u)));
  }
  return res;
}

CorrIso make_iso(const Correspondence& src, const Correspondence& dst, const BlockOp& u) {
  require_same_endpoints(src, dst, "iso between correspondences with different endpoints");
  if (src.mult() != dst.mult()) throw Error(ErrorKind::ShapeMismatch, "iso between modules of different mult");
  if (u.size() != src.mult().size()) throw Error(ErrorKind::ShapeMismatch, "iso block count");
  for (std::size_t k = 0; k < u.size(); ++k)
    if (u[k].rows() != src.mult()[k] || u[k].cols() != src.mult()[k])
      throw Error(ErrorKind::ShapeMismatch, "iso block shape");
  const double tol = eps();
  const double unit = unitarity_residual(u);
  if (unit > tol) throw ResidualError(ErrorKind::NotUnitary, "iso unitary", unit);
  const auto res = iso_residuals(src, dst, u);
  if (res.intertwining > tol) throw ResidualError(ErrorKind::NotIntertwining, "iso left action", res.intertwining);
  CorrIso iso;
  iso.src_ = src;
  iso.dst_ = dst;
  iso.u_ = u;
  return iso;
}

CorrIso make_iso_from_linear(const Correspondence& src, const Correspondence& dst, const Mat& map) {
  const auto& b = src.dst();
  Eigen::Index total = 0;
  for (int k = 0; k < b.num_blocks(); ++k) total += static_cast<Eigen::Index>(src.mult(k)) * b.block(k);
  if (map.rows() != total || map.cols() != total) throw Error(ErrorKind::ShapeMismatch, "linear iso shape");
  BlockOp u;
  std::vector<Mat> expanded;
  Eigen::Index off = 0;
  for (int k = 0; k < b.num_blocks(); ++k) {
    const int m = src.mult(k), n = b.block(k);
    Mat uk(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) uk(i, j) = map(off + i * n, off + j * n);
    expanded.push_back(kron_identity(uk, n));
    u.push_back(std::move(uk));
    off += static_cast<Eigen::Index>(m) * n;
  }
  const double res = frob(map - direct_sum(expanded));
  if (res > eps()) throw ResidualError(ErrorKind::NotRightLinear, "linear iso", res);
  return make_iso(src, dst, u);
}

CorrIso identity_iso(const Correspondence& e) {
  BlockOp u;
  for (int m : e.mult()) u.push_back(Mat::Identity(m, m));
  return make_iso(e, e, u);
}

CorrIso compose_isos(const CorrIso& v, const CorrIso& u) {
  if (!corr_equal(u.dst(), v.src(), eps()))
    throw Error(ErrorKind::EndpointMismatch, "compose_isos: u.dst != v.src");
  return make_iso(u.src(), v.dst(), block_compose(v.unitary(), u.unitary()));
}

CorrIso inverse_iso(const CorrIso& u) { return make_iso(u.dst(), u.src(), block_adjoint(u.unitary())); }

double iso_residual(const CorrIso& a, const CorrIso& b) { return block_residual(a.unitary(), b.unitary()); }

CorrIso whisker_right(const CorrIso& u, const Correspondence& g) {
  return make_iso(tensor(u.src(), g), tensor(u.dst(), g), tensor_operator(u.unitary(), g));
}

CorrIso whisker_left(const Correspondence& e, const CorrIso& v) {
  const auto& f = v.src();
  const auto& f2 = v.dst();
  if (f.action_mult() != f2.action_mult())
    throw Error(ErrorKind::NotIntertwining, "whisker_left: left actions have different multiplicities");
  BlockOp out;
  for (int k = 0; k < f.module().num_blocks(); ++k) {
    std::vector<Mat> parts;
    int off = 0;
    for (int i = 0; i < e.dst().num_blocks(); ++i) {
      const int r = static_cast<int>(f.action_mult()(i, k));
      const int width = e.dst().block(i) * r;
      if (r > 0 && e.mult(i) > 0) {
        const Mat t = (f2.action_frame(k).middleCols(off, width).adjoint() * v.unitary()[z(k)] *
                       f.action_frame(k).middleCols(off, width))
                          .topLeftCorner(r, r);
        for (int a = 0; a < e.mult(i); ++a) parts.push_back(t);
      }
      off += width;
    }
    out.push_back(direct_sum(parts));
  }
  return make_iso(tensor(e, f), tensor(e, f2), out);
}

CorrIso tensor_isos(const CorrIso& u, const CorrIso& v) {
  return compose_isos(whisker_left(u.dst(), v), whisker_right(u, v.src()));
}

std::vector<ModElement> module_generators(const HilbertModule& e) {
  std::vector<ModElement> gens;
  for (int i = 0; i < e.num_blocks(); ++i)
    for (int a = 0; a < e.mult(i); ++a) {
      auto x = e.zero();
      x[z(i)](a, 0) = 1.0;
      gens.push_back(std::move(x));
    }
  return gens;
}

std::vector<ModElement> tensor_generators(const Correspondence& e, const Correspondence& f) {
  std::vector<ModElement> out;
  const auto ge = module_generators(e.module());
  const auto gf = module_generators(f.module());
  for (const auto& x : ge)
    for (const auto& y : gf) out.push_back(tensor_element(e, f, x, y));
  return out;
}

CorrIso iso_from_generators(const Correspondence& src, const Correspondence& dst,
                            const std::vector<ModElement>& sources,
                            const std::vector<ModElement>& targets) {
  require_same_endpoints(src, dst, "iso_from_generators endpoints");
  if (sources.size() != targets.size()) throw Error(ErrorKind::ShapeMismatch, "generator lists differ in length");
  if (src.mult() != dst.mult()) throw Error(ErrorKind::ShapeMismatch, "iso between modules of different mult");
  BlockOp u;
  for (int k = 0; k < src.module().num_blocks(); ++k) {
    const int m = src.mult(k);
    if (m == 0) {
      u.push_back(Mat(0, 0));
      continue;
    }
    std::vector<Mat> ys, zs;
    for (std::size_t g = 0; g < sources.size(); ++g) {
      ys.push_back(sources[g][z(k)]);
      zs.push_back(targets[g][z(k)]);
    }
    const Mat y = hstack(ys, m), t = hstack(zs, m);
    const Mat gram = y * y.adjoint();
    Eigen::LDLT<Mat> ldlt(gram);
    if (numeric_rank(gram, eps()) < m)
      throw Error(ErrorKind::ShapeMismatch, "generators do not span the source module");
    u.push_back(ldlt.solve(y * t.adjoint()).adjoint());
  }
  return make_iso(src, dst, u);
}

std::optional<CorrIso> normal_form_iso(const Correspondence& e, const Correspondence& f) {
  if (!(e.src() == f.src()) || !(e.dst() == f.dst()) || e.mult() != f.mult() ||
      e.action_mult() != f.action_mult())
    return std::nullopt;
  BlockOp u;
  for (int k = 0; k < e.module().num_blocks(); ++k) u.push_back(f.action_frame(k) * e.action_frame(k).adjoint());
  return make_iso(e, f, u);
}

CorrIso associator(const Correspondence& e, const Correspondence& f, const Correspondence& g) {
  const auto ef = tensor(e, f);
  const auto fg = tensor(f, g);
  const auto src = tensor(ef, g);
  const auto dst = tensor(e, fg);
  std::vector<ModElement> from, to;
  const auto ge = module_generators(e.module());
  const auto gf = module_generators(f.module());
  const auto gg = module_generators(g.module());
  for (const auto& x : ge)
    for (const auto& y : gf) {
      const auto xy = tensor_element(e, f, x, y);
      for (const auto& w : gg) {
        from.push_back(tensor_element(ef, g, xy, w));
        to.push_back(tensor_element(e, fg, x, tensor_element(f, g, y, w)));
      }
    }
  return iso_from_generators(src, dst, from, to);
}

CorrIso left_unitor(const Correspondence& e) {
  const auto id = identity_corr(e.src());
  const auto src = tensor(id, e);
  std::vector<ModElement> from, to;
  for (const auto& a : module_generators(id.module()))
    for (const auto& x : module_generators(e.module())) {
      from.push_back(tensor_element(id, e, a, x));
      to.push_back(e.act(AlgElement{e.src(), a}, x));
    }
  return iso_from_generators(src, e, from, to);
}

CorrIso right_unitor(const Correspondence& e) {
  const auto id = identity_corr(e.dst());
  const auto src = tensor(e, id);
  std::vector<ModElement> from, to;
  for (const auto& x : module_generators(e.module()))
    for (const auto& b : module_generators(id.module())) {
      from.push_back(tensor_element(e, id, x, b));
      to.push_back(right_mult(x, AlgElement{e.dst(), b}));
    }
  return iso_from_generators(src, e, from, to);
}

}  // namespace corrlab
