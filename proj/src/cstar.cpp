#include "corrlab/cstar.hpp"

#include "corrlab/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace corrlab {

namespace {

// Above this many flops the all-pairs multiplicativity sweep is replaced by
// the normal-form reconstruction check alone.
constexpr double kExhaustiveBudget = 4e7;

std::string basis_name(const FdCstarAlgebra& alg, int index) {
  const auto b = basis_index(alg, index);
  std::ostringstream os;
  os << "E[" << b.block << "](" << b.row << "," << b.col << ")";
  return os.str();
}

}  // namespace

FdCstarAlgebra algebra_from_blocks(std::vector<int> blocks) {
  FdCstarAlgebra a;
  for (int n : blocks)
    if (n < 1) throw Error(ErrorKind::InvalidAlgebra, "block size must be >= 1");
  a.blocks_ = std::move(blocks);
  a.offsets_.reserve(a.blocks_.size());
  for (int n : a.blocks_) {
    a.offsets_.push_back(a.dim_);
    a.dim_ += n * n;
  }
  return a;
}

FdCstarAlgebra make_algebra(std::vector<int> blocks, std::string label) {
  if (blocks.empty()) throw Error(ErrorKind::InvalidAlgebra, "empty block list");
  auto a = algebra_from_blocks(std::move(blocks));
  a.label_ = std::move(label);
  return a;
}

FdCstarAlgebra FdCstarAlgebra::with_label(std::string label) const {
  auto copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

BasisIndex basis_index(const FdCstarAlgebra& alg, int index) {
  if (index < 0 || index >= alg.dim()) throw Error(ErrorKind::IndexOutOfRange, "basis index");
  int b = alg.num_blocks() - 1;
  while (alg.offset(b) > index) --b;
  const int local = index - alg.offset(b);
  const int n = alg.block(b);
  return {b, local / n, local % n};
}

int basis_position(const FdCstarAlgebra& alg, int block, int row, int col) {
  return alg.offset(block) + row * alg.block(block) + col;
}

AlgElement zero_element(const FdCstarAlgebra& alg) {
  AlgElement x{alg, {}};
  for (int n : alg.blocks()) x.mats.push_back(Mat::Zero(n, n));
  return x;
}

AlgElement unit_element(const FdCstarAlgebra& alg) {
  AlgElement x{alg, {}};
  for (int n : alg.blocks()) x.mats.push_back(Mat::Identity(n, n));
  return x;
}

AlgElement block_unit(const FdCstarAlgebra& alg, int block) {
  auto x = zero_element(alg);
  x.mats.at(static_cast<std::size_t>(block)).setIdentity();
  return x;
}

AlgElement matrix_unit(const FdCstarAlgebra& alg, int block, int row, int col) {
  auto x = zero_element(alg);
  x.mats.at(static_cast<std::size_t>(block))(row, col) = 1.0;
  return x;
}

AlgElement basis_element(const FdCstarAlgebra& alg, int index) {
  const auto b = basis_index(alg, index);
  return matrix_unit(alg, b.block, b.row, b.col);
}

Vec to_coords(const AlgElement& x) {
  Vec v(x.parent.dim());
  for (int b = 0; b < x.parent.num_blocks(); ++b) {
    const int n = x.parent.block(b);
    const auto& m = x.mats[static_cast<std::size_t>(b)];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(x.parent.offset(b) + r * n + c) = m(r, c);
  }
  return v;
}

AlgElement from_coords(const FdCstarAlgebra& alg, const Vec& v) {
  if (v.size() != alg.dim()) throw Error(ErrorKind::ShapeMismatch, "coordinate length");
  AlgElement x{alg, {}};
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const int n = alg.block(b);
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = v(alg.offset(b) + r * n + c);
    x.mats.push_back(std::move(m));
  }
  return x;
}

AlgElement multiply(const AlgElement& x, const AlgElement& y) {
  if (!(x.parent == y.parent)) throw Error(ErrorKind::ShapeMismatch, "multiply: parents differ");
  AlgElement z{x.parent, {}};
  for (std::size_t b = 0; b < x.mats.size(); ++b) z.mats.push_back(x.mats[b] * y.mats[b]);
  return z;
}

AlgElement adjoint(const AlgElement& x) {
  AlgElement z{x.parent, {}};
  for (const auto& m : x.mats) z.mats.push_back(m.adjoint());
  return z;
}

AlgElement add(const AlgElement& x, const AlgElement& y) {
  if (!(x.parent == y.parent)) throw Error(ErrorKind::ShapeMismatch, "add: parents differ");
  AlgElement z{x.parent, {}};
  for (std::size_t b = 0; b < x.mats.size(); ++b) z.mats.push_back(x.mats[b] + y.mats[b]);
  return z;
}

double residual(const AlgElement& x, const AlgElement& y) {
  if (!(x.parent == y.parent)) return std::numeric_limits<double>::infinity();
  return block_residual(x.mats, y.mats);
}

bool is_projection(const AlgElement& p, double tol) {
  return residual(multiply(p, p), p) <= tol && residual(adjoint(p), p) <= tol;
}

int StarHom::frame_offset(int src_block, int dst_block) const {
  int off = 0;
  for (int i = 0; i < src_block; ++i) off += src().block(i) * static_cast<int>(mult_matrix()(i, dst_block));
  return off;
}

Mat StarHom::apply_block(const AlgElement& x, int j) const {
  const int m = dst().block(j);
  Mat out = Mat::Zero(m, m);
  const Mat& f = frame(j);
  int off = 0;
  for (int i = 0; i < src().num_blocks(); ++i) {
    const int r = static_cast<int>(mult_matrix()(i, j));
    const int w = src().block(i) * r;
    if (r > 0) {
      const auto fi = f.middleCols(off, w);
      out += fi * kron_identity(x.mats[static_cast<std::size_t>(i)], r) * fi.adjoint();
    }
    off += w;
  }
  return out;
}

AlgElement StarHom::operator()(const AlgElement& x) const {
  if (!(x.parent == src())) throw Error(ErrorKind::ShapeMismatch, "StarHom applied to foreign element");
  AlgElement y{dst(), {}};
  for (int j = 0; j < dst().num_blocks(); ++j) y.mats.push_back(apply_block(x, j));
  return y;
}

bool StarHom::is_unital() const {
  for (int j = 0; j < dst().num_blocks(); ++j) {
    long long used = 0;
    for (int i = 0; i < src().num_blocks(); ++i) used += mult_matrix()(i, j) * src().block(i);
    if (used != dst().block(j)) return false;
  }
  return true;
}

AlgElement StarHom::unit_image() const { return (*this)(unit_element(src())); }

StarHom make_star_hom(const FdCstarAlgebra& src, const FdCstarAlgebra& dst, const Mat& raw) {
  if (raw.rows() != dst.dim() || raw.cols() != src.dim())
    throw Error(ErrorKind::ShapeMismatch, "hom matrix must be dim(dst) x dim(src)");
  const double tol = eps();
  const int d = src.dim();

  std::vector<AlgElement> img;
  img.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) img.push_back(from_coords(dst, raw.col(a)));

  // *-preservation on basis elements: phi(E_ba) = phi(E_ab)^*.
  {
    double worst = 0.0;
    int where = -1;
    for (int a = 0; a < d; ++a) {
      const auto bi = basis_index(src, a);
      const int t = basis_position(src, bi.block, bi.col, bi.row);
      const double res = residual(img[static_cast<std::size_t>(t)], adjoint(img[static_cast<std::size_t>(a)]));
      if (res > worst) {
        worst = res;
        where = a;
      }
    }
    if (worst > tol) throw ResidualError(ErrorKind::NotStarPreserving, basis_name(src, where), worst);
  }

  double cost = 0.0;
  for (int m : dst.blocks()) cost += static_cast<double>(m) * m * m;
  cost *= static_cast<double>(d) * d;
  if (cost <= kExhaustiveBudget) {
    double worst = 0.0;
    int wa = -1, wb = -1;
    for (int a = 0; a < d; ++a) {
      const auto ia = basis_index(src, a);
      for (int b = 0; b < d; ++b) {
        const auto ib = basis_index(src, b);
        const bool chained = ia.block == ib.block && ia.col == ib.row;
        double s = 0.0;
        for (int j = 0; j < dst.num_blocks(); ++j) {
          const auto& xa = img[static_cast<std::size_t>(a)].mats[static_cast<std::size_t>(j)];
          const auto& xb = img[static_cast<std::size_t>(b)].mats[static_cast<std::size_t>(j)];
          Mat prod = xa * xb;
          if (chained)
            prod -= img[static_cast<std::size_t>(basis_position(src, ia.block, ia.row, ib.col))]
                        .mats[static_cast<std::size_t>(j)];
          s += prod.squaredNorm();
        }
        const double res = std::sqrt(s);
        if (res > worst) {
          worst = res;
          wa = a;
          wb = b;
        }
      }
    }
    if (worst > tol)
      throw ResidualError(ErrorKind::NotMultiplicative,
                          basis_name(src, wa) + " * " + basis_name(src, wb), worst);
  }

  // Normal form.
  IntMat mult = IntMat::Zero(src.num_blocks(), dst.num_blocks());
  std::vector<Mat> frames;
  for (int j = 0; j < dst.num_blocks(); ++j) {
    const int m = dst.block(j);
    std::vector<Mat> parts;
    int width = 0;
    for (int i = 0; i < src.num_blocks(); ++i) {
      const int n = src.block(i);
      Mat unit_img = Mat::Zero(m, m);
      for (int a = 0; a < n; ++a)
        unit_img += img[static_cast<std::size_t>(basis_position(src, i, a, a))].mats[static_cast<std::size_t>(j)];
      const int rank = numeric_rank(unit_img, tol);
      if (rank % n != 0)
        throw ResidualError(ErrorKind::NotMultiplicative,
                            "rank of block unit image not divisible by block size", 0.0);
      const int r = rank / n;
      mult(i, j) = r;
      if (r == 0) continue;
      const Mat w = orthonormal_columns(
          img[static_cast<std::size_t>(basis_position(src, i, 0, 0))].mats[static_cast<std::size_t>(j)], r);
      Mat part(m, n * r);
      for (int s = 0; s < n; ++s)
        part.middleCols(s * r, r) =
            img[static_cast<std::size_t>(basis_position(src, i, s, 0))].mats[static_cast<std::size_t>(j)] * w;
      width += n * r;
      parts.push_back(std::move(part));
    }
    if (width > m)
      throw ResidualError(ErrorKind::NotMultiplicative, "multiplicities exceed target block", 0.0);
    Mat f(m, width);
    int off = 0;
    for (auto& p : parts) {
      f.middleCols(off, p.cols()) = p;
      off += static_cast<int>(p.cols());
    }
    frames.push_back(std::move(f));
  }

  auto data = std::make_shared<StarHom::Data>();
  data->src = src;
  data->dst = dst;
  data->map = raw;
  data->mult = std::move(mult);
  data->frames = std::move(frames);
  StarHom hom;
  hom.d_ = data;

  // The normal form must reproduce every basis image; this doubles as the
  // multiplicativity check when the exhaustive sweep was skipped.
  double worst = 0.0;
  int where = -1;
  for (int a = 0; a < d; ++a) {
    const double res = residual(hom(basis_element(src, a)), img[static_cast<std::size_t>(a)]);
    if (res > worst) {
      worst = res;
      where = a;
    }
  }
  if (worst > tol)
    throw ResidualError(ErrorKind::NotMultiplicative, "normal form mismatch at " + basis_name(src, where),
                        worst);
  return hom;
}

StarHom star_hom_from_function(const FdCstarAlgebra& src, const FdCstarAlgebra& dst,
                               const std::function<AlgElement(const AlgElement&)>& f) {
  Mat raw(dst.dim(), src.dim());
  for (int a = 0; a < src.dim(); ++a) {
    const auto y = f(basis_element(src, a));
    if (!(y.parent == dst)) throw Error(ErrorKind::ShapeMismatch, "function lands outside target");
    raw.col(a) = to_coords(y);
  }
  return make_star_hom(src, dst, raw);
}

StarHom identity_hom(const FdCstarAlgebra& alg) {
  return make_star_hom(alg, alg, Mat::Identity(alg.dim(), alg.dim()));
}

StarHom compose_homs(const StarHom& psi, const StarHom& phi) {
  if (!(phi.dst() == psi.src())) throw Error(ErrorKind::ShapeMismatch, "compose: phi.dst != psi.src");
  Mat raw(psi.dst().dim(), phi.src().dim());
  for (int a = 0; a < phi.src().dim(); ++a) {
    const auto mid = from_coords(phi.dst(), phi.matrix().col(a));
    raw.col(a) = to_coords(psi(mid));
  }
  auto out = make_star_hom(phi.src(), psi.dst(), raw);
  if (out.mult_matrix() != phi.mult_matrix() * psi.mult_matrix())
    throw Error(ErrorKind::NotMultiplicative, "composite multiplicities do not compose");
  return out;
}

double hom_residual(const StarHom& a, const StarHom& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) return std::numeric_limits<double>::infinity();
  return frob(a.matrix() - b.matrix());
}

bool is_full_hom(const StarHom& phi) {
  // span{E_xy p E_zw} inside block j consists of the multiples p(y,z) E_xw, so
  // its rank is the number of positions (x,w) reached with a nonzero scalar.
  const auto p = phi.unit_image();
  const double tol = eps();
  int rank = 0;
  for (int j = 0; j < phi.dst().num_blocks(); ++j) {
    const auto& pj = p.mats[static_cast<std::size_t>(j)];
    const int m = phi.dst().block(j);
    bool any = false;
    for (int y = 0; y < m && !any; ++y)
      for (int z = 0; z < m && !any; ++z) any = std::abs(pj(y, z)) > tol;
    if (any) rank += m * m;
  }
  return rank == phi.dst().dim();
}

Corner corner_algebra(const AlgElement& p) {
  const double tol = eps();
  if (!is_projection(p, tol)) throw Error(ErrorKind::NotProjection, "corner_algebra needs a projection");
  const auto& amb = p.parent;
  std::vector<int> blocks;
  std::vector<Mat> isometries, unitaries;
  std::vector<int> owner;
  for (int j = 0; j < amb.num_blocks(); ++j) {
    const auto& pj = p.mats[static_cast<std::size_t>(j)];
    const int m = amb.block(j);
    const int r = numeric_rank(pj, tol);
    Mat v = r ? orthonormal_columns(pj, r) : Mat(m, 0);
    Mat comp = (m - r) ? orthonormal_columns(Mat::Identity(m, m) - pj, m - r) : Mat(m, 0);
    Mat u(m, m);
    u << v, comp;
    unitaries.push_back(u);
    if (r > 0) {
      blocks.push_back(r);
      isometries.push_back(v);
      owner.push_back(j);
    }
  }
  const auto corner = algebra_from_blocks(blocks);
  auto inclusion = star_hom_from_function(corner, amb, [&](const AlgElement& x) {
    auto y = zero_element(amb);
    for (std::size_t c = 0; c < owner.size(); ++c)
      y.mats[static_cast<std::size_t>(owner[c])] = isometries[c] * x.mats[c] * isometries[c].adjoint();
    return y;
  });
  return {corner, inclusion, unitaries};
}

}  // namespace corrlab
