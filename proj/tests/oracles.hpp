#pragma once

// Independent brute-force reference computations used by the tests. These
// deliberately avoid the library's normal forms and frames.

#include "corrlab/cstar.hpp"
#include "corrlab/hilbert.hpp"

#include <Eigen/SVD>

namespace oracle {

using namespace corrlab;

inline int svd_rank(const Mat& m, double tol = 1e-8) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

/// rank of phi(1) in target block j
inline int unit_image_rank(const StarHom& phi, int j) {
  Vec one = Vec::Zero(phi.src().dim());
  for (int i = 0; i < phi.src().num_blocks(); ++i)
    for (int a = 0; a < phi.src().block(i); ++a) one(basis_position(phi.src(), i, a, a)) = 1.0;
  const auto img = from_coords(phi.dst(), phi.matrix() * one);
  return svd_rank(img.mats[static_cast<std::size_t>(j)]);
}

/// r_ij = rank(phi(1_i)_j) / n_i straight from the dense matrix
inline IntMat mult_by_ranks(const StarHom& phi) {
  IntMat r(phi.src().num_blocks(), phi.dst().num_blocks());
  for (int i = 0; i < phi.src().num_blocks(); ++i) {
    Vec u = Vec::Zero(phi.src().dim());
    for (int a = 0; a < phi.src().block(i); ++a) u(basis_position(phi.src(), i, a, a)) = 1.0;
    const auto img = from_coords(phi.dst(), phi.matrix() * u);
    for (int j = 0; j < phi.dst().num_blocks(); ++j)
      r(i, j) = svd_rank(img.mats[static_cast<std::size_t>(j)]) / phi.src().block(i);
  }
  return r;
}

/// dim span{ b p b' } over basis pairs, as a vector-space rank
inline int span_rank_bpb(const StarHom& phi) {
  const auto& b = phi.dst();
  const auto p = phi.unit_image();
  Mat cols(b.dim(), static_cast<Eigen::Index>(b.dim()) * b.dim());
  Eigen::Index c = 0;
  for (int x = 0; x < b.dim(); ++x)
    for (int y = 0; y < b.dim(); ++y)
      cols.col(c++) = to_coords(multiply(multiply(basis_element(b, x), p), basis_element(b, y)));
  return svd_rank(cols);
}

/// Left action evaluated from the dense matrix of the hom, per base block.
inline BlockOp dense_action(const Correspondence& f, const AlgElement& b) {
  const auto img = from_coords(f.module().compacts(), f.left_action().matrix() * to_coords(b));
  BlockOp out;
  for (int k = 0; k < f.module().num_blocks(); ++k) {
    const int c = f.module().compact_block(k);
    out.push_back(c < 0 ? Mat(0, 0) : img.mats[static_cast<std::size_t>(c)]);
  }
  return out;
}

/// Complex basis of the module, one matrix unit at a time.
inline std::vector<ModElement> complex_basis(const HilbertModule& e) {
  std::vector<ModElement> out;
  for (int i = 0; i < e.num_blocks(); ++i)
    for (int a = 0; a < e.mult(i); ++a)
      for (int c = 0; c < e.base().block(i); ++c) {
        auto x = e.zero();
        x[static_cast<std::size_t>(i)](a, c) = 1.0;
        out.push_back(std::move(x));
      }
  return out;
}

/// Complex dimension of the balanced tensor product as the rank of the Gram
/// matrix of the semi-inner product on the algebraic tensor product.
inline int quotient_dim(const Correspondence& e, const Correspondence& f) {
  const auto be = complex_basis(e.module());
  const auto bf = complex_basis(f.module());
  const std::size_t ne = be.size(), nf = bf.size();
  std::vector<BlockOp> lam(ne * ne);
  std::vector<bool> nonzero(ne * ne, false);
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t c = 0; c < ne; ++c) {
      const auto ip = inner(e.module(), be[a], be[c]);
      double s = 0.0;
      for (const auto& m : ip.mats) s += m.squaredNorm();
      if (s == 0.0) continue;
      nonzero[a * ne + c] = true;
      lam[a * ne + c] = dense_action(f, ip);
    }
  const Eigen::Index n = static_cast<Eigen::Index>(ne * nf);
  Mat gram = Mat::Zero(n, n);
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t c = 0; c < ne; ++c) {
      if (!nonzero[a * ne + c]) continue;
      const auto& l = lam[a * ne + c];
      for (std::size_t b = 0; b < nf; ++b)
        for (std::size_t d = 0; d < nf; ++d) {
          cplx s = 0.0;
          for (std::size_t k = 0; k < l.size(); ++k)
            if (l[k].size() > 0) s += (bf[b][k].adjoint() * l[k] * bf[d][k]).trace();
          gram(static_cast<Eigen::Index>(a * nf + b), static_cast<Eigen::Index>(c * nf + d)) = s;
        }
    }
  return svd_rank(gram, 1e-8);
}

inline int module_dim(const HilbertModule& e) {
  int d = 0;
  for (int i = 0; i < e.num_blocks(); ++i) d += e.mult(i) * e.base().block(i);
  return d;
}

/// dim span{<x,y>} over complex basis pairs.
inline int inner_span_rank(const HilbertModule& e) {
  const auto basis = complex_basis(e);
  if (basis.empty()) return 0;
  Mat cols(e.base().dim(), static_cast<Eigen::Index>(basis.size() * basis.size()));
  Eigen::Index c = 0;
  for (const auto& x : basis)
    for (const auto& y : basis) cols.col(c++) = to_coords(inner(e, x, y));
  return svd_rank(cols);
}

/// K_0 map of a correspondence: rank of a minimal projection of each source
/// block acting on each base block.
inline IntMat k0_of_corr(const Correspondence& e) {
  IntMat m(e.dst().num_blocks(), e.src().num_blocks());
  for (int i = 0; i < e.src().num_blocks(); ++i) {
    const auto act = dense_action(e, matrix_unit(e.src(), i, 0, 0));
    for (int k = 0; k < e.dst().num_blocks(); ++k) m(k, i) = svd_rank(act[static_cast<std::size_t>(k)]);
  }
  return m;
}

}  // namespace oracle
