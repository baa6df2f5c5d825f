#include "corrlab/random.hpp"

#include "corrlab/errors.hpp"

namespace corrlab {

namespace {
int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
}  // namespace

Mat random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

FdCstarAlgebra random_algebra(Rng& rng, int max_blocks, int max_size) {
  std::vector<int> blocks(static_cast<std::size_t>(uniform(rng, 1, max_blocks)));
  for (auto& b : blocks) b = uniform(rng, 1, max_size);
  return make_algebra(blocks);
}

StarHom random_hom_with_mult(Rng& rng, const FdCstarAlgebra& src, const FdCstarAlgebra& dst,
                             const IntMat& mult) {
  if (mult.rows() != src.num_blocks() || mult.cols() != dst.num_blocks())
    throw Error(ErrorKind::ShapeMismatch, "multiplicity matrix shape");
  std::vector<Mat> frames;
  for (int j = 0; j < dst.num_blocks(); ++j) {
    long long width = 0;
    for (int i = 0; i < src.num_blocks(); ++i) width += mult(i, j) * src.block(i);
    if (width > dst.block(j)) throw Error(ErrorKind::ShapeMismatch, "multiplicities exceed block");
    frames.push_back(haar_unitary(dst.block(j), rng).leftCols(width));
  }
  return star_hom_from_function(src, dst, [&](const AlgElement& x) {
    AlgElement y = zero_element(dst);
    for (int j = 0; j < dst.num_blocks(); ++j) {
      std::vector<Mat> parts;
      for (int i = 0; i < src.num_blocks(); ++i)
        if (mult(i, j) > 0)
          parts.push_back(kron_identity(x.mats[static_cast<std::size_t>(i)], static_cast<int>(mult(i, j))));
      const Mat& f = frames[static_cast<std::size_t>(j)];
      if (f.cols() > 0) y.mats[static_cast<std::size_t>(j)] = f * direct_sum(parts) * f.adjoint();
    }
    return y;
  });
}

StarHom random_unital_hom(Rng& rng, const FdCstarAlgebra& src, int max_blocks, int max_size) {
  // Resample until every target block stays within max_size.
  for (int attempt = 0;; ++attempt) {
    const int s = uniform(rng, 1, max_blocks);
    IntMat mult = IntMat::Zero(src.num_blocks(), s);
    std::vector<int> blocks(static_cast<std::size_t>(s), 0);
    bool ok = true;
    for (int j = 0; j < s && ok; ++j) {
      for (int i = 0; i < src.num_blocks(); ++i) {
        mult(i, j) = uniform(rng, 0, 2);
        blocks[static_cast<std::size_t>(j)] += static_cast<int>(mult(i, j)) * src.block(i);
      }
      if (blocks[static_cast<std::size_t>(j)] == 0) {
        const int i = uniform(rng, 0, src.num_blocks() - 1);
        mult(i, j) = 1;
        blocks[static_cast<std::size_t>(j)] = src.block(i);
      }
      ok = blocks[static_cast<std::size_t>(j)] <= max_size || attempt > 200;
    }
    if (!ok) continue;
    return random_hom_with_mult(rng, src, make_algebra(blocks), mult);
  }
}

StarHom random_hom_into(Rng& rng, const FdCstarAlgebra& src, const FdCstarAlgebra& dst) {
  IntMat mult = IntMat::Zero(src.num_blocks(), dst.num_blocks());
  for (int j = 0; j < dst.num_blocks(); ++j) {
    int room = dst.block(j);
    for (int i = 0; i < src.num_blocks(); ++i) {
      const int cap = room / src.block(i);
      const int r = uniform(rng, 0, std::min(cap, 2));
      mult(i, j) = r;
      room -= r * src.block(i);
    }
  }
  return random_hom_with_mult(rng, src, dst, mult);
}

ModElement random_element(Rng& rng, const HilbertModule& e) {
  ModElement x;
  for (int i = 0; i < e.num_blocks(); ++i) x.push_back(random_matrix(rng, e.mult(i), e.base().block(i)));
  return x;
}

AlgElement random_alg_element(Rng& rng, const FdCstarAlgebra& a) {
  AlgElement x{a, {}};
  for (int n : a.blocks()) x.mats.push_back(random_matrix(rng, n, n));
  return x;
}

Correspondence random_corr(Rng& rng, const FdCstarAlgebra& a, const FdCstarAlgebra& b, bool full,
                           int max_mult) {
  IntMat r = IntMat::Zero(a.num_blocks(), b.num_blocks());
  std::vector<int> mult(static_cast<std::size_t>(b.num_blocks()), 0);
  for (int k = 0; k < b.num_blocks(); ++k) {
    int room = max_mult;
    for (int i = 0; i < a.num_blocks(); ++i) {
      const int cap = std::min(2, room / a.block(i));
      const int ri = cap > 0 ? uniform(rng, 0, cap) : 0;
      r(i, k) = ri;
      room -= ri * a.block(i);
    }
    if (full && room == max_mult) {
      int best = 0;
      for (int i = 1; i < a.num_blocks(); ++i)
        if (a.block(i) < a.block(best)) best = i;
      r(best, k) = 1;
      room -= a.block(best);
    }
    mult[static_cast<std::size_t>(k)] = max_mult - room;
  }
  const auto module = make_module(b, mult);
  IntMat rc(a.num_blocks(), module.compacts().num_blocks());
  for (int c = 0; c < module.compacts().num_blocks(); ++c) rc.col(c) = r.col(module.base_block(c));
  return make_corr(module, random_hom_with_mult(rng, a, module.compacts(), rc));
}

BlockOp random_block_unitary(Rng& rng, const std::vector<int>& sizes) {
  BlockOp u;
  for (int n : sizes) u.push_back(n > 0 ? haar_unitary(n, rng) : Mat(0, 0));
  return u;
}

CorrIso random_twist(Rng& rng, const Correspondence& e) {
  const auto u = random_block_unitary(rng, e.mult());
  const auto h = star_hom_from_function(e.src(), e.module().compacts(), [&](const AlgElement& x) {
    return from_block_op(e.module(), block_compose(block_compose(u, e.act(x)), block_adjoint(u)));
  });
  return make_iso(e, make_corr(e.module(), h), u);
}

NCorrSimplex twist_simplex(Rng& rng, const NCorrSimplex& s) {
  const int n = s.dim();
  std::vector<std::vector<std::optional<CorrIso>>> t(static_cast<std::size_t>(n + 1),
                                                     std::vector<std::optional<CorrIso>>(static_cast<std::size_t>(n + 1)));
  NCorrSimplex out(s.algebras());
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = random_twist(rng, s.corr(i, j));
      out.set_corr(i, j, t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]->dst());
    }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        const auto& tij = *t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const auto& tjk = *t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        const auto& tik = *t[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        out.set_iso(i, j, k, compose_isos(tik, compose_isos(s.iso(i, j, k), inverse_iso(tensor_isos(tij, tjk)))));
      }
  out.set_unit_data();
  return validate_simplex(out);
}

std::vector<StarHom> random_chain(Rng& rng, int n, int max_blocks, int max_size) {
  const auto a0 = random_algebra(rng, max_blocks, std::min(2, max_size));
  for (;;) {
    std::vector<StarHom> chain;
    auto a = a0;
    IntMat total = IntMat::Identity(a0.num_blocks(), a0.num_blocks());
    for (int step = 0; step < n; ++step) {
      for (;;) {
        const auto b = random_algebra(rng, max_blocks, max_size);
        auto h = random_hom_into(rng, a, b);
        if (h.mult_matrix().sum() == 0) continue;
        total = total * h.mult_matrix();
        chain.push_back(h);
        a = b;
        break;
      }
    }
    // the full composite must be nonzero too
    if (total.sum() > 0) return chain;
  }
}

NCorrSimplex random_simplex(Rng& rng, int n, int max_blocks, int max_size, int max_mult) {
  if (n < 0 || n > 3) throw Error(ErrorKind::DimensionTooLarge, "random_simplex supports n <= 3");
  std::vector<FdCstarAlgebra> algs;
  for (int i = 0; i <= n; ++i) algs.push_back(random_algebra(rng, max_blocks, max_size));
  const auto edge = [&](int i) {
    NCorrSimplex e({algs[static_cast<std::size_t>(i)], algs[static_cast<std::size_t>(i + 1)]});
    e.set_corr(0, 1, random_corr(rng, e.algebra(0), e.algebra(1), false, max_mult));
    e.set_unit_data();
    return e;
  };
  if (n == 0) return gamma_simplex_vertex(algs[0]);
  if (n == 1) return edge(0);
  const auto tri = [](const NCorrSimplex& a, const NCorrSimplex& b) {
    return fill_inner_horn(HornSpec{2, 1, {b, std::nullopt, a}});
  };
  const auto e01 = edge(0), e12 = edge(1);
  const auto t012 = tri(e01, e12);
  if (n == 2) return t012;
  const auto e23 = edge(2);
  const auto t123 = tri(e12, e23);
  const auto t023 = tri(face(t012, 1), e23);
  return fill_inner_horn(HornSpec{3, 2, {t123, t023, std::nullopt, t012}});
}

}  // namespace corrlab
