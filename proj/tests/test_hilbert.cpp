#include "doctest.h"

#include "corrlab/errors.hpp"
#include "corrlab/hilbert.hpp"
#include "corrlab/random.hpp"
#include "oracles.hpp"

using namespace corrlab;

namespace {

Correspondence corr_with(const FdCstarAlgebra& a, const FdCstarAlgebra& b, Rng& rng) {
  return random_corr(rng, a, b, false, 6);
}

}  // namespace

TEST_CASE("module basics") {
  const auto c = make_algebra({1});
  const auto e = make_module(c, {2});
  CHECK(e.compacts() == make_algebra({2}));

  const auto m2 = make_algebra({2});
  const auto f = make_module(m2, {3});
  CHECK(f.compacts() == make_algebra({3}));
  // K(E) is spanned by rank-one operators |x><y|
  {
    const auto basis = oracle::complex_basis(f);
    Mat cols(9, static_cast<Eigen::Index>(basis.size() * basis.size()));
    Eigen::Index k = 0;
    for (const auto& x : basis)
      for (const auto& y : basis) {
        const Mat op = x[0] * y[0].adjoint();
        cols.col(k++) = Eigen::Map<const Vec>(op.data(), 9);
      }
    CHECK(oracle::svd_rank(cols) == 9);
  }

  const auto m2c = make_algebra({2, 1});
  const auto g = make_module(m2c, {0, 1});
  CHECK(g.compacts() == make_algebra({1}));
  CHECK(g.compact_block(0) == -1);
  CHECK(g.base_block(0) == 1);
  CHECK_THROWS_AS(make_module(m2c, {1}), Error);
}

TEST_CASE("direct sums") {
  const auto c = make_algebra({1});
  const auto s = direct_sum(make_module(c, {2}), make_module(c, {1}));
  CHECK(s.module.mult() == std::vector<int>{3});
  const auto m2c = make_algebra({2, 1});
  const auto t = direct_sum(make_module(m2c, {1, 0}), make_module(m2c, {0, 2}));
  CHECK(t.module.mult() == std::vector<int>{1, 2});
  const auto e = make_module(m2c, {2, 1});
  CHECK(direct_sum(e, make_module(m2c, {0, 0})).module == e);
  CHECK_THROWS_AS(direct_sum(e, make_module(c, {1})), Error);
  // the inclusions are isometries with orthogonal ranges
  for (std::size_t k = 0; k < t.first.size(); ++k) {
    CHECK(frob(t.first[k].adjoint() * t.second[k]) == 0.0);
    CHECK(frob(t.first[k].adjoint() * t.first[k] - Mat::Identity(t.first[k].cols(), t.first[k].cols())) == 0.0);
  }
}

TEST_CASE("identity correspondences and fullness") {
  for (auto blocks : {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{2, 1}}) {
    const auto a = make_algebra(blocks);
    const auto id = identity_corr(a);
    CHECK(id.mult() == blocks);
    CHECK(is_full_corr(id));
    CHECK(hom_residual(id.left_action(), identity_hom(a)) == 0.0);
  }
  const auto m2c = make_algebra({2, 1});
  CHECK_FALSE(make_module(m2c, {1, 0}).is_full());
  CHECK(make_module(m2c, {1, 3}).is_full());
  CHECK(oracle::inner_span_rank(make_module(m2c, {1, 3})) == 5);
  CHECK(oracle::inner_span_rank(make_module(m2c, {1, 0})) == 4);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = random_algebra(rng, 3, 3);
    std::vector<int> mult;
    for (int k = 0; k < b.num_blocks(); ++k) mult.push_back(std::uniform_int_distribution<int>(0, 2)(rng));
    const auto e = make_module(b, mult);
    CHECK(e.is_full() == (oracle::inner_span_rank(e) == b.dim()));
  }
}

TEST_CASE("left action must be unital") {
  const auto c = make_algebra({1});
  const auto e = make_module(c, {2});
  Mat corner = Mat::Zero(4, 1);
  corner(0, 0) = 1.0;
  CHECK_THROWS_AS(make_corr(e, make_star_hom(c, e.compacts(), corner)), Error);
}

TEST_CASE("tensor product matches the balanced quotient") {
  // E over M2 with mult 3, F: M2 -> C with the identity action on C^2
  const auto m2 = make_algebra({2});
  const auto c = make_algebra({1});
  const auto f = make_corr(make_module(c, {2}), identity_hom(m2));
  Rng rng(1);
  const auto e = make_corr(make_module(m2, {3}), random_hom_with_mult(rng, c, make_algebra({3}), IntMat::Constant(1, 1, 3)));
  const auto ef = tensor(e, f);
  CHECK(ef.mult() == std::vector<int>{3});
  CHECK(oracle::quotient_dim(e, f) == 3);

  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_algebra(rng, 2, 2);
    const auto b = random_algebra(rng, 2, 3);
    const auto cc = random_algebra(rng, 2, 2);
    const auto e1 = corr_with(a, b, rng);
    const auto f1 = corr_with(b, cc, rng);
    const auto t = tensor(e1, f1);
    for (int k = 0; k < cc.num_blocks(); ++k) {
      long long q = 0;
      for (int i = 0; i < b.num_blocks(); ++i) q += e1.mult(i) * f1.action_mult()(i, k);
      CHECK(t.mult(k) == q);
    }
    CHECK(oracle::module_dim(t.module()) == oracle::quotient_dim(e1, f1));

    // inner products of elementary tensors, and balancing
    const auto x = random_element(rng, e1.module()), x2 = random_element(rng, e1.module());
    const auto y = random_element(rng, f1.module()), y2 = random_element(rng, f1.module());
    const auto lhs = inner(t.module(), tensor_element(e1, f1, x, y), tensor_element(e1, f1, x2, y2));
    const auto lam = oracle::dense_action(f1, inner(e1.module(), x, x2));
    ModElement ly = apply_op(lam, y2);
    CHECK(residual(lhs, inner(f1.module(), y, ly)) < 1e-9);
    const auto bb = random_alg_element(rng, b);
    CHECK(module_residual(tensor_element(e1, f1, right_mult(x, bb), y),
                          tensor_element(e1, f1, x, f1.act(bb, y))) < 1e-9);
    // left action
    const auto aa = random_alg_element(rng, a);
    CHECK(module_residual(t.act(aa, tensor_element(e1, f1, x, y)),
                          tensor_element(e1, f1, e1.act(aa, x), y)) < 1e-9);
  }
  CHECK_THROWS_AS(tensor(f, f), Error);
}

TEST_CASE("isomorphism validation") {
  Rng rng(4);
  const auto a = make_algebra({2, 1});
  const auto b = make_algebra({1, 2});
  const auto e = random_corr(rng, a, b, true);
  CHECK_NOTHROW(identity_iso(e));
  BlockOp phase;
  for (int m : e.mult()) phase.push_back(std::polar(1.0, 0.7) * Mat::Identity(m, m));
  CHECK_NOTHROW(make_iso(e, e, phase));

  BlockOp bad = phase;
  bad[0](0, 0) *= 1.001;
  CHECK_THROWS_AS(make_iso(e, e, bad), ResidualError);

  // a random unitary generally fails to intertwine
  const auto u = random_block_unitary(rng, e.mult());
  bool threw = false;
  try {
    make_iso(e, e, u);
  } catch (const ResidualError& err) {
    threw = err.kind() == ErrorKind::NotIntertwining;
  }
  CHECK(threw);

  // conjugating the action by a unitary yields an iso
  const auto h = star_hom_from_function(a, e.module().compacts(), [&](const AlgElement& x) {
    return from_block_op(e.module(), block_compose(block_compose(u, e.act(x)), block_adjoint(u)));
  });
  const auto e2 = make_corr(e.module(), h);
  const auto iso = make_iso(e, e2, u);
  CHECK(iso_residual(compose_isos(inverse_iso(iso), iso), identity_iso(e)) < 1e-12);

  // dense-form constructor checks right-linearity
  std::vector<Mat> expanded;
  for (int k = 0; k < b.num_blocks(); ++k) expanded.push_back(kron_identity(u[static_cast<std::size_t>(k)], b.block(k)));
  const Mat dense = direct_sum(expanded);
  CHECK(iso_residual(make_iso_from_linear(e, e2, dense), iso) < 1e-12);
  Mat skew = dense;
  skew(0, 1) += 0.5;
  CHECK_THROWS_AS(make_iso_from_linear(e, e2, skew), ResidualError);
}

TEST_CASE("swap of summands") {
  const auto c = make_algebra({1});
  const auto e = make_module(c, {2});
  const auto f = make_module(c, {1});
  const auto ef = direct_sum(e, f).module;
  // C acting by scalars on both sums
  const auto lhs = make_corr(ef, star_hom_from_function(c, ef.compacts(), [&](const AlgElement& x) {
                               AlgElement y{ef.compacts(), {x.mats[0](0, 0) * Mat::Identity(3, 3)}};
                               return y;
                             }));
  Mat p = Mat::Zero(3, 3);
  p(0, 1) = p(1, 2) = p(2, 0) = 1.0;
  CHECK_NOTHROW(make_iso(lhs, lhs, {p}));
}

TEST_CASE("associator and unitors") {
  Rng rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = random_algebra(rng, 2, 2);
    const auto b = random_algebra(rng, 2, 2);
    const auto c = random_algebra(rng, 2, 2);
    const auto d = random_algebra(rng, 2, 2);
    const auto e = corr_with(a, b, rng);
    const auto f = corr_with(b, c, rng);
    const auto g = corr_with(c, d, rng);
    const auto assoc = associator(e, f, g);
    // on random elementary tensors, not just the generators
    const auto x = random_element(rng, e.module());
    const auto y = random_element(rng, f.module());
    const auto w = random_element(rng, g.module());
    const auto ef = tensor(e, f);
    const auto fg = tensor(f, g);
    CHECK(module_residual(assoc(tensor_element(ef, g, tensor_element(e, f, x, y), w)),
                          tensor_element(e, fg, x, tensor_element(f, g, y, w))) < 1e-9);
    CHECK(iso_residual(compose_isos(inverse_iso(assoc), assoc), identity_iso(assoc.src())) < 1e-9);

    const auto lu = left_unitor(e);
    const auto ru = right_unitor(e);
    CHECK(lu.dst().mult() == e.mult());
    CHECK(ru.src().mult() == e.mult());
    const auto aa = random_alg_element(rng, a);
    const auto id_a = identity_corr(a);
    CHECK(module_residual(lu(tensor_element(id_a, e, aa.mats, x)), e.act(aa, x)) < 1e-9);

    // triangle: (id_E (x) lambda_F) o assoc = rho_E (x) id_F on (E (x) B) (x) F
    const auto id_b = identity_corr(b);
    const auto lhs = compose_isos(whisker_left(e, left_unitor(f)), associator(e, id_b, f));
    const auto rhs = whisker_right(right_unitor(e), f);
    CHECK(iso_residual(lhs, rhs) < 1e-9);

    // right unitor of E (x) F against id (x) rho_F, through the associator
    const auto id_c = identity_corr(c);
    const auto r1 = right_unitor(ef);
    const auto r2 = compose_isos(whisker_left(e, right_unitor(f)), associator(e, f, id_c));
    CHECK(iso_residual(r1, r2) < 1e-9);

    // pentagon for the associator itself
    const auto h = corr_with(d, a, rng);
    const auto p1 = compose_isos(associator(e, f, tensor(g, h)), associator(ef, g, h));
    const auto p2 = compose_isos(whisker_left(e, associator(f, g, h)),
                                 compose_isos(associator(e, tensor(f, g), h), whisker_right(associator(e, f, g), h)));
    CHECK(iso_residual(p1, p2) < 1e-9);
  }
  const auto m2 = make_algebra({2, 1});
  const auto id = identity_corr(m2);
  CHECK(iso_residual(left_unitor(id), right_unitor(id)) < 1e-12);
}

TEST_CASE("tensor of isos is functorial") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_algebra(rng, 2, 2);
    const auto b = random_algebra(rng, 2, 2);
    const auto c = random_algebra(rng, 2, 2);
    const auto e = random_corr(rng, a, b, true, 5);
    const auto f = random_corr(rng, b, c, true, 5);
    auto twist = [&](const Correspondence& x) {
      const auto u = random_block_unitary(rng, x.mult());
      const auto h = star_hom_from_function(x.src(), x.module().compacts(), [&](const AlgElement& t) {
        return from_block_op(x.module(), block_compose(block_compose(u, x.act(t)), block_adjoint(u)));
      });
      return make_iso(x, make_corr(x.module(), h), u);
    };
    const auto u1 = twist(e), v1 = twist(f);
    const auto u2 = twist(u1.dst()), v2 = twist(v1.dst());
    const auto lhs = tensor_isos(compose_isos(u2, u1), compose_isos(v2, v1));
    const auto rhs = compose_isos(tensor_isos(u2, v2), tensor_isos(u1, v1));
    CHECK(iso_residual(lhs, rhs) < 1e-9);
    // u (x) v on elementary tensors
    const auto x = random_element(rng, e.module());
    const auto y = random_element(rng, f.module());
    const auto uv = tensor_isos(u1, v1);
    CHECK(module_residual(uv(tensor_element(e, f, x, y)), tensor_element(u1.dst(), v1.dst(), u1(x), v1(y))) < 1e-9);
  }
}
