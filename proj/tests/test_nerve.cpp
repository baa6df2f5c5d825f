#include "doctest.h"

#include "corrlab/errors.hpp"
#include "corrlab/nerve.hpp"
#include "corrlab/random.hpp"

using namespace corrlab;

namespace {

/// Composite of chain[i..j-1], identity when i == j, associated like gamma_simplex.
StarHom composite(const std::vector<StarHom>& chain, int i, int j) {
  if (i == j) return identity_hom(i == 0 ? chain.front().src() : chain[static_cast<std::size_t>(i - 1)].dst());
  StarHom h = chain[static_cast<std::size_t>(i)];
  for (int t = i + 1; t < j; ++t) h = compose_homs(chain[static_cast<std::size_t>(t)], h);
  return h;
}

BlockOp phase_on_first_block(const BlockOp& u) {
  BlockOp v = u;
  for (auto& b : v)
    if (b.size() > 0) {
      b *= std::polar(1.0, 0.3);
      break;
    }
  return v;
}

}  // namespace

TEST_CASE("low-dimensional simplices") {
  const auto a = make_algebra({2, 1});
  CHECK_NOTHROW(validate_simplex(gamma_simplex_vertex(a)));
  Rng rng(31);
  NCorrSimplex s({a, make_algebra({3})});
  s.set_corr(0, 1, random_corr(rng, a, s.algebra(1)));
  s.set_unit_data();
  CHECK_NOTHROW(validate_simplex(s));
}

TEST_CASE("gamma simplices are coherent") {
  Rng rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const auto chain = random_chain(rng, 3, 2, 3);
    SimplexReport report;
    const auto s = validate_simplex(gamma_simplex(chain), &report);
    CHECK(report.pentagons.size() == 1);
    CHECK(report.worst_pentagon < 1e-9);
    CHECK(report.worst_unit < 1e-9);
    // every pentagon, degenerate ones included, holds
    for (int i = 0; i <= 3; ++i)
      for (int j = i; j <= 3; ++j)
        for (int k = j; k <= 3; ++k)
          for (int l = k; l <= 3; ++l) CHECK(pentagon_residual(s, i, j, k, l) < 1e-9);
  }
}

TEST_CASE("corrupted iso fails the pentagon") {
  Rng rng(33);
  const auto chain = random_chain(rng, 3, 2, 3);
  auto s = gamma_simplex(chain);
  const auto& u = s.iso(0, 1, 3);
  s.set_iso(0, 1, 3, make_iso(u.src(), u.dst(), phase_on_first_block(u.unitary())));
  try {
    validate_simplex(s);
    FAIL("expected a pentagon failure");
  } catch (const ResidualError& e) {
    CHECK(e.kind() == ErrorKind::PentagonViolated);
    CHECK(e.where().find("(0,1,2,3)") != std::string::npos);
  }
}

TEST_CASE("unit conditions are enforced") {
  Rng rng(34);
  const auto chain = random_chain(rng, 1, 2, 3);
  auto s = gamma_simplex(chain);
  const auto& u = s.iso(0, 0, 1);
  s.set_iso(0, 0, 1, make_iso(u.src(), u.dst(), phase_on_first_block(u.unitary())));
  try {
    validate_simplex(s);
    FAIL("expected a unit failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnitConditionViolated);
  }
}

TEST_CASE("faces and degeneracies") {
  Rng rng(35);
  const auto chain = random_chain(rng, 2, 2, 3);
  const auto s = gamma_simplex(chain);
  CHECK(simplex_equal(apply_map(s, {0, 1, 2}), s, 0.0));
  const auto d1 = face(s, 1);
  const auto direct = gamma_simplex({compose_homs(chain[1], chain[0])});
  CHECK(simplex_equal(d1, direct, 1e-9));
  const auto s0 = degeneracy(face(s, 2), 0);
  CHECK_NOTHROW(validate_simplex(s0));
  CHECK(corr_equal(s0.corr(0, 1), identity_corr(s.algebra(0)), 0.0));
  CHECK_THROWS_AS(apply_map(s, {1, 0}), Error);

  const auto t = twist_simplex(rng, gamma_simplex(random_chain(rng, 3, 2, 2)));
  for (int j = 0; j <= 3; ++j)
    for (int i = 0; i < j; ++i)
      CHECK(simplex_equal(face(face(t, j), i), face(face(t, i), j - 1), 0.0));
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= j; ++i)
      CHECK(simplex_equal(degeneracy(degeneracy(face(t, 3), j), i), degeneracy(degeneracy(face(t, 3), i), j + 1), 0.0));
  for (int j = 0; j <= 3; ++j) CHECK(simplex_equal(face(degeneracy(t, j), j), t, 0.0));
}

TEST_CASE("gamma commutes with monotone maps") {
  Rng rng(36);
  const auto chain = random_chain(rng, 3, 2, 2);
  const auto s = gamma_simplex(chain);
  for (int a = 0; a <= 3; ++a)
    for (int b = a; b <= 3; ++b)
      for (int c = b; c <= 3; ++c) {
        const std::vector<int> phi{a, b, c};
        const auto lhs = apply_map(s, phi);
        const auto rhs = gamma_simplex({composite(chain, a, b), composite(chain, b, c)});
        CHECK(simplex_residual(lhs, rhs) < 1e-9);
      }
}

TEST_CASE("inner horn fills") {
  Rng rng(37);
  const auto chain = random_chain(rng, 2, 2, 3);
  const auto g = gamma_simplex(chain);
  const auto fill = fill_inner_horn(horn_of(g, 1));
  CHECK(corr_equal(fill.corr(0, 2), tensor(g.corr(0, 1), g.corr(1, 2)), 1e-12));
  const auto mult = gamma_multiplicativity(chain[0], chain[1]);
  CHECK(corr_equal(mult.src(), fill.corr(0, 2), 1e-9));
  CHECK(corr_equal(mult.dst(), g.corr(0, 2), 1e-9));

  for (int trial = 0; trial < 4; ++trial) {
    const auto s = twist_simplex(rng, gamma_simplex(random_chain(rng, 3, 2, 2)));
    for (int k : {1, 2}) {
      const auto f = fill_inner_horn(horn_of(s, k));
      CHECK(simplex_residual(f, s) < 1e-9);
    }
  }
  CHECK_THROWS_AS(fill_inner_horn(horn_of(g, 0)), Error);
}

TEST_CASE("incompatible faces are rejected") {
  Rng rng(38);
  const auto s = gamma_simplex(random_chain(rng, 3, 2, 2));
  auto horn = horn_of(s, 1);
  auto bad = *horn.faces[0];
  bad.set_corr(0, 1, random_twist(rng, bad.corr(0, 1)).dst());
  horn.faces[0] = bad;
  CHECK_THROWS_AS(fill_inner_horn(horn), Error);
  // in dimension 3 each u lives on one face, so any choice is fillable
  auto horn2 = horn_of(s, 2);
  auto bad2 = *horn2.faces[3];
  const auto& u = bad2.iso(0, 1, 2);
  bad2.set_iso(0, 1, 2, make_iso(u.src(), u.dst(), phase_on_first_block(u.unitary())));
  horn2.faces[3] = bad2;
  CHECK_NOTHROW(fill_inner_horn(horn2));
}

TEST_CASE("special outer horn fills") {
  Rng rng(39);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_algebra(rng, 2, 2);
    const auto b = random_algebra(rng, 2, 2);
    const auto e = random_corr(rng, a, b);
    const auto i_e = corner_embedding(e.module());
    const auto f_e = left_action_hom(e);
    HornSpec horn{2, 2, {gamma_simplex({i_e}), gamma_simplex({f_e}), std::nullopt}};
    const auto fill = fill_special_outer_horn(horn);
    const auto iso = normal_form_iso(fill.corr(0, 1), e);
    CHECK(iso.has_value());
  }
  {
    const auto chain = random_chain(rng, 1, 2, 3);
    const auto e02 = gamma_simplex(chain);
    HornSpec horn{2, 2, {degeneracy(gamma_simplex_vertex(chain[0].dst()), 0), e02, std::nullopt}};
    const auto fill = fill_special_outer_horn(horn);
    CHECK(normal_form_iso(fill.corr(0, 1), e02.corr(0, 1)).has_value());
  }
  for (int trial = 0; trial < 4; ++trial) {
    auto chain = random_chain(rng, 2, 2, 2);
    const auto extra = make_module(chain.back().dst(), [&] {
      std::vector<int> m;
      for (int k = 0; k < chain.back().dst().num_blocks(); ++k) m.push_back(std::uniform_int_distribution<int>(0, 2)(rng));
      return m;
    }());
    chain.push_back(corner_embedding(extra));
    const auto s = twist_simplex(rng, gamma_simplex(chain));
    const auto f = fill_special_outer_horn(horn_of(s, 3));
    CHECK(simplex_residual(f, s) < 1e-9);
  }
  // not an equivalence
  const auto chain = random_chain(rng, 2, 1, 2);
  auto doubled = chain;
  doubled[1] = random_hom_with_mult(rng, chain[1].src(), make_algebra({2 * chain[1].src().block(0)}),
                                    IntMat::Constant(1, 1, 2));
  CHECK_THROWS_AS(fill_special_outer_horn(horn_of(gamma_simplex(doubled), 2)), Error);
}
