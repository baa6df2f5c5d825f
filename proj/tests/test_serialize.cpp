#include "doctest.h"

#include "corrlab/bicat.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/random.hpp"
#include "corrlab/serialize.hpp"

using namespace corrlab;

namespace {

ErrorKind kind_thrown(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("nothing thrown");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("algebra and hom round trip") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_algebra(rng, 3, 3).with_label("A");
    const auto back = algebra_from_json(parse_json(to_json(a).dump()));
    CHECK(back == a);
    CHECK(back.label() == "A");
    const auto phi = random_unital_hom(rng, a, 3, 4);
    const auto phi2 = hom_from_json(parse_json(to_json(phi).dump()));
    CHECK(hom_residual(phi, phi2) <= 1e-12);
    CHECK(phi2.mult_matrix() == phi.mult_matrix());
  }
}

TEST_CASE("module, correspondence and iso round trip") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_algebra(rng, 2, 3);
    const auto b = random_algebra(rng, 3, 2);
    const auto e = random_corr(rng, a, b, false, 3);
    CHECK(module_from_json(to_json(e.module())) == e.module());
    const auto e2 = corr_from_json(parse_json(to_json(e).dump()));
    CHECK(corr_equal(e, e2, 1e-12));
    const auto u = random_twist(rng, e);
    const auto u2 = iso_from_json(parse_json(to_json(u).dump()));
    CHECK(iso_residual(u, u2) <= 1e-12);
  }
}

TEST_CASE("simplex and horn round trip") {
  Rng rng(3);
  for (int n = 0; n <= 3; ++n) {
    const auto s = twist_simplex(rng, gamma_simplex_vertex(random_algebra(rng, 2, 2)));
    CHECK(simplex_equal(simplex_from_json(to_json(s)), s, 1e-12));
    if (n == 0) continue;
    const auto t = twist_simplex(rng, gamma_simplex(random_chain(rng, n, 2, 2)));
    const auto back = simplex_from_json(parse_json(to_json(t).dump()));
    CHECK(simplex_equal(back, t, 1e-12));
    CHECK_NOTHROW(validate_simplex(back));
    if (n < 2) continue;
    const auto h = horn_of(t, 1);
    const auto h2 = horn_from_json(parse_json(to_json(h).dump()));
    CHECK(h2.n == h.n);
    CHECK(h2.k == 1);
    CHECK_FALSE(h2.faces[1].has_value());
    CHECK(simplex_equal(*h2.faces[0], *h.faces[0], 1e-12));
  }
}

TEST_CASE("K0 simplex round trip") {
  Rng rng(4);
  const auto chain = random_chain(rng, 3, 3, 2);
  const auto s = k0_functor().simplex(chain.front().src(), chain);
  CHECK(k0_equal(k0_simplex_from_json(parse_json(to_json(s).dump())), s));
}

TEST_CASE("kinds") {
  Rng rng(5);
  const auto a = random_algebra(rng, 2, 2);
  CHECK(kind_of(to_json(a)) == "algebra");
  CHECK(kind_of(to_json(identity_hom(a))) == "star_hom");
  CHECK(kind_of(to_json(identity_corr(a))) == "correspondence");
  Json bare = to_json(identity_corr(a));
  bare.erase("kind");
  CHECK(kind_of(bare) == "correspondence");
}

TEST_CASE("parse and schema errors") {
  CHECK(kind_thrown([] { parse_json(""); }) == ErrorKind::ParseError);
  CHECK(kind_thrown([] { parse_json("{\"blocks\": [1,"); }) == ErrorKind::ParseError);
  CHECK(kind_thrown([] { algebra_from_json(parse_json("{\"blocks\": [1, \"x\"]}")); }) == ErrorKind::SchemaError);
  CHECK(kind_thrown([] { algebra_from_json(parse_json("{\"blocks\": [0]}")); }) == ErrorKind::SchemaError);
  try {
    hom_from_json(parse_json(R"({"src":{"blocks":[1]},"dst":{"blocks":[1]},"matrix":[[[1,0],[0,0]]]})"));
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
    CHECK(std::string(e.what()).find("$/matrix/0") != std::string::npos);
  }
}

TEST_CASE("trace and functor dumps") {
  Rng rng(6);
  const auto sigma = random_simplex(rng, 2, 2, 2);
  Extender<K0Nerve> ext(K0Nerve{}, k0_functor());
  ext.bar_F(sigma);
  const auto j = to_json(ext.trace());
  REQUIRE(j.is_array());
  CHECK(j.back()["horn"] == "(3,3)");
  CHECK(j.back()["type"] == "special");
  const auto f = to_json(subdivision_functor(sigma));
  CHECK(f["vertices"].size() == 7);
  CHECK(f["homs"].size() == 12);
  CHECK(f["vertices"][2]["set"] == Json::array({0, 1}));
}
