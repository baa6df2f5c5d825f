#include "doctest.h"

#include "corrlab/bicat.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/random.hpp"
#include "corrlab/subdivision.hpp"
#include "oracles.hpp"

#include <bit>
#include <set>

using namespace corrlab;

namespace {

// Chains of length l+1 in the subset poset via powers of the zeta matrix.
long long count_sd(int n, int l, bool strict) {
  const int m = (1 << (n + 1)) - 1;
  std::vector<long long> v(static_cast<std::size_t>(m), 1);
  for (int step = 0; step < l; ++step) {
    std::vector<long long> w(static_cast<std::size_t>(m), 0);
    for (int s = 1; s <= m; ++s)
      for (int t = 1; t <= m; ++t)
        if ((s & ~t) == 0 && (!strict || s != t)) w[static_cast<std::size_t>(t - 1)] += v[static_cast<std::size_t>(s - 1)];
    v = w;
  }
  long long total = 0;
  for (auto x : v) total += x;
  return total;
}

// Literal reading of (i_0..i_k, S_{k+1}..S_l): try every split point k.
bool literal_csd(int n, const std::vector<unsigned>& e) {
  const int l = static_cast<int>(e.size()) - 1;
  for (int k = -1; k <= l; ++k) {
    bool ok = true;
    unsigned prefix = 0;
    int last = -1;
    for (int a = 0; a <= k && ok; ++a) {
      if (std::popcount(e[static_cast<std::size_t>(a)]) != 1) ok = false;
      const int v = std::countr_zero(e[static_cast<std::size_t>(a)]);
      if (v < last || v > n) ok = false;
      last = v;
      prefix |= e[static_cast<std::size_t>(a)];
    }
    for (int a = k + 1; a <= l && ok; ++a) {
      const unsigned s = e[static_cast<std::size_t>(a)];
      if (std::popcount(s) < 2) ok = false;
      if (a == k + 1 && (prefix & ~s) != 0) ok = false;
      if (a > k + 1 && (e[static_cast<std::size_t>(a - 1)] & ~s) != 0) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

long long count_csd(int n, int l) {
  const unsigned m = (1u << (n + 1)) - 1;
  std::vector<unsigned> e(static_cast<std::size_t>(l + 1), 1);
  long long count = 0;
  for (;;) {
    if (literal_csd(n, e)) ++count;
    int a = 0;
    while (a <= l && e[static_cast<std::size_t>(a)] == m) e[static_cast<std::size_t>(a++)] = 1;
    if (a > l) break;
    ++e[static_cast<std::size_t>(a)];
  }
  return count;
}

std::vector<std::vector<int>> monotone_maps(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == m + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = cur.empty() ? 0 : cur.back(); v <= n; ++v) {
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace

TEST_CASE("subdivision counts") {
  const auto e = enumerate_sd(1, 1);
  int nd = 0;
  for (const auto& c : e) nd += c.nondegenerate();
  CHECK(nd == 2);
  for (int n = 0; n <= 3; ++n)
    for (int l = 0; l <= 3; ++l) {
      const auto sd = enumerate_sd(n, l);
      long long strict = 0;
      for (const auto& c : sd) strict += c.nondegenerate();
      CHECK(static_cast<long long>(sd.size()) == count_sd(n, l, false));
      CHECK(strict == count_sd(n, l, true));
    }
  // Sd of a triangle: 7 vertices, 12 edges, 6 triangles.
  const auto nondeg = [](int l) {
    int c = 0;
    for (const auto& x : enumerate_sd(2, l)) c += x.nondegenerate();
    return c;
  };
  CHECK(nondeg(0) == 7);
  CHECK(nondeg(1) == 12);
  CHECK(nondeg(2) == 6);
  CHECK_THROWS_AS(enumerate_sd(5, 1), Error);
  CHECK_THROWS_AS(enumerate_csd(5, 1), Error);
}

TEST_CASE("augmented subdivision enumeration") {
  for (int n = 0; n <= 2; ++n)
    for (int l = 0; l <= 3; ++l) {
      const auto all = enumerate_csd(n, l);
      CHECK(static_cast<long long>(all.size()) == count_csd(n, l));
      std::set<AugChain> unique(all.begin(), all.end());
      CHECK(unique.size() == all.size());
    }
  CHECK(static_cast<long long>(enumerate_csd(3, 2).size()) == count_csd(3, 2));
  const auto tri = aug_from_prefix(1, {0, 1}, {0b11});
  bool found = false;
  for (const auto& c : enumerate_csd(1, 2))
    if (c == tri) found = c.nondegenerate();
  CHECK(found);
  // every Sd chain is an augmented chain
  for (const auto& c : enumerate_sd(2, 2)) CHECK(aug_from_sd(c).in_sd());
}

TEST_CASE("augmented chain faces") {
  const auto c = aug_from_prefix(1, {0, 1}, {0b11});
  CHECK(face(c, 2) == aug_from_prefix(1, {0, 1}, {}));
  CHECK(face(c, 1) == aug_from_prefix(1, {0}, {0b11}));
  CHECK(face(c, 2).k() == 1);
  CHECK(c.name() == "(0,1,{0,1})");
  CHECK_THROWS_AS(face(c, 3), Error);
  CHECK_THROWS_AS(make_aug_chain(1, {0b11, 0b01}), Error);
  CHECK_THROWS_AS(make_aug_chain(2, {0b100, 0b011}), Error);
  CHECK_THROWS_AS(make_aug_chain(1, {0b10, 0b01}), Error);
}

TEST_CASE("simplicial identities on the augmented subdivision") {
  for (int n = 0; n <= 3; ++n)
    for (int l = 1; l <= 4; ++l)
      for (const auto& c : enumerate_csd(n, l)) {
        for (int j = 0; j <= l; ++j)
          for (int i = 0; i < j && l >= 2; ++i) CHECK(face(face(c, j), i) == face(face(c, i), j - 1));
        for (int j = 0; j <= l; ++j) {
          const auto s = degeneracy(c, j);
          CHECK(face(s, j) == c);
          CHECK(face(s, j + 1) == c);
          for (int i = 0; i <= j; ++i) CHECK(degeneracy(degeneracy(c, j), i) == degeneracy(degeneracy(c, i), j + 1));
        }
      }
}

TEST_CASE("phi_* is simplicial") {
  const auto tri = aug_from_prefix(1, {0, 1}, {0b11});
  CHECK(phi_star({0, 1}, 1, tri) == tri);
  CHECK(phi_star({0, 1}, 2, tri) == aug_from_prefix(2, {0, 1}, {0b011}));
  CHECK(phi_star({0, 0, 1}, 1, aug_from_prefix(2, {0}, {0b111})) == aug_from_prefix(1, {0}, {0b11}));
  CHECK(phi_star({0, 0}, 0, tri) == make_aug_chain(0, {1, 1, 1}));
  CHECK_THROWS_AS(phi_star({1, 0}, 1, tri), Error);
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 3; ++n)
      for (const auto& phi : monotone_maps(m, n))
        for (int l = 1; l <= 2; ++l)
          for (const auto& c : enumerate_csd(m, l)) {
            const auto img = phi_star(phi, n, c);
            for (int j = 0; j <= l; ++j) {
              CHECK(phi_star(phi, n, face(c, j)) == face(img, j));
              CHECK(phi_star(phi, n, degeneracy(c, j)) == degeneracy(img, j));
            }
          }
  for (int v = 0; v <= 2; ++v) {
    std::vector<int> coface;
    for (int a = 0; a < 2; ++a) coface.push_back(a < v ? a : a + 1);
    for (const auto& c : enumerate_csd(2, 2)) {
      if (c.top() & (1u << v)) continue;
      CHECK(phi_star(coface, 2, restrict_away(c, v)) == c);
    }
  }
}

TEST_CASE("E_S and the edge homs") {
  Rng rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = random_algebra(rng, 2, 2);
    const auto b = random_algebra(rng, 2, 3);
    NCorrSimplex s({a, b});
    s.set_corr(0, 1, random_corr(rng, a, b));
    s.set_unit_data();
    const auto& e = s.corr(0, 1);
    CHECK(algebra_A_S(s, 0b01) == a);
    CHECK(algebra_A_S(s, 0b11) == corner_module(e.module()).compacts());
    CHECK(hom_residual(f_ST(s, 0b10, 0b11), corner_embedding(e.module())) == 0.0);
    CHECK(hom_residual(f_ST(s, 0b01, 0b11), left_action_hom(e)) < 1e-9);
    CHECK(hom_residual(f_ST(s, 0b11, 0b11), identity_hom(algebra_A_S(s, 0b11))) == 0.0);
    CHECK_THROWS_AS(f_ST(s, 0b11, 0b01), Error);
  }
  // Gamma 2-simplex: E_S for S = {0,1,2} has multiplicity sum_l rank of the unit image of A_l in A_2
  const auto chain = random_chain(rng, 2, 2, 3);
  const auto g = gamma_simplex(chain);
  const auto es = module_E_S(g, 0b111);
  const auto h02 = compose_homs(chain[1], chain[0]);
  for (int k = 0; k < g.algebra(2).num_blocks(); ++k) {
    const int expect = oracle::svd_rank(h02.unit_image().mats[static_cast<std::size_t>(k)]) +
                       oracle::svd_rank(chain[1].unit_image().mats[static_cast<std::size_t>(k)]) +
                       g.algebra(2).block(k);
    CHECK(es.mult(k) == expect);
  }
}

TEST_CASE("subdivision functoriality") {
  Rng rng(42);
  for (int trial = 0; trial < 4; ++trial) {
    const auto g = gamma_simplex(random_chain(rng, 2, 2, 3));
    FunctorReport rep;
    subdivision_functor(g, &rep);
    CHECK(rep.chains == static_cast<int>(enumerate_sd(2, 2).size()));
    CHECK(rep.worst < 1e-9);
  }
  for (int trial = 0; trial < 3; ++trial) {
    const auto t = twist_simplex(rng, gamma_simplex(random_chain(rng, 3, 2, 2)));
    FunctorReport rep;
    subdivision_functor(t, &rep);
    CHECK(rep.chains == static_cast<int>(enumerate_sd(3, 2).size()));
    CHECK(rep.worst < 1e-9);
  }
  for (int trial = 0; trial < 3; ++trial) {
    const auto h = twist_simplex(rng, random_simplex(rng, 3, 2, 2));
    FunctorReport rep;
    subdivision_functor(h, &rep);
    CHECK(rep.worst < 1e-9);
  }
  // degenerate simplices are simplices too
  CHECK_NOTHROW(subdivision_functor(degeneracy(random_simplex(rng, 2, 2, 2), 1)));
}

TEST_CASE("corrupted simplex breaks functoriality") {
  Rng rng(43);
  auto s = random_simplex(rng, 2, 1, 2);
  const auto& u = s.iso(0, 1, 2);
  BlockOp v = u.unitary();
  for (auto& b : v)
    if (b.size() > 0) b *= std::polar(1.0, 0.4);
  s.set_iso(0, 1, 2, make_iso(u.src(), u.dst(), v));
  const bool nonzero = s.corr(0, 2).module().compacts().dim() > 0;
  if (nonzero) {
    try {
      subdivision_functor(s);
      FAIL("expected a functoriality failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FunctorialityViolated);
    }
  }
}

TEST_CASE("subdivision is natural in the simplex") {
  Rng rng(44);
  const auto s = twist_simplex(rng, random_simplex(rng, 3, 2, 2));
  const SubdivisionFunctor full(s);
  for (int v = 0; v <= 3; ++v) {
    const SubdivisionFunctor sub(face(s, v));
    std::vector<int> coface;
    for (int a = 0; a < 3; ++a) coface.push_back(a < v ? a : a + 1);
    const auto lift = [&](Subset x) {
      return phi_star(coface, 3, make_aug_chain(2, {x})).entries[0];
    };
    for (Subset x = 1; x < 8; ++x)
      for (Subset y = x; y < 8; ++y) {
        if ((x & ~y) != 0) continue;
        CHECK(sub.algebra(y) == full.algebra(lift(y)));
        CHECK(frob(sub.hom(x, y).matrix() - full.hom(lift(x), lift(y)).matrix()) == 0.0);
      }
  }
}

TEST_CASE("corner edges of the subdivision are equivalences") {
  Rng rng(45);
  const auto s = twist_simplex(rng, random_simplex(rng, 3, 2, 2));
  const SubdivisionFunctor f(s);
  for (Subset t = 1; t < 16; ++t) {
    const Subset top = 1u << subset_max(t);
    const auto& h = f.hom(top, t);
    CHECK(is_equivalence(gamma_of_hom(h)).has_value());
  }
}
