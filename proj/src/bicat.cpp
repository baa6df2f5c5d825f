#include "corrlab/bicat.hpp"

#include "corrlab/errors.hpp"

namespace corrlab {

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Correspondence gamma_of_hom(const StarHom& phi) {
  std::vector<int> mult;
  for (int j = 0; j < phi.dst().num_blocks(); ++j) mult.push_back(static_cast<int>(phi.frame(j).cols()));
  const auto module = make_module(phi.dst(), mult);
  const auto& r = phi.mult_matrix();
  const auto left = star_hom_from_function(phi.src(), module.compacts(), [&](const AlgElement& a) {
    AlgElement y{module.compacts(), {}};
    for (int c = 0; c < module.compacts().num_blocks(); ++c) {
      const int j = module.base_block(c);
      std::vector<Mat> parts;
      for (int i = 0; i < phi.src().num_blocks(); ++i)
        if (r(i, j) > 0) parts.push_back(kron_identity(a.mats[z(i)], static_cast<int>(r(i, j))));
      y.mats.push_back(direct_sum(parts));
    }
    return y;
  });
  return make_corr(module, left);
}

ModElement gamma_coords(const StarHom& phi, const AlgElement& b) {
  ModElement y;
  for (int j = 0; j < phi.dst().num_blocks(); ++j) y.push_back(phi.frame(j).adjoint() * b.mats[z(j)]);
  return y;
}

AlgElement gamma_element(const StarHom& phi, const ModElement& y) {
  AlgElement b{phi.dst(), {}};
  for (int j = 0; j < phi.dst().num_blocks(); ++j) b.mats.push_back(phi.frame(j) * y[z(j)]);
  return b;
}

CorrIso gamma_multiplicativity(const StarHom& phi, const StarHom& psi) {
  const auto comp = compose_homs(psi, phi);
  const auto gphi = gamma_of_hom(phi);
  const auto gpsi = gamma_of_hom(psi);
  const auto src = tensor(gphi, gpsi);
  const auto dst = gamma_of_hom(comp);
  std::vector<ModElement> from, to;
  for (const auto& y : module_generators(gphi.module()))
    for (const auto& w : module_generators(gpsi.module())) {
      from.push_back(tensor_element(gphi, gpsi, y, w));
      to.push_back(gamma_coords(comp, multiply(psi(gamma_element(phi, y)), gamma_element(psi, w))));
    }
  return iso_from_generators(src, dst, from, to);
}

HilbertModule corner_module(const HilbertModule& e) {
  return direct_sum(e, make_module(e.base(), e.base().blocks())).module;
}

StarHom corner_embedding(const HilbertModule& e) {
  const auto sum = corner_module(e);
  const auto& b = e.base();
  return star_hom_from_function(b, sum.compacts(), [&](const AlgElement& x) {
    AlgElement y{sum.compacts(), {}};
    for (int j = 0; j < b.num_blocks(); ++j)
      y.mats.push_back(direct_sum({Mat::Zero(e.mult(j), e.mult(j)), x.mats[z(j)]}));
    return y;
  });
}

StarHom left_action_hom(const Correspondence& e) {
  const auto sum = corner_module(e.module());
  const auto& b = e.dst();
  return star_hom_from_function(e.src(), sum.compacts(), [&](const AlgElement& x) {
    const auto lam = e.act(x);
    AlgElement y{sum.compacts(), {}};
    for (int j = 0; j < b.num_blocks(); ++j) {
      const int n = b.block(j);
      y.mats.push_back(direct_sum({lam[z(j)], Mat::Zero(n, n)}));
    }
    return y;
  });
}

CorrIso u_of_corr(const Correspondence& e) {
  const auto i_e = corner_embedding(e.module());
  const auto f_e = left_action_hom(e);
  const auto gi = gamma_of_hom(i_e);
  const auto gf = gamma_of_hom(f_e);
  const auto src = tensor(e, gi);
  const auto& b = e.dst();
  std::vector<ModElement> from, to;
  for (const auto& xi : module_generators(e.module()))
    for (const auto& eta : module_generators(gi.module())) {
      from.push_back(tensor_element(e, gi, xi, eta));
      // |xi> is the operator B -> E sitting in the upper right corner of K(E + B)
      auto k = gamma_element(i_e, eta);
      for (int j = 0; j < b.num_blocks(); ++j) {
        const int m = e.mult(j), n = b.block(j);
        Mat ket = Mat::Zero(m + n, m + n);
        ket.topRightCorner(m, n) = xi[z(j)];
        k.mats[z(j)] = ket * k.mats[z(j)];
      }
      to.push_back(gamma_coords(f_e, k));
    }
  return iso_from_generators(src, gf, from, to);
}

MoritaInverse morita_inverse_of_corner(const HilbertModule& e) {
  const auto& b = e.base();
  const auto i_e = corner_embedding(e);
  const auto& k = i_e.dst();
  const auto gi = gamma_of_hom(i_e);
  const auto inv = make_corr(make_module(b, k.blocks()), identity_hom(k));

  std::vector<ModElement> from, to;
  for (const auto& eta : module_generators(gi.module()))
    for (const auto& zeta : module_generators(inv.module())) {
      from.push_back(tensor_element(gi, inv, eta, zeta));
      const auto op = gamma_element(i_e, eta);
      ModElement val;
      for (int j = 0; j < b.num_blocks(); ++j)
        val.push_back((op.mats[z(j)] * zeta[z(j)]).bottomRows(b.block(j)));
      to.push_back(std::move(val));
    }
  auto unit = iso_from_generators(tensor(gi, inv), identity_corr(b), from, to);

  from.clear();
  to.clear();
  for (const auto& zeta : module_generators(inv.module()))
    for (const auto& eta : module_generators(gi.module())) {
      from.push_back(tensor_element(inv, gi, zeta, eta));
      const auto op = gamma_element(i_e, eta);
      ModElement val;
      for (int j = 0; j < b.num_blocks(); ++j)
        val.push_back(zeta[z(j)] * op.mats[z(j)].bottomRows(b.block(j)));
      to.push_back(std::move(val));
    }
  auto counit = iso_from_generators(tensor(inv, gi), identity_corr(k), from, to);
  return {inv, std::move(unit), std::move(counit)};
}

std::optional<EquivalenceWitness> is_equivalence(const Correspondence& e) {
  if (!is_full_corr(e)) return std::nullopt;
  const auto& a = e.src();
  const auto& b = e.dst();
  const auto& r = e.action_mult();
  // The action must be a bijection A -> K(E): a permutation of blocks.
  std::vector<int> sigma(z(b.num_blocks()), -1), pi(z(a.num_blocks()), -1);
  for (int j = 0; j < b.num_blocks(); ++j)
    for (int i = 0; i < a.num_blocks(); ++i) {
      if (r(i, j) == 0) continue;
      if (r(i, j) != 1 || sigma[z(j)] >= 0 || pi[z(i)] >= 0) return std::nullopt;
      sigma[z(j)] = i;
      pi[z(i)] = j;
    }
  for (int i : pi)
    if (i < 0) return std::nullopt;
  for (int j : sigma)
    if (j < 0) return std::nullopt;

  std::vector<int> mult;
  for (int i = 0; i < a.num_blocks(); ++i) mult.push_back(b.block(pi[z(i)]));
  const auto module = make_module(a, mult);
  const auto left = star_hom_from_function(b, module.compacts(), [&](const AlgElement& x) {
    AlgElement y{module.compacts(), {}};
    for (int i = 0; i < a.num_blocks(); ++i) y.mats.push_back(x.mats[z(pi[z(i)])]);
    return y;
  });
  const auto inv = make_corr(module, left);

  std::vector<ModElement> from, to;
  for (const auto& x : module_generators(e.module()))
    for (const auto& w : module_generators(inv.module())) {
      from.push_back(tensor_element(e, inv, x, w));
      ModElement val;
      for (int i = 0; i < a.num_blocks(); ++i) {
        const int j = pi[z(i)];
        val.push_back(e.action_frame(j).adjoint() * x[z(j)] * w[z(i)]);
      }
      to.push_back(std::move(val));
    }
  auto unit = iso_from_generators(tensor(e, inv), identity_corr(a), from, to);

  from.clear();
  to.clear();
  for (const auto& w : module_generators(inv.module()))
    for (const auto& y : module_generators(e.module())) {
      from.push_back(tensor_element(inv, e, w, y));
      ModElement val;
      for (int j = 0; j < b.num_blocks(); ++j)
        val.push_back(w[z(sigma[z(j)])] * e.action_frame(j).adjoint() * y[z(j)]);
      to.push_back(std::move(val));
    }
  auto counit = iso_from_generators(tensor(inv, e), identity_corr(b), from, to);
  return EquivalenceWitness{inv, std::move(unit), std::move(counit)};
}

}  // namespace corrlab
