#pragma once

#include "corrlab/hilbert.hpp"

#include <optional>

namespace corrlab {

/// Gamma(phi) = phi(A) B as a correspondence A -> B. In block j the module is
/// p_j B_j with coordinates V_j^* b, V_j the frame of phi, so the left action
/// is exactly a |-> sum_i a_i (x) I_{r_ij}.
Correspondence gamma_of_hom(const StarHom& phi);

/// Coordinates of an element of p B in Gamma(phi), and back.
ModElement gamma_coords(const StarHom& phi, const AlgElement& b);
AlgElement gamma_element(const StarHom& phi, const ModElement& y);

/// Gamma(phi) (x)_B Gamma(psi) -> Gamma(psi o phi), b (x) c |-> psi(b) c.
CorrIso gamma_multiplicativity(const StarHom& phi, const StarHom& psi);

/// E + B, the module whose compacts receive the corner embedding.
HilbertModule corner_module(const HilbertModule& e);

/// i_E: B -> K(E + B), b |-> 0 + b.
StarHom corner_embedding(const HilbertModule& e);

/// f_E: A -> K(E + B), a |-> lambda_E(a) + 0.
StarHom left_action_hom(const Correspondence& e);

/// E (x)_B Gamma(i_E) -> Gamma(f_E), xi (x) eta |-> |xi> eta.
CorrIso u_of_corr(const Correspondence& e);

struct MoritaInverse {
  /// K(E + B) -> B on the module E + B with the identity action.
  Correspondence inverse;
  /// Gamma(i_E) (x) inverse -> identity_corr(B), eta (x) zeta |-> eta zeta.
  CorrIso unit;
  /// inverse (x) Gamma(i_E) -> identity_corr(K(E + B)), zeta (x) eta |-> zeta eta.
  CorrIso counit;
};

MoritaInverse morita_inverse_of_corner(const HilbertModule& e);

struct EquivalenceWitness {
  /// The conjugate module E^*: B -> A.
  Correspondence inverse;
  /// E (x) E^* -> identity_corr(A).
  CorrIso unit;
  /// E^* (x) E -> identity_corr(B).
  CorrIso counit;
};

/// Full with bijective left action onto K(E); the witness when it is.
std::optional<EquivalenceWitness> is_equivalence(const Correspondence& e);

}  // namespace corrlab
