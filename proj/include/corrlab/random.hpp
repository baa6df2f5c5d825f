#pragma once

#include "corrlab/cstar.hpp"
#include "corrlab/hilbert.hpp"
#include "corrlab/nerve.hpp"

#include <random>

namespace corrlab {

using Rng = std::mt19937_64;

/// Algebra with 1..max_blocks blocks of size 1..max_size.
FdCstarAlgebra random_algebra(Rng& rng, int max_blocks, int max_size);

/// Hom with the given multiplicities; frames are leading columns of Haar
/// unitaries. Throws ShapeMismatch if the multiplicities do not fit.
StarHom random_hom_with_mult(Rng& rng, const FdCstarAlgebra& src, const FdCstarAlgebra& dst,
                             const IntMat& mult);

/// Random unital hom from src into a fresh target with at most max_blocks
/// blocks; block sizes are forced by a random multiplicity matrix.
StarHom random_unital_hom(Rng& rng, const FdCstarAlgebra& src, int max_blocks, int max_size);

/// Random hom src -> dst (possibly non-unital, possibly zero on some blocks).
StarHom random_hom_into(Rng& rng, const FdCstarAlgebra& src, const FdCstarAlgebra& dst);

Mat random_matrix(Rng& rng, int rows, int cols);
ModElement random_element(Rng& rng, const HilbertModule& e);
AlgElement random_alg_element(Rng& rng, const FdCstarAlgebra& a);

/// Correspondence A -> B with left-action multiplicities drawn from {0,1,2};
/// blocks of B nobody reaches get m = 0 unless `full`.
Correspondence random_corr(Rng& rng, const FdCstarAlgebra& a, const FdCstarAlgebra& b, bool full = false,
                           int max_mult = 8);

/// Block unitary with the given block sizes.
BlockOp random_block_unitary(Rng& rng, const std::vector<int>& sizes);

/// Iso E -> E' where E' has the left action conjugated by a random unitary.
CorrIso random_twist(Rng& rng, const Correspondence& e);

/// Same simplex transported along random twists of every nondegenerate edge;
/// the u's pick up nontrivial unitaries.
NCorrSimplex twist_simplex(Rng& rng, const NCorrSimplex& s);

/// n composable nonzero homs through algebras with at most max_blocks blocks
/// of size at most max_size.
std::vector<StarHom> random_chain(Rng& rng, int n, int max_blocks, int max_size);

/// Simplex with random correspondences on the spine, tensor products on the
/// longer edges and u's from inner horn fills. n <= 3.
NCorrSimplex random_simplex(Rng& rng, int n, int max_blocks, int max_size, int max_mult = 3);

}  // namespace corrlab
