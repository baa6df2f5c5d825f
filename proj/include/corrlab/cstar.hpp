#pragma once

#include "corrlab/linalg.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace corrlab {

/// A finite direct sum of full matrix algebras M_{n_1} + ... + M_{n_r}.
///
/// The canonical basis is the list of matrix units ordered block-major and
/// row-major inside each block; every dense coordinate vector in the library
/// uses this order. The empty block list is the zero algebra, which only
/// arises as the compacts of a zero module.
class FdCstarAlgebra {
 public:
  FdCstarAlgebra() = default;

  static FdCstarAlgebra zero() { return {}; }

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  const std::string& label() const noexcept { return label_; }
  int num_blocks() const noexcept { return static_cast<int>(blocks_.size()); }
  int block(int i) const { return blocks_.at(static_cast<std::size_t>(i)); }
  int dim() const noexcept { return dim_; }
  /// Coordinate offset of block i.
  int offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  bool is_zero() const noexcept { return blocks_.empty(); }

  FdCstarAlgebra with_label(std::string label) const;

  friend bool operator==(const FdCstarAlgebra& a, const FdCstarAlgebra& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  friend FdCstarAlgebra make_algebra(std::vector<int> blocks, std::string label);
  friend FdCstarAlgebra algebra_from_blocks(std::vector<int> blocks);

  std::vector<int> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
  std::string label_;
};

/// Validated constructor; rejects an empty list or nonpositive sizes.
FdCstarAlgebra make_algebra(std::vector<int> blocks, std::string label = {});
/// Same but an empty list yields the zero algebra.
FdCstarAlgebra algebra_from_blocks(std::vector<int> blocks);

struct AlgElement {
  FdCstarAlgebra parent;
  std::vector<Mat> mats;
};

struct BasisIndex {
  int block;
  int row;
  int col;
};

BasisIndex basis_index(const FdCstarAlgebra& alg, int index);
int basis_position(const FdCstarAlgebra& alg, int block, int row, int col);

AlgElement zero_element(const FdCstarAlgebra& alg);
AlgElement unit_element(const FdCstarAlgebra& alg);
AlgElement block_unit(const FdCstarAlgebra& alg, int block);
AlgElement matrix_unit(const FdCstarAlgebra& alg, int block, int row, int col);
AlgElement basis_element(const FdCstarAlgebra& alg, int index);

Vec to_coords(const AlgElement& x);
AlgElement from_coords(const FdCstarAlgebra& alg, const Vec& v);

AlgElement multiply(const AlgElement& x, const AlgElement& y);
AlgElement adjoint(const AlgElement& x);
AlgElement add(const AlgElement& x, const AlgElement& y);
double residual(const AlgElement& x, const AlgElement& y);
bool is_projection(const AlgElement& p, double tol);

/// A validated *-homomorphism between finite-dimensional C*-algebras.
///
/// Besides the dense matrix in canonical coordinates, validation extracts the
/// normal form: integer multiplicities r_ij of source block i in target block
/// j, and per target block an isometry (the frame) F_j such that
///   phi(a)_j = F_j (sum_i a_i (x) I_{r_ij}) F_j^*.
/// Frame columns are ordered by source block i, then matrix row s, then copy t.
class StarHom {
 public:
  const FdCstarAlgebra& src() const { return d_->src; }
  const FdCstarAlgebra& dst() const { return d_->dst; }
  const Mat& matrix() const { return d_->map; }
  const IntMat& mult_matrix() const { return d_->mult; }
  const Mat& frame(int dst_block) const { return d_->frames.at(static_cast<std::size_t>(dst_block)); }
  const std::vector<Mat>& frames() const { return d_->frames; }
  /// Column offset of source block i inside the frame of target block j.
  int frame_offset(int src_block, int dst_block) const;

  AlgElement operator()(const AlgElement& x) const;
  Mat apply_block(const AlgElement& x, int dst_block) const;

  bool is_unital() const;
  AlgElement unit_image() const;

 private:
  struct Data {
    FdCstarAlgebra src;
    FdCstarAlgebra dst;
    Mat map;
    IntMat mult;
    std::vector<Mat> frames;
  };
  std::shared_ptr<const Data> d_;

  friend StarHom make_star_hom(const FdCstarAlgebra&, const FdCstarAlgebra&, const Mat&);
};

/// Validates multiplicativity and *-preservation to eps() and extracts the
/// normal form. Throws NotMultiplicative / NotStarPreserving / ShapeMismatch.
StarHom make_star_hom(const FdCstarAlgebra& src, const FdCstarAlgebra& dst, const Mat& raw);

/// Tabulates `f` on the canonical basis and validates the result.
StarHom star_hom_from_function(const FdCstarAlgebra& src, const FdCstarAlgebra& dst,
                               const std::function<AlgElement(const AlgElement&)>& f);

StarHom identity_hom(const FdCstarAlgebra& alg);

/// psi o phi. Throws ShapeMismatch if phi.dst != psi.src.
StarHom compose_homs(const StarHom& psi, const StarHom& phi);

double hom_residual(const StarHom& a, const StarHom& b);

/// Closed linear span of B p B equals B, for p = phi(1).
bool is_full_hom(const StarHom& phi);

struct Corner {
  FdCstarAlgebra algebra;
  StarHom inclusion;
  /// Per block of the ambient algebra: unitary whose leading columns span p_j.
  std::vector<Mat> unitary;
};

/// pBp in canonical block form. Throws NotProjection.
Corner corner_algebra(const AlgElement& p);

}  // namespace corrlab
