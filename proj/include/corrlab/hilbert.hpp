#pragma once

#include "corrlab/cstar.hpp"

#include <optional>
#include <vector>

namespace corrlab {

/// Element of a module in canonical form: one m_i x n_i matrix per base block.
using ModElement = std::vector<Mat>;

/// Hilbert module over B = sum M_{n_i} in canonical block form: the direct sum
/// of m_i copies of the row space C^{1 x n_i}.
class HilbertModule {
 public:
  HilbertModule() = default;

  const FdCstarAlgebra& base() const noexcept { return base_; }
  const std::vector<int>& mult() const noexcept { return mult_; }
  int mult(int i) const { return mult_.at(static_cast<std::size_t>(i)); }
  int num_blocks() const noexcept { return base_.num_blocks(); }

  /// K(E) = sum M_{m_i} over the blocks with m_i > 0.
  const FdCstarAlgebra& compacts() const noexcept { return compacts_; }
  /// Compacts block carrying base block i, or -1 when m_i = 0.
  int compact_block(int base_block) const { return to_compact_.at(static_cast<std::size_t>(base_block)); }
  int base_block(int compact_block) const { return to_base_.at(static_cast<std::size_t>(compact_block)); }

  ModElement zero() const;
  bool is_full() const;

  friend bool operator==(const HilbertModule& a, const HilbertModule& b) {
    return a.base_ == b.base_ && a.mult_ == b.mult_;
  }

 private:
  friend HilbertModule make_module(const FdCstarAlgebra& base, std::vector<int> mult);

  FdCstarAlgebra base_;
  std::vector<int> mult_;
  FdCstarAlgebra compacts_;
  std::vector<int> to_compact_;
  std::vector<int> to_base_;
};

HilbertModule make_module(const FdCstarAlgebra& base, std::vector<int> mult);

AlgElement inner(const HilbertModule& e, const ModElement& x, const ModElement& y);
ModElement right_mult(const ModElement& x, const AlgElement& b);
double module_residual(const ModElement& x, const ModElement& y);

/// Compacts element <-> block operator indexed by base blocks (empty blocks
/// where m_i = 0).
BlockOp to_block_op(const HilbertModule& e, const AlgElement& t);
AlgElement from_block_op(const HilbertModule& e, const BlockOp& t);
ModElement apply_op(const BlockOp& t, const ModElement& x);

struct ModuleSum {
  HilbertModule module;
  /// Per base block: isometries m_i -> m_i + m'_i onto the first and second summand.
  BlockOp first;
  BlockOp second;
};

/// E + F with its two inclusions. Throws BaseMismatch.
ModuleSum direct_sum(const HilbertModule& e, const HilbertModule& f);

/// A -> B correspondence: module over B and a unital left action A -> K(E).
class Correspondence {
 public:
  const FdCstarAlgebra& src() const { return left_.src(); }
  const FdCstarAlgebra& dst() const { return module_.base(); }
  const HilbertModule& module() const noexcept { return module_; }
  const std::vector<int>& mult() const noexcept { return module_.mult(); }
  int mult(int i) const { return module_.mult(i); }
  const StarHom& left_action() const { return left_; }

  /// Multiplicity of src block i in base block k (zero column when m_k = 0).
  const IntMat& action_mult() const noexcept { return action_mult_; }
  /// Frame of the left action in base block k (m_k x sum_i n_i r_ik).
  const Mat& action_frame(int base_block) const { return frames_.at(static_cast<std::size_t>(base_block)); }

  BlockOp act(const AlgElement& a) const;
  ModElement act(const AlgElement& a, const ModElement& x) const;

 private:
  friend Correspondence make_corr(const HilbertModule& module, const StarHom& left);

  HilbertModule module_;
  StarHom left_;
  IntMat action_mult_;
  std::vector<Mat> frames_;
};

/// Validates that `left` lands in K(module) and is unital (NotUnital).
Correspondence make_corr(const HilbertModule& module, const StarHom& left);

/// Same src, dst, mult, and left actions equal to `tol`.
bool corr_equal(const Correspondence& e, const Correspondence& f, double tol);

Correspondence identity_corr(const FdCstarAlgebra& a);

bool is_full_corr(const Correspondence& e);

/// E (x)_B F for E: A -> B and F: B -> C, in canonical form. In block k the
/// coordinates stack, over B-blocks i, the m_i r_ik rows of
///   (x_i (x) I_{r_ik}) W_k^{(i)*} f_k
/// where W_k^{(i)} is the part of F's left-action frame belonging to i.
/// Throws EndpointMismatch.
Correspondence tensor(const Correspondence& e, const Correspondence& f);

/// The balanced map E x F -> E (x)_B F on elements.
ModElement tensor_element(const Correspondence& e, const Correspondence& f, const ModElement& x,
                          const ModElement& y);

/// T (x) 1 on E (x)_B F for T in K(E) given blockwise.
BlockOp tensor_operator(const BlockOp& t, const Correspondence& f);

/// 2-arrow: block unitary on module coordinates, acting by left multiplication.
class CorrIso {
 public:
  const Correspondence& src() const noexcept { return src_; }
  const Correspondence& dst() const noexcept { return dst_; }
  const BlockOp& unitary() const noexcept { return u_; }
  ModElement operator()(const ModElement& x) const { return apply_op(u_, x); }

 private:
  friend CorrIso make_iso(const Correspondence&, const Correspondence&, const BlockOp&);
  Correspondence src_;
  Correspondence dst_;
  BlockOp u_;
};

struct IsoResiduals {
  double unitary = 0.0;
  double right_linear = 0.0;
  double intertwining = 0.0;
  double worst() const;
};

/// Residuals of the three 2-arrow conditions for a candidate unitary.
IsoResiduals iso_residuals(const Correspondence& src, const Correspondence& dst, const BlockOp& u);

/// Throws EndpointMismatch, ShapeMismatch, NotUnitary, NotIntertwining.
CorrIso make_iso(const Correspondence& src, const Correspondence& dst, const BlockOp& u);

/// From a dense map on the stacked coordinate vector (block-major, each
/// m_k x n_k block row-major); checks right-linearity first.
CorrIso make_iso_from_linear(const Correspondence& src, const Correspondence& dst, const Mat& map);

CorrIso identity_iso(const Correspondence& e);
/// v o u. Throws EndpointMismatch.
CorrIso compose_isos(const CorrIso& v, const CorrIso& u);
CorrIso inverse_iso(const CorrIso& u);
double iso_residual(const CorrIso& a, const CorrIso& b);

/// u (x) id_G and id_E (x) v, and their composite u (x) v.
CorrIso whisker_right(const CorrIso& u, const Correspondence& g);
CorrIso whisker_left(const Correspondence& e, const CorrIso& v);
CorrIso tensor_isos(const CorrIso& u, const CorrIso& v);

/// A generating set of E as a right module: e_a e_0^T in every block.
std::vector<ModElement> module_generators(const HilbertModule& e);

/// Tensor-product generators: all pairs of generators, in order.
std::vector<ModElement> tensor_generators(const Correspondence& e, const Correspondence& f);

/// Solves for the unique block unitary with u(source[g]) = target[g] and
/// validates it. The sources must generate `src` as a right module.
CorrIso iso_from_generators(const Correspondence& src, const Correspondence& dst,
                            const std::vector<ModElement>& sources,
                            const std::vector<ModElement>& targets);

/// E -> F through the frames of the two left actions, W_F W_E^*. Exists iff
/// endpoints, mult and action multiplicities agree.
std::optional<CorrIso> normal_form_iso(const Correspondence& e, const Correspondence& f);

/// (E (x) F) (x) G -> E (x) (F (x) G).
CorrIso associator(const Correspondence& e, const Correspondence& f, const Correspondence& g);
/// A (x)_A E -> E, a (x) x |-> a x.
CorrIso left_unitor(const Correspondence& e);
/// E (x)_B B -> E, x (x) b |-> x b.
CorrIso right_unitor(const Correspondence& e);

}  // namespace corrlab
