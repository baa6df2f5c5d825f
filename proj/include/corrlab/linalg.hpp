#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace corrlab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Block-diagonal operator, one square block per base block.
using BlockOp = std::vector<Mat>;

/// Global comparison tolerance (absolute Frobenius residual). Defaults to
/// 1e-9; thread-local so concurrent suites can run with different settings.
double eps();

class ScopedEps {
 public:
  explicit ScopedEps(double value);
  ~ScopedEps();
  ScopedEps(const ScopedEps&) = delete;
  ScopedEps& operator=(const ScopedEps&) = delete;

 private:
  double previous_;
};

double frob(const Mat& m);

/// Rank by singular values above eps * max(sigma_max, 1).
int numeric_rank(const Mat& m, double tol);

/// Orthonormal basis of the column space by pivoted Gram-Schmidt: at each
/// step the lowest-index column whose remaining norm is within a fixed ratio
/// of the largest wins. Exactly `rank` columns are returned.
Mat orthonormal_columns(const Mat& m, int rank);

/// Kronecker product a (x) I_r.
Mat kron_identity(const Mat& a, int r);

/// Direct sum of square blocks.
Mat direct_sum(const std::vector<Mat>& blocks);

Mat haar_unitary(int n, std::mt19937_64& rng);

double block_residual(const BlockOp& a, const BlockOp& b);
BlockOp block_compose(const BlockOp& outer, const BlockOp& inner);
BlockOp block_adjoint(const BlockOp& a);
double unitarity_residual(const BlockOp& u);

/// Exact inverse of a unimodular integer matrix; empty optional-like flag
/// via `ok` when the determinant is not +-1.
IntMat integer_inverse(const IntMat& m, bool& ok);

}  // namespace corrlab
