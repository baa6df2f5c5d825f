#include "corrlab/linalg.hpp"

#include "corrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrlab {

namespace {
thread_local double g_eps = 1e-9;
}

double eps() { return g_eps; }

ScopedEps::ScopedEps(double value) : previous_(g_eps) { g_eps = value; }
ScopedEps::~ScopedEps() { g_eps = previous_; }

double frob(const Mat& m) { return m.size() == 0 ? 0.0 : m.norm(); }

int numeric_rank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double threshold = tol * std::max(s.size() ? s(0) : 0.0, 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

namespace {
constexpr double kPivotRatio = 0.2718;
}  // namespace

Mat orthonormal_columns(const Mat& m, int rank) {
  Mat work = m;
  Mat out(m.rows(), rank);
  std::vector<bool> used(static_cast<std::size_t>(m.cols()), false);
  for (int step = 0; step < rank; ++step) {
    double top = 0.0;
    for (Eigen::Index c = 0; c < work.cols(); ++c)
      if (!used[static_cast<std::size_t>(c)]) top = std::max(top, work.col(c).norm());
    // first column within kPivotRatio of the largest, so exact ties do not
    // depend on roundoff
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index c = 0; c < work.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double nrm = work.col(c).norm();
      if (nrm > 0.0 && nrm >= kPivotRatio * top) {
        best_norm = nrm;
        best = c;
        break;
      }
    }
    if (best < 0 || best_norm <= 0.0)
      throw Error(ErrorKind::ShapeMismatch, "orthonormal_columns: rank exceeds column space");
    used[static_cast<std::size_t>(best)] = true;
    Vec q = work.col(best) / best_norm;
    // second pass of orthogonalization against accepted columns
    for (int prev = 0; prev < step; ++prev) q -= out.col(prev) * out.col(prev).dot(q);
    q.normalize();
    out.col(step) = q;
    for (Eigen::Index c = 0; c < work.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      work.col(c) -= q * q.dot(work.col(c));
    }
  }
  return out;
}

Mat kron_identity(const Mat& a, int r) {
  Mat out = Mat::Zero(a.rows() * r, a.cols() * r);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (int t = 0; t < r; ++t) out(i * r + t, j * r + t) = a(i, j);
  return out;
}

Mat direct_sum(const std::vector<Mat>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Mat out = Mat::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Mat haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

double block_residual(const BlockOp& a, const BlockOp& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols())
      return std::numeric_limits<double>::infinity();
    if (a[i].size()) s += (a[i] - b[i]).squaredNorm();
  }
  return std::sqrt(s);
}

BlockOp block_compose(const BlockOp& outer, const BlockOp& inner) {
  if (outer.size() != inner.size())
    throw Error(ErrorKind::ShapeMismatch, "block_compose: block count");
  BlockOp out(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (outer[i].cols() != inner[i].rows())
      throw Error(ErrorKind::ShapeMismatch, "block_compose: block shape");
    out[i] = outer[i] * inner[i];
  }
  return out;
}

BlockOp block_adjoint(const BlockOp& a) {
  BlockOp out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].adjoint();
  return out;
}

double unitarity_residual(const BlockOp& u) {
  double s = 0.0;
  for (const auto& b : u) {
    if (b.rows() != b.cols()) return std::numeric_limits<double>::infinity();
    if (b.size() == 0) continue;
    s += (b.adjoint() * b - Mat::Identity(b.rows(), b.cols())).squaredNorm();
    s += (b * b.adjoint() - Mat::Identity(b.rows(), b.cols())).squaredNorm();
  }
  return std::sqrt(s);
}

IntMat integer_inverse(const IntMat& m, bool& ok) {
  ok = false;
  const Eigen::Index n = m.rows();
  if (m.cols() != n) return {};
  // Gauss-Jordan over the integers with unimodular row operations only.
  IntMat a = m;
  IntMat inv = IntMat::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    // Euclid on the column below the diagonal until one nonzero remains.
    while (true) {
      Eigen::Index pivot = -1;
      for (Eigen::Index r = col; r < n; ++r)
        if (a(r, col) != 0 && (pivot < 0 || std::llabs(a(r, col)) < std::llabs(a(pivot, col))))
          pivot = r;
      if (pivot < 0) return {};
      a.row(col).swap(a.row(pivot));
      inv.row(col).swap(inv.row(pivot));
      bool done = true;
      for (Eigen::Index r = col + 1; r < n; ++r) {
        if (a(r, col) == 0) continue;
        const long long q = a(r, col) / a(col, col);
        a.row(r) -= q * a.row(col);
        inv.row(r) -= q * inv.row(col);
        if (a(r, col) != 0) done = false;
      }
      if (done) break;
    }
    if (std::llabs(a(col, col)) != 1) return {};
    if (a(col, col) == -1) {
      a.row(col) *= -1;
      inv.row(col) *= -1;
    }
  }
  for (Eigen::Index col = n - 1; col >= 0; --col)
    for (Eigen::Index r = 0; r < col; ++r) {
      const long long q = a(r, col);
      if (q == 0) continue;
      a.row(r) -= q * a.row(col);
      inv.row(r) -= q * inv.row(col);
    }
  ok = true;
  return inv;
}

}  // namespace corrlab
