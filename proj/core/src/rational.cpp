#include "lpuhf/rational.hpp"

#include "lpuhf/error.hpp"
#include "lpuhf/matalg.hpp"

#include <Eigen/LU>

namespace lpuhf {

Eigen::MatrixXcd to_double(const QMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).to_complex();
  return out;
}

bool exactly_equal(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (a(r, c) != b(r, c)) return false;
  return true;
}

Matrix<QComplex> inverse(const Matrix<QComplex>& a) {
  if (a.rows() != a.cols()) throw InputError("inverse: matrix is not square");
  const Eigen::Index n = a.rows();
  Matrix<QComplex> work = a;
  Matrix<QComplex> inv = Matrix<QComplex>::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && work(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw InputError("inverse: matrix is singular");
    if (pivot != col) {
      work.row(pivot).swap(work.row(col));
      inv.row(pivot).swap(inv.row(col));
    }
    const QComplex scale = QComplex(1) / work(col, col);
    for (Eigen::Index c = 0; c < n; ++c) {
      work(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || work(r, col).is_zero()) continue;
      const QComplex factor = work(r, col);
      for (Eigen::Index c = 0; c < n; ++c) {
        work(r, c) -= factor * work(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

CMatrix inverse(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("inverse: matrix is not square");
  if (a.rows() == 0) return a;
  // Monomial matrices invert exactly, entry by entry.
  if (is_monomial(a)) {
    CMatrix inv = CMatrix::Zero(a.cols(), a.rows());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      bool found = false;
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        if (a(r, c) != Complex(0.0, 0.0)) {
          inv(c, r) = reciprocal(a(r, c));
          found = true;
        }
      }
      if (!found) throw InputError("inverse: matrix is singular");
    }
    return inv;
  }
  Eigen::FullPivLU<CMatrix> lu(a);
  if (!lu.isInvertible()) throw InputError("inverse: matrix is singular");
  return lu.inverse();
}

}  // namespace lpuhf
