#pragma once

// The matrix algebra M_d with its distinguished elements: matrix units,
// signed permutations, the flip element, Kronecker products, the
// multiplication maps on tensor decompositions, and projective-norm
// certificates. Everything is templated over the scalar so identities can
// be checked exactly with QComplex and numerically with std::complex<double>.

#include "lpuhf/error.hpp"
#include "lpuhf/pnorm.hpp"
#include "lpuhf/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace lpuhf {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Lexicographic bijection between multi-indices and flat indices; the first
/// factor is outermost.
class TensorIndexMap {
public:
  explicit TensorIndexMap(std::vector<std::size_t> factor_dims);

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& factor_dims() const { return dims_; }
  std::size_t flat(const std::vector<std::size_t>& multi) const;
  std::vector<std::size_t> multi(std::size_t flat) const;

  /// Flat-index bijection for reordering factors: factor k of the result is
  /// factor perm[k] of the source. Entry [old_flat] holds the new flat index.
  std::vector<std::size_t> permutation(const std::vector<std::size_t>& perm) const;

private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 1;
};

/// Applies the factor reordering `perm` to rows and columns of x.
template <class Scalar>
Matrix<Scalar> permute_factors(const Matrix<Scalar>& x, const TensorIndexMap& map,
                               const std::vector<std::size_t>& perm) {
  if (static_cast<std::size_t>(x.rows()) != map.size() || x.rows() != x.cols())
    throw InputError("permute_factors: matrix does not match the tensor index map");
  const auto to = map.permutation(perm);
  Matrix<Scalar> out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) out(to[r], to[c]) = x(r, c);
  return out;
}

/// Sum of elementary tensors a_k (x) b_k, kept as a decomposition so that
/// projective-norm certificates stay available.
template <class Scalar>
struct TensorSum {
  std::vector<std::pair<Matrix<Scalar>, Matrix<Scalar>>> terms;

  void add(Matrix<Scalar> a, Matrix<Scalar> b) {
    if (!terms.empty() && (a.rows() != terms.front().first.rows() || a.cols() != terms.front().first.cols() ||
                           b.rows() != terms.front().second.rows() || b.cols() != terms.front().second.cols()))
      throw InputError("TensorSum: term shapes are inconsistent");
    terms.emplace_back(std::move(a), std::move(b));
  }
  bool empty() const { return terms.empty(); }
};

template <class Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Kronecker product of two operators; the measures multiply and monomial tags survive.
Mat kron(const Mat& a, const Mat& b);

/// Kronecker flattening of a tensor sum.
template <class Scalar>
Matrix<Scalar> flatten(const TensorSum<Scalar>& z) {
  if (z.empty()) throw InputError("flatten: empty tensor sum");
  const auto& [a0, b0] = z.terms.front();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a0.rows() * b0.rows(), a0.cols() * b0.cols());
  for (const auto& [a, b] : z.terms) out += kron<Scalar>(a, b);
  return out;
}

/// e_{j,k} in M_d, 1-based indices.
template <class Scalar>
Matrix<Scalar> matrix_unit(std::size_t d, std::size_t j, std::size_t k) {
  if (j < 1 || k < 1 || j > d || k > d)
    throw InputError("matrix_unit: index (" + std::to_string(j) + "," + std::to_string(k) + ") out of range for d=" +
                     std::to_string(d));
  Matrix<Scalar> e = Matrix<Scalar>::Zero(d, d);
  e(j - 1, k - 1) = Scalar(1);
  return e;
}

inline constexpr std::size_t kMaxGroupDimension = 4;

/// All 2^d d! signed permutation matrices, in a fixed order (identity first).
template <class Scalar>
std::vector<Matrix<Scalar>> signed_permutation_group(std::size_t d) {
  if (d == 0) throw InputError("signed_permutation_group: d must be positive");
  if (d > kMaxGroupDimension)
    throw CapacityError("signed_permutation_group: d=" + std::to_string(d) + " exceeds enumeration limit " +
                        std::to_string(kMaxGroupDimension));
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<Matrix<Scalar>> group;
  do {
    for (std::size_t signs = 0; signs < (std::size_t{1} << d); ++signs) {
      Matrix<Scalar> g = Matrix<Scalar>::Zero(d, d);
      for (std::size_t c = 0; c < d; ++c) g(perm[c], c) = (signs >> c & 1U) ? Scalar(-1) : Scalar(1);
      group.push_back(std::move(g));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

/// The swap permutation P with P (a (x) b) P = b (x) a on C^d (x) C^d.
template <class Scalar>
Matrix<Scalar> swap_permutation(std::size_t d) {
  Matrix<Scalar> p = Matrix<Scalar>::Zero(d * d, d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t s = 0; s < d; ++s) p(r * d + s, s * d + r) = Scalar(1);
  return p;
}

namespace detail {
template <class Scalar>
Scalar reciprocal(std::size_t n) {
  if constexpr (std::is_same_v<Scalar, QComplex>)
    return QComplex::ratio(1, static_cast<long long>(n));
  else
    return Scalar(1.0 / static_cast<double>(n));
}
}  // namespace detail

/// y_d = (1/d) sum_{r,s} e_{r,s} (x) e_{s,r} as a d^2 x d^2 matrix.
template <class Scalar>
Matrix<Scalar> flip_element(std::size_t d) {
  if (d == 0) throw InputError("flip_element: d must be positive");
  return detail::reciprocal<Scalar>(d) * swap_permutation<Scalar>(d);
}

/// y_d tagged as (1/d) x permutation on the normalized counting measure.
Mat flip_mat(std::size_t d);

/// The matrix-unit decomposition sum (1/d) e_{r,s} (x) e_{s,r}.
template <class Scalar>
TensorSum<Scalar> flip_decomposition(std::size_t d) {
  TensorSum<Scalar> z;
  const Scalar w = detail::reciprocal<Scalar>(d);
  for (std::size_t r = 1; r <= d; ++r)
    for (std::size_t s = 1; s <= d; ++s) z.add(w * matrix_unit<Scalar>(d, r, s), matrix_unit<Scalar>(d, s, r));
  return z;
}

Matrix<QComplex> inverse(const Matrix<QComplex>& a);
CMatrix inverse(const CMatrix& a);

/// (1/|G|) sum_g g (x) g^{-1}.
template <class Scalar>
TensorSum<Scalar> group_average_decomposition(const std::vector<Matrix<Scalar>>& group) {
  if (group.empty()) throw InputError("group_average_decomposition: empty group");
  TensorSum<Scalar> z;
  const Scalar w = detail::reciprocal<Scalar>(group.size());
  for (const auto& g : group) z.add(w * g, inverse(g));
  return z;
}

/// The flip element computed from the signed permutation group average;
/// throws StructureError if it differs from flip_element(d).
template <class Scalar>
Matrix<Scalar> flip_from_group(std::size_t d) {
  const auto avg = flatten(group_average_decomposition<Scalar>(signed_permutation_group<Scalar>(d)));
  const auto y = flip_element<Scalar>(d);
  bool equal = true;
  if constexpr (std::is_same_v<Scalar, QComplex>)
    equal = exactly_equal(avg, y);
  else
    equal = (avg - y).cwiseAbs().maxCoeff() <= 1e-12;
  if (!equal) throw StructureError("flip_from_group: group average differs from y_" + std::to_string(d));
  return avg;
}

/// Delta(sum a_k (x) b_k) = sum a_k b_k.
template <class Scalar>
Matrix<Scalar> delta(const TensorSum<Scalar>& z) {
  if (z.empty()) throw InputError("delta: empty tensor sum");
  const auto& a0 = z.terms.front().first;
  if (a0.rows() != a0.cols() || z.terms.front().second.rows() != a0.rows() ||
      z.terms.front().second.cols() != a0.cols())
    throw InputError("delta: factors must be square and of equal shape");
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a0.rows(), a0.cols());
  for (const auto& [a, b] : z.terms) out += a * b;
  return out;
}

/// Delta^op(sum a_k (x) b_k) = sum b_k a_k.
template <class Scalar>
Matrix<Scalar> delta_op(const TensorSum<Scalar>& z) {
  if (z.empty()) throw InputError("delta_op: empty tensor sum");
  const auto& a0 = z.terms.front().first;
  if (a0.rows() != a0.cols() || z.terms.front().second.rows() != a0.rows() ||
      z.terms.front().second.cols() != a0.cols())
    throw InputError("delta_op: factors must be square and of equal shape");
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a0.rows(), a0.cols());
  for (const auto& [a, b] : z.terms) out += b * a;
  return out;
}

using FactorNorm = std::function<double(const CMatrix&)>;

/// Upper norm of a factor in M_n^p (spatial, normalized counting measure).
FactorNorm spatial_norm(const Exponent& p);

/// sum_k ||a_k|| ||b_k||: an upper bound on the projective norm of z.
double projective_upper(const TensorSum<Complex>& z, const FactorNorm& norm_a, const FactorNorm& norm_b);
double projective_upper(const TensorSum<Complex>& z, const FactorNorm& norm);

/// Exact sum_k ||a_k|| ||b_k|| for factors that are monomial with real rational
/// entries, whose Lp norm is the largest entry modulus for every p.
/// UnsupportedError for any other factor.
Rational projective_upper_exact(const TensorSum<QComplex>& z);

enum class Contraction { delta, delta_op, custom };

/// ||c(z)|| for a contraction c; a lower bound for ||z||_pi whenever c is contractive.
/// For Contraction::custom the caller provides the contraction as `custom`.
double projective_lower_via_contraction(const TensorSum<Complex>& z, Contraction c, const FactorNorm& target_lower,
                                        const std::function<CMatrix(const TensorSum<Complex>&)>& custom = {});

TensorSum<Complex> to_double(const TensorSum<QComplex>& z);

/// Averages z1 = (Delta(z0)^{-1} (x) 1) z0 over G so that the result z has
/// Delta(z) = 1 and (g (x) 1) z = z (1 (x) g) for g in G. Both properties are
/// verified (exactly for QComplex, to 1e-12 otherwise); StructureError on failure.
template <class Scalar>
TensorSum<Scalar> symmetrize_diagonal(const TensorSum<Scalar>& z0, const std::vector<Matrix<Scalar>>& group) {
  if (group.empty()) throw InputError("symmetrize_diagonal: empty group");
  const Matrix<Scalar> dz = delta(z0);
  Matrix<Scalar> dz_inv;
  try {
    dz_inv = inverse(dz);
  } catch (const InputError&) {
    throw InputError("symmetrize_diagonal: Delta(z0) is singular");
  }
  const Scalar w = detail::reciprocal<Scalar>(group.size());
  TensorSum<Scalar> z;
  for (const auto& h : group) {
    const Matrix<Scalar> h_inv = inverse(h);
    for (const auto& [a, b] : z0.terms) z.add(w * (h * (dz_inv * a)), b * h_inv);
  }

  const Matrix<Scalar> id = Matrix<Scalar>::Identity(dz.rows(), dz.cols());
  const Matrix<Scalar> flat = flatten(z);
  auto same = [](const Matrix<Scalar>& x, const Matrix<Scalar>& y) {
    if constexpr (std::is_same_v<Scalar, QComplex>)
      return exactly_equal(x, y);
    else
      return (x - y).cwiseAbs().maxCoeff() <= 1e-12;
  };
  if (!same(delta(z), id)) throw StructureError("symmetrize_diagonal: Delta(z) != 1 after averaging");
  for (std::size_t g = 0; g < group.size(); ++g) {
    const Matrix<Scalar> left = kron<Scalar>(group[g], id) * flat;
    const Matrix<Scalar> right = flat * kron<Scalar>(id, group[g]);
    if (!same(left, right))
      throw StructureError("symmetrize_diagonal: commutation fails for group element " + std::to_string(g));
  }
  return z;
}

/// Blocks z_{l,k} in A (x) A of an element z of (M_d (x) A) (x) (M_d (x) A)
/// written as z = sum_{j,k,l} e_{j,k} (x) e_{l,j} (x) z_{l,k}.
struct DiagonalStructure {
  std::size_t d = 0;
  std::size_t m = 0;                            // dimension of A = M_m
  std::vector<TensorSum<Complex>> blocks;       // index (l-1)*d + (k-1)

  const TensorSum<Complex>& block(std::size_t l, std::size_t k) const { return blocks[(l - 1) * d + (k - 1)]; }
};

/// Verifies (x (x) 1_A (x) 1_B) z = z (1_B (x) x (x) 1_A) on every matrix unit x
/// (exact comparison) and Delta(z) = 1, then extracts z_{l,k} and checks
/// sum_j Delta_A(z_{j,j}) = 1_A. Throws StructureError naming the violation.
DiagonalStructure diagonal_structure(const TensorSum<Complex>& z, std::size_t d);

}  // namespace lpuhf
