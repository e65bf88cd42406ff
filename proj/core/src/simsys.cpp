#include "lpuhf/simsys.hpp"

#include "lpuhf/error.hpp"
#include "lpuhf/matalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace lpuhf {

namespace {

CMatrix safe_inverse(const CMatrix& s, std::size_t d, bool diagonal) {
  if (static_cast<std::size_t>(s.rows()) != d || s.rows() != s.cols()) return {};
  if (diagonal && s.isDiagonal(0.0)) {
    CMatrix inv = CMatrix::Zero(s.rows(), s.cols());
    for (Eigen::Index j = 0; j < s.rows(); ++j) {
      if (s(j, j) == Complex(0.0, 0.0)) return {};
      inv(j, j) = reciprocal(s(j, j));
    }
    return inv;
  }
  try {
    return inverse(s);
  } catch (const InputError&) {
    return {};
  }
}

bool is_identity(const CMatrix& s) {
  return s.rows() == s.cols() && s == CMatrix::Identity(s.rows(), s.cols());
}

}  // namespace

SimilaritySystem::SimilaritySystem(std::size_t d, std::vector<SystemEntry> entries, bool diagonal)
    : d_(d), entries_(std::move(entries)), diagonal_(diagonal) {
  if (d_ == 0) throw InputError("similarity system: d must be positive");
  check_capacity(d_, "similarity system");
  inverses_.reserve(entries_.size());
  for (const auto& e : entries_) inverses_.push_back(safe_inverse(e.s, d_, diagonal_));
}

SimilaritySystem SimilaritySystem::basic(std::size_t d) {
  return SimilaritySystem(d, {SystemEntry{"1", 1.0, CMatrix::Identity(d, d)}}, true);
}

AtomicMeasure SimilaritySystem::measure() const {
  std::vector<double> w;
  std::vector<std::string> labels;
  w.reserve(d_ * entries_.size());
  for (const auto& e : entries_)
    for (std::size_t j = 0; j < d_; ++j) {
      w.push_back(e.f / static_cast<double>(d_));
      labels.push_back("(" + std::to_string(j + 1) + "," + e.label + ")");
    }
  return AtomicMeasure(std::move(w), std::move(labels));
}

std::size_t SimilaritySystem::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].label == label) return i;
  throw InputError("similarity system: no index labelled '" + label + "'");
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::shape: return "SHAPE";
    case Violation::Kind::one: return "ONE";
    case Violation::Kind::inv: return "INV";
    case Violation::Kind::pos: return "POS";
    case Violation::Kind::sum: return "SUM";
    case Violation::Kind::diag: return "DIAG";
  }
  return "UNKNOWN";
}

std::vector<Violation> validate_system(const SimilaritySystem& s) {
  std::vector<Violation> out;
  using K = Violation::Kind;
  if (s.size() == 0) {
    out.push_back({K::shape, "index set is empty"});
    return out;
  }
  bool has_one = false;
  double total = 0.0;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s.entry(i);
    const std::string where = "index '" + e.label + "'";
    if (!labels.insert(e.label).second) out.push_back({K::shape, where + ": duplicate label"});
    if (static_cast<std::size_t>(e.s.rows()) != s.d() || static_cast<std::size_t>(e.s.cols()) != s.d()) {
      out.push_back({K::shape, where + ": s is " + std::to_string(e.s.rows()) + "x" + std::to_string(e.s.cols()) +
                                   ", expected " + std::to_string(s.d()) + "x" + std::to_string(s.d())});
      continue;
    }
    if (!e.s.allFinite()) out.push_back({K::shape, where + ": non-finite entry"});
    if (is_identity(e.s)) has_one = true;
    if (s.inverse(i).size() == 0 || !s.inverse(i).allFinite())
      out.push_back({K::inv, where + ": s is singular"});
    if (!(e.f > 0.0) || !std::isfinite(e.f)) out.push_back({K::pos, where + ": weight must be positive"});
    total += e.f;
    if (s.diagonal() && !e.s.isDiagonal(0.0)) out.push_back({K::diag, where + ": s is not diagonal"});
  }
  if (!has_one) out.push_back({K::one, "identity is not in the range of s"});
  if (std::abs(total - 1.0) > 1e-12) out.push_back({K::sum, "weights sum to " + std::to_string(total) + ", not 1"});
  return out;
}

void require_valid(const SimilaritySystem& s) {
  const auto v = validate_system(s);
  if (v.empty()) return;
  std::string msg = "invalid similarity system:";
  for (const auto& x : v) msg += " [" + to_string(x.kind) + "] " + x.message + ";";
  throw InputError(msg);
}

NormInterval p_bound(const SimilaritySystem& s, const Exponent& p) {
  if (s.size() == 0) throw InputError("p_bound: empty system");
  std::vector<NormInterval> parts;
  parts.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.inverse(i).size() == 0) throw InputError("p_bound: s(" + s.entry(i).label + ") is singular");
    if (s.diagonal()) {
      const double a = s.entry(i).s.diagonal().cwiseAbs().maxCoeff();
      const double b = s.inverse(i).diagonal().cwiseAbs().maxCoeff();
      parts.push_back(NormInterval::point(a * b, NormMethod::exact_monomial));
    } else {
      parts.push_back(interval_product(opnorm(s.entry(i).s, p), opnorm(s.inverse(i), p)));
    }
  }
  return interval_max(parts);
}

CMatrix conjugate_block(const SimilaritySystem& s, std::size_t i, const CMatrix& x) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (x.rows() != x.cols() || n % s.d() != 0)
    throw InputError("conjugate_block: element size " + std::to_string(x.rows()) + " is not a multiple of d=" +
                     std::to_string(s.d()));
  const std::size_t m = n / s.d();
  const CMatrix& a = s.entry(i).s;
  const CMatrix& a_inv = s.inverse(i);
  if (a_inv.size() == 0) throw InputError("conjugate_block: s(" + s.entry(i).label + ") is singular");
  if (s.diagonal()) {
    CMatrix out = x;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r / m != c / m && out(r, c) != Complex(0.0, 0.0))
          out(r, c) = (a(r / m, r / m) * out(r, c)) * a_inv(c / m, c / m);
    return out;
  }
  if (m == 1) return a * x * a_inv;
  const CMatrix id = CMatrix::Identity(m, m);
  return kron<Complex>(a, id) * x * kron<Complex>(a_inv, id);
}

Mat rep_matrix(const SimilaritySystem& s, const CMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != s.d() || x.rows() != x.cols())
    throw InputError("rep_matrix: element must be d x d");
  const std::size_t d = s.d();
  check_capacity(d * s.size(), "rep_matrix");
  Mat out;
  out.entries = CMatrix::Zero(d * s.size(), d * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.entries.block(i * d, i * d, d, d) = conjugate_block(s, i, x);
  out.domain = s.measure();
  out.codomain = out.domain;
  return out;
}

SystemNorm norm_pS(const SimilaritySystem& s, const CMatrix& x, const Exponent& p) {
  if (s.size() == 0) throw InputError("norm_pS: empty system");
  check_capacity(static_cast<std::size_t>(x.rows()), "norm_pS");
  std::vector<NormInterval> parts;
  parts.reserve(s.size());
  if (s.diagonal() && is_monomial(x)) {
    // Conjugating a monomial element by a diagonal matrix keeps it monomial;
    // its norm is the largest entry modulus, with no dense pass per index.
    const auto n = static_cast<std::size_t>(x.rows());
    if (n % s.d() != 0) throw InputError("norm_pS: element size is not a multiple of d");
    const std::size_t m = n / s.d();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> nz;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        if (x(r, c) != Complex(0.0, 0.0)) nz.emplace_back(r, c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const CMatrix& a = s.entry(i).s;
      const CMatrix& a_inv = s.inverse(i);
      double best = 0.0;
      Eigen::Index arg = 0;
      for (const auto& [r, c] : nz) {
        // diagonal blocks are untouched by the conjugation
        const double v = r / m == c / m ? std::abs(x(r, c)) : std::abs((a(r / m, r / m) * x(r, c)) * a_inv(c / m, c / m));
        if (v > best) {
          best = v;
          arg = c;
        }
      }
      auto part = NormInterval::point(best, NormMethod::exact_monomial);
      part.lower_witness = CVector::Zero(x.cols());
      part.lower_witness[arg] = 1.0;
      parts.push_back(std::move(part));
    }
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) parts.push_back(opnorm(conjugate_block(s, i, x), p));
  }
  SystemNorm out;
  out.interval = interval_max(parts);
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i].lower == out.interval.lower) {
      out.witness_index = i;
      break;
    }
  return out;
}

double RTable::max() const { return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end()); }

RTable r_table(const SimilaritySystem& s, const Exponent& p) {
  if (!s.diagonal()) throw UnsupportedError("r_table: system is not diagonal");
  const std::size_t d = s.d();
  RTable t;
  t.d = d;
  t.r.assign(d * d, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CMatrix& a = s.entry(i).s;
    const CMatrix& a_inv = s.inverse(i);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        t.r[j * d + k] = std::max(t.r[j * d + k], j == k ? 1.0 : std::abs(a(j, j) * a_inv(k, k)));
  }
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t k = 1; k <= d; ++k) {
      const auto n = norm_pS(s, matrix_unit<Complex>(d, j, k), p).interval;
      if (!n.contains(t.at(j, k), 1e-9))
        throw StructureError("r_table: norm of e_{" + std::to_string(j) + "," + std::to_string(k) +
                             "} disagrees with r_{j,k}");
    }
  return t;
}

SimilaritySystem tensor_systems(const SimilaritySystem& a, const SimilaritySystem& b) {
  check_capacity(a.d() * b.d(), "tensor_systems");
  std::vector<SystemEntry> entries;
  entries.reserve(a.size() * b.size());
  for (const auto& x : a.entries())
    for (const auto& y : b.entries())
      entries.push_back({"(" + x.label + "," + y.label + ")", x.f * y.f, kron<Complex>(x.s, y.s)});
  return SimilaritySystem(a.d() * b.d(), std::move(entries), a.diagonal() && b.diagonal());
}

SimilaritySystem gamma_corner_system(std::size_t d, double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw InputError("gamma_corner_system: gamma must be >= 1");
  if (d == 0) throw InputError("gamma_corner_system: d must be positive");
  if (d > 16) throw CapacityError("gamma_corner_system: 2^d corners exceed the index cap");
  const std::size_t count = gamma == 1.0 ? 1 : (std::size_t{1} << d);
  std::vector<SystemEntry> entries;
  entries.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    CMatrix s = CMatrix::Identity(d, d);
    std::string label;
    for (std::size_t j = 0; j < d; ++j) {
      const bool up = (mask >> j) & 1U;
      if (up) s(j, j) = gamma;
      label += up ? 'g' : '1';
    }
    entries.push_back({label, 1.0 / static_cast<double>(count), s});
  }
  return SimilaritySystem(d, std::move(entries), true);
}

namespace {

// Corners are exact when the conjugated norm is monotone in every block scale:
// block-diagonal elements, or all nonzero blocks in one block row or column.
bool corners_exact(std::size_t d, const CMatrix& x) {
  const std::size_t m = static_cast<std::size_t>(x.rows()) / d;
  std::set<std::size_t> rows;
  std::set<std::size_t> cols;
  bool off = false;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      if (x.block(j * m, k * m, m, m).isZero(0.0)) continue;
      if (j != k) off = true;
      rows.insert(j);
      cols.insert(k);
    }
  return !off || rows.size() <= 1 || cols.size() <= 1;
}

}  // namespace

NormInterval k_gamma_norm(std::size_t d, double gamma, const CMatrix& x, const Exponent& p) {
  const auto corners = gamma_corner_system(d, gamma);
  NormInterval out = norm_pS(corners, x, p).interval;
  if (corners_exact(d, x)) return out;
  // Two certified uppers: gamma ||x||_p, and the blockwise triangle inequality
  // max_l ||x_ll|| + gamma sum_{l != m} ||x_lm||.
  const std::size_t m = static_cast<std::size_t>(x.rows()) / d;
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t k = 0; k < d; ++k) {
      const CMatrix b = x.block(l * m, k * m, m, m);
      if (b.isZero(0.0)) continue;
      const double nb = opnorm(b, p).upper;
      if (l == k)
        diag = std::max(diag, nb);
      else
        off += nb;
    }
  const double sandwich = std::min(gamma * opnorm(x, p).upper, diag + gamma * off);
  if (sandwich < out.upper) {
    out.upper = std::max(sandwich, out.lower);
    out.methods.push_back(NormMethod::sandwich);
  }
  return out;
}

SimilaritySystem subsystem_restrict(const SimilaritySystem& s, const std::vector<std::size_t>& indices,
                                    const std::vector<CMatrix>& test_elements, const Exponent& p) {
  if (indices.empty()) throw InputError("subsystem_restrict: index subset is empty");
  std::set<std::size_t> seen;
  double total = 0.0;
  for (auto i : indices) {
    if (i >= s.size()) throw InputError("subsystem_restrict: index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw InputError("subsystem_restrict: repeated index " + std::to_string(i));
    total += s.entry(i).f;
  }
  std::vector<SystemEntry> entries;
  for (auto i : indices) {
    auto e = s.entry(i);
    e.f /= total;
    entries.push_back(std::move(e));
  }
  SimilaritySystem out(s.d(), std::move(entries), s.diagonal());
  for (const auto& v : validate_system(out))
    if (v.kind == Violation::Kind::one) throw InputError("subsystem_restrict: subset does not contain the identity");
  require_valid(out);
  for (std::size_t t = 0; t < test_elements.size(); ++t) {
    const auto small = norm_pS(out, test_elements[t], p).interval;
    const auto big = norm_pS(s, test_elements[t], p).interval;
    if (small.lower > big.lower + 1e-9 || small.upper > big.upper + 1e-9)
      throw StructureError("subsystem_restrict: restriction is not contractive on test element " + std::to_string(t));
  }
  return out;
}

bool norm_monotonicity_check(std::size_t d, double beta, double gamma, const CMatrix& x, const Exponent& p) {
  if (!(beta >= 1.0) || !(gamma >= beta)) throw InputError("norm_monotonicity_check: need 1 <= beta <= gamma");
  // The beta corners lie in K_{d,gamma}, so their sup is at most the gamma enclosure's upper end.
  const double small = norm_pS(gamma_corner_system(d, beta), x, p).interval.lower;
  const double big = k_gamma_norm(d, gamma, x, p).upper;
  return small <= big + 1e-9;
}

}  // namespace lpuhf
