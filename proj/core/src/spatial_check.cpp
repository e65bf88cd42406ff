#include "lpuhf/spatial_check.hpp"

#include "lpuhf/error.hpp"

#include <cmath>
#include <sstream>

namespace lpuhf {

namespace {

// (w_k / w'_j)^{1/p}; exactly 1 when the weights agree.
double change_of_measure(double wk, double wj, double p) { return wk == wj ? 1.0 : std::pow(wk / wj, 1.0 / p); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string unit_name(std::size_t j, std::size_t k) {
  return "rho(e_{" + std::to_string(j) + "," + std::to_string(k) + "})";
}

}  // namespace

std::set<std::size_t> SpatialPartialIsometry::domain_support() const {
  std::set<std::size_t> out;
  for (const auto& [k, j] : atom_map) out.insert(k);
  return out;
}

std::set<std::size_t> SpatialPartialIsometry::range_support() const {
  std::set<std::size_t> out;
  for (const auto& [k, j] : atom_map) out.insert(j);
  return out;
}

CMatrix SpatialPartialIsometry::matrix() const {
  CMatrix out = CMatrix::Zero(codomain.size(), domain.size());
  for (const auto& [k, j] : atom_map)
    out(j, k) = phase.at(k) * change_of_measure(domain.weight(k), codomain.weight(j), p);
  return out;
}

Recognition recognize_spi(const Mat& a, const Exponent& p) {
  Recognition out;
  if (p.is_infinite()) {
    out.refusal = "p must be finite";
    return out;
  }
  if (static_cast<std::size_t>(a.rows()) != a.codomain.size() ||
      static_cast<std::size_t>(a.cols()) != a.domain.size()) {
    out.refusal = "matrix shape does not match its measures";
    return out;
  }
  SpatialPartialIsometry spi;
  spi.domain = a.domain;
  spi.codomain = a.codomain;
  spi.p = p.value();
  std::vector<bool> row_used(a.rows(), false);
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    bool col_used = false;
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      const Complex t = a.entries(j, k);
      if (t == Complex(0.0, 0.0)) continue;
      if (col_used) {
        out.refusal = "column " + std::to_string(k + 1) + " has more than one nonzero entry";
        return out;
      }
      if (row_used[j]) {
        out.refusal = "row " + std::to_string(j + 1) + " has more than one nonzero entry";
        return out;
      }
      col_used = row_used[j] = true;
      const double expected = change_of_measure(a.domain.weight(k), a.codomain.weight(j), spi.p);
      const double mod = std::abs(t);
      if (std::abs(mod - expected) > kSpatialTolerance * expected) {
        out.refusal = "entry (" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ") has modulus " + fmt(mod) +
                      ", expected " + fmt(expected);
        return out;
      }
      spi.atom_map[k] = j;
      spi.phase[k] = expected == 1.0 ? t : t / expected;
    }
  }
  out.spi = std::move(spi);
  return out;
}

SpatialRepCheck is_spatial_rep(const std::vector<Mat>& table, std::size_t d, const Exponent& p) {
  if (d == 0 || table.size() != d * d) throw InputError("is_spatial_rep: table must hold d^2 matrix-unit images");
  const auto n = table.front().rows();
  for (const auto& t : table)
    if (t.rows() != n || t.cols() != n || !(t.domain == table.front().domain) || !(t.codomain == t.domain))
      throw InputError("is_spatial_rep: images must share one square space");
  auto at = [&](std::size_t j, std::size_t k) -> const CMatrix& { return table[(j - 1) * d + (k - 1)].entries; };

  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t j = 1; j <= d; ++j) sum += at(j, j);
  if ((sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9) throw InputError("is_spatial_rep: rho is not unital");
  for (std::size_t a = 1; a <= d; ++a)
    for (std::size_t b = 1; b <= d; ++b)
      for (std::size_t c = 1; c <= d; ++c)
        for (std::size_t e = 1; e <= d; ++e) {
          const CMatrix prod = at(a, b) * at(c, e);
          const CMatrix expect = b == c ? at(a, e) : CMatrix::Zero(n, n);
          if ((prod - expect).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
            throw InputError("is_spatial_rep: rho is not multiplicative on " + unit_name(a, b) + " " + unit_name(c, e));
        }

  SpatialRepCheck out;
  std::vector<std::optional<SpatialPartialIsometry>> spis(d * d);
  // away from p = 2 spatial means isometric, so norms are checked on every unit first
  if (!p.is_exactly(2))
    for (std::size_t j = 1; j <= d; ++j)
      for (std::size_t k = 1; k <= d; ++k) {
        const auto nm = opnorm(table[(j - 1) * d + (k - 1)], p);
        if (!nm.contains(1.0, 1e-9)) {
          out.refusal = "norm-1 violation: ||" + unit_name(j, k) + "|| = " + fmt(nm.lower) + " != 1";
          return out;
        }
      }
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t k = 1; k <= d; ++k) {
      const Mat& m = table[(j - 1) * d + (k - 1)];
      auto rec = recognize_spi(m, p);
      if (!rec) {
        out.refusal = unit_name(j, k) + " is not a spatial partial isometry: " + rec.refusal;
        return out;
      }
      spis[(j - 1) * d + (k - 1)] = std::move(rec.spi);
    }

  std::set<std::size_t> covered;
  for (std::size_t j = 1; j <= d; ++j) {
    const auto part = spis[(j - 1) * d + (j - 1)]->domain_support();
    for (auto x : part)
      if (!covered.insert(x).second) {
        out.refusal = "supports of the diagonal images overlap at atom " + std::to_string(x + 1);
        return out;
      }
    out.partition.push_back(part);
  }
  if (covered.size() != static_cast<std::size_t>(n)) {
    out.refusal = "supports of the diagonal images do not cover every atom";
    out.partition.clear();
    return out;
  }
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t k = 1; k <= d; ++k) {
      const auto& s = *spis[(j - 1) * d + (k - 1)];
      if (s.domain_support() != out.partition[k - 1] || s.range_support() != out.partition[j - 1]) {
        out.refusal = unit_name(j, k) + " does not map X_" + std::to_string(k) + " onto X_" + std::to_string(j);
        out.partition.clear();
        return out;
      }
    }
  out.spatial = true;
  return out;
}

SpatialPartialIsometry direct_sum_spi(const std::vector<SpatialPartialIsometry>& parts) {
  if (parts.empty()) throw InputError("direct_sum_spi: no parts");
  SpatialPartialIsometry out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& q = parts[i];
    if (q.p != out.p) throw InputError("direct_sum_spi: exponents differ");
    const std::size_t dom_off = out.domain.size();
    const std::size_t cod_off = out.codomain.size();
    out.domain = AtomicMeasure::disjoint_union(out.domain, q.domain);
    out.codomain = AtomicMeasure::disjoint_union(out.codomain, q.codomain);
    for (const auto& [k, j] : q.atom_map) {
      out.atom_map[k + dom_off] = j + cod_off;
      out.phase[k + dom_off] = q.phase.at(k);
    }
  }
  return out;
}

SpatialPartialIsometry compose_spi(const SpatialPartialIsometry& a, const SpatialPartialIsometry& b) {
  if (a.p != b.p) throw InputError("compose_spi: exponents differ");
  if (!(b.codomain == a.domain)) throw InputError("compose_spi: codomain of b is not the domain of a");
  SpatialPartialIsometry out;
  out.domain = b.domain;
  out.codomain = a.codomain;
  out.p = a.p;
  for (const auto& [k, mid] : b.atom_map) {
    const auto it = a.atom_map.find(mid);
    if (it == a.atom_map.end()) continue;
    out.atom_map[k] = it->second;
    out.phase[k] = a.phase.at(mid) * b.phase.at(k);
  }
  return out;
}

SpatialPartialIsometry tensor_spi(const SpatialPartialIsometry& a, const SpatialPartialIsometry& b) {
  if (a.p != b.p) throw InputError("tensor_spi: exponents differ");
  SpatialPartialIsometry out;
  out.domain = AtomicMeasure::product(a.domain, b.domain);
  out.codomain = AtomicMeasure::product(a.codomain, b.codomain);
  out.p = a.p;
  const std::size_t nb_dom = b.domain.size();
  const std::size_t nb_cod = b.codomain.size();
  for (const auto& [k1, j1] : a.atom_map)
    for (const auto& [k2, j2] : b.atom_map) {
      out.atom_map[k1 * nb_dom + k2] = j1 * nb_cod + j2;
      out.phase[k1 * nb_dom + k2] = a.phase.at(k1) * b.phase.at(k2);
    }
  return out;
}

}  // namespace lpuhf
