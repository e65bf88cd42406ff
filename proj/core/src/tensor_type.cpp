#include "lpuhf/tensor_type.hpp"

#include "lpuhf/error.hpp"
#include "lpuhf/matalg.hpp"

#include <cmath>
#include <sstream>

namespace lpuhf {

StageSpec::StageSpec(std::vector<Stage> stages, Exponent p) : stages_(std::move(stages)), p_(std::move(p)) {
  if (p_.is_infinite()) throw InputError("stage spec: p must be finite");
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    const auto& st = stages_[k];
    const std::string where = "stage " + std::to_string(k + 1);
    if (st.d < 2) throw InputError(where + ": d must be at least 2");
    if (st.system.d() != st.d)
      throw InputError(where + ": system dimension " + std::to_string(st.system.d()) + " does not match d=" +
                       std::to_string(st.d));
    try {
      require_valid(st.system);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
}

std::vector<std::size_t> StageSpec::dims() const {
  std::vector<std::size_t> out;
  out.reserve(stages_.size());
  for (const auto& s : stages_) out.push_back(s.d);
  return out;
}

std::string to_string(GammaFamily::Kind k) {
  switch (k) {
    case GammaFamily::Kind::power: return "power";
    case GammaFamily::Kind::geometric: return "geometric";
    case GammaFamily::Kind::log: return "log";
  }
  return "unknown";
}

double GammaFamily::gamma(std::size_t n) const {
  if (n == 0) throw InputError("gamma family: stages are numbered from 1");
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::power: return 1.0 + c * std::pow(x, -a);
    case Kind::geometric: return 1.0 + c * std::pow(q, x);
    case Kind::log: return 1.0 + c / (x * std::pow(std::log(x + 1.0), a));
  }
  return 1.0;
}

bool GammaFamily::convergent() const {
  if (c == 0.0) return true;
  switch (kind) {
    case Kind::power: return a > 1.0;
    case Kind::geometric: return q < 1.0;
    case Kind::log: return a > 1.0;
  }
  return false;
}

std::string GammaFamily::rule() const {
  std::ostringstream os;
  os.precision(17);
  if (c == 0.0) return "c = 0: every term vanishes";
  switch (kind) {
    case Kind::power: os << "p-series: sum c n^-a converges iff a > 1 (a = " << a << ")"; break;
    case Kind::geometric: os << "geometric: sum c q^n converges iff q < 1 (q = " << q << ")"; break;
    case Kind::log:
      os << "Bertrand series: sum c / (n ln(n+1)^a) converges iff a > 1 (a = " << a << ")";
      break;
  }
  return os.str();
}

namespace {

void check_family(const GammaFamily& f) {
  if (!(f.c >= 0.0) || !std::isfinite(f.c)) throw InputError("gamma family: c must be a finite number >= 0");
  if (!std::isfinite(f.a)) throw InputError("gamma family: a must be finite");
  if (f.kind == GammaFamily::Kind::geometric && (!(f.q > 0.0) || !std::isfinite(f.q)))
    throw InputError("gamma family: q must be positive");
  if (f.d < 2) throw InputError("gamma family: d must be at least 2");
}

}  // namespace

StageRecipe::StageRecipe(GammaFamily family) : family_(family) { check_family(family); }

StageRecipe::StageRecipe(StageSpec explicit_stages) : explicit_(std::move(explicit_stages)) {}

Stage StageRecipe::stage(std::size_t n) const {
  if (n == 0) throw InputError("stage recipe: stages are numbered from 1");
  if (family_) return {family_->d, gamma_corner_system(family_->d, family_->gamma(n))};
  if (n > explicit_->size())
    throw InputError("stage recipe: stage " + std::to_string(n) + " beyond the " + std::to_string(explicit_->size()) +
                     " listed stages");
  return explicit_->stage(n);
}

std::optional<std::size_t> StageRecipe::length() const {
  if (family_) return std::nullopt;
  return explicit_->size();
}

StageSpec StageRecipe::prefix(std::size_t n, const Exponent& p) const {
  std::vector<Stage> stages;
  stages.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) stages.push_back(stage(k));
  return StageSpec(std::move(stages), p);
}

BigInt r_d(const StageSpec& spec, std::size_t n) {
  if (n > spec.size())
    throw InputError("r_d: n=" + std::to_string(n) + " exceeds the stage count " + std::to_string(spec.size()));
  BigInt out = 1;
  for (std::size_t k = 1; k <= n; ++k) out *= spec.stage(k).d;
  return out;
}

std::string SupernaturalNumber::to_string() const {
  std::string out;
  for (const auto& [prime, e] : exponents) {
    if (!out.empty()) out += " * ";
    out += std::to_string(prime) + "^" + std::to_string(e);
  }
  if (out.empty()) out = "1";
  if (truncated) out += " (truncated)";
  return out;
}

SupernaturalNumber supernatural_truncated(const StageSpec& spec, std::size_t n) {
  if (n > spec.size()) throw InputError("supernatural_truncated: n exceeds the stage count");
  SupernaturalNumber out;
  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t v = spec.stage(k).d;
    for (std::uint64_t q = 2; q * q <= v; ++q)
      while (v % q == 0) {
        ++out.exponents[q];
        v /= q;
      }
    if (v > 1) ++out.exponents[v];
  }
  return out;
}

SimilaritySystem combined_system(const StageSpec& spec, std::size_t m, std::size_t n) {
  if (m > n || n > spec.size())
    throw InputError("combined_system: need 0 <= m <= n <= " + std::to_string(spec.size()));
  if (m == n) return SimilaritySystem::basic(1);
  std::size_t dim = 1;
  std::size_t count = 1;
  for (std::size_t k = m + 1; k <= n; ++k) {
    dim *= spec.stage(k).d;
    count *= spec.stage(k).system.size();
    check_capacity(dim, "combined_system");
    if (count > kMaxCombinedIndices)
      throw CapacityError("combined_system: " + std::to_string(count) + " indices exceed the cap " +
                          std::to_string(kMaxCombinedIndices));
  }
  SimilaritySystem out = spec.stage(m + 1).system;
  NormInterval expected = p_bound(out, spec.p());
  for (std::size_t k = m + 2; k <= n; ++k) {
    out = tensor_systems(out, spec.stage(k).system);
    expected = interval_product(expected, p_bound(spec.stage(k).system, spec.p()));
  }
  const auto got = p_bound(out, spec.p());
  const double tol = 1e-12 * std::max(1.0, expected.upper);
  if (got.lower > expected.upper + tol || got.upper < expected.lower - tol)
    throw StructureError("combined_system: p-bound is not multiplicative across stages");
  return out;
}

CMatrix sigma_embed(const CMatrix& x, const StageSpec& spec, std::size_t m, std::size_t n) {
  if (m > n || n > spec.size()) throw InputError("sigma_embed: need 0 <= m <= n <= stage count");
  const BigInt rm = r_d(spec, m);
  const BigInt rn = r_d(spec, n);
  if (rn > BigInt(max_dimension())) throw CapacityError("sigma_embed: stage dimension exceeds the cap");
  const auto dm = static_cast<std::size_t>(rm);
  const auto dn = static_cast<std::size_t>(rn);
  if (static_cast<std::size_t>(x.rows()) != dm || x.rows() != x.cols())
    throw InputError("sigma_embed: element must be " + std::to_string(dm) + "x" + std::to_string(dm));
  if (m == n) return x;
  return kron<Complex>(x, CMatrix::Identity(dn / dm, dn / dm));
}

NormInterval stage_norm(const StageSpec& spec, const CMatrix& x, std::size_t n) {
  const BigInt rn = r_d(spec, n);
  if (rn > BigInt(max_dimension())) throw CapacityError("stage_norm: stage dimension exceeds the cap");
  if (BigInt(x.rows()) != rn || x.rows() != x.cols())
    throw InputError("stage_norm: element size does not match r_d(n) = " + rn.str());
  return norm_pS(combined_system(spec, 0, n), x, spec.p()).interval;
}

}  // namespace lpuhf
