#include "lpuhf/error.hpp"

#include <cstdlib>
#include <string>

namespace lpuhf {

std::size_t max_dimension() {
  constexpr std::size_t kDefault = 4096;
  const char* env = std::getenv("LPUHF_MAX_DIM");
  if (env == nullptr || *env == '\0') return kDefault;
  try {
    const long long v = std::stoll(env);
    return v > 0 ? static_cast<std::size_t>(v) : kDefault;
  } catch (const std::exception&) {
    return kDefault;
  }
}

void check_capacity(std::size_t dim, const std::string& what) {
  const std::size_t cap = max_dimension();
  if (dim > cap)
    throw CapacityError(what + ": dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap) +
                        " (set LPUHF_MAX_DIM to override)");
}

}  // namespace lpuhf
