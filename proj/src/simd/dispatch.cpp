#include "dirac/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace dirac::simd {

const KernelTable* avx2_table();

const KernelTable* avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("DIRAC_THRESHOLD_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace dirac::simd
