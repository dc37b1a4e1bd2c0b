#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace snvkit::kernels {

const KernelTable& scalar_kernels() { return detail::scalar_table(); }

std::optional<KernelTable> avx2_kernels() {
#if defined(SNVKIT_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return detail::avx2_table();
  }
#endif
  return std::nullopt;
}

const KernelTable& active_kernels() {
  static const KernelTable chosen = [] {
    const char* env = std::getenv("SNVKIT_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (auto simd = avx2_kernels()) return *simd;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace snvkit::kernels
