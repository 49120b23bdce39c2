#include <cstdlib>
#include <string_view>

#include "nfb/simd/kernels.hpp"

namespace nfb::simd {

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("NFB_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelTable* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace nfb::simd
