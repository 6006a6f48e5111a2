#include "mzlab/kern/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mzlab::kern {

bool avx2_available() {
#if defined(__AVX2__) || defined(MZLAB_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Ops& ops() {
  static const Ops* selected = [] {
    const char* pin = std::getenv("MZLAB_KERNEL");
    if (pin != nullptr) {
      if (std::strcmp(pin, "scalar") == 0) return &scalar_ops();
      if (std::strcmp(pin, "avx2") == 0 && avx2_available()) return &avx2_ops();
    }
    return avx2_available() ? &avx2_ops() : &scalar_ops();
  }();
  return *selected;
}

}  // namespace mzlab::kern
