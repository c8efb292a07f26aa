#include <atomic>
#include <cstdlib>
#include <string>

#include "cosfit/error.hpp"
#include "cosfit/simd/kernels.hpp"

namespace cosfit::simd {

#if defined(COSFIT_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(COSFIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels* initial_choice() {
  const Kernels* best = avx2_kernels();
  if (const char* env = std::getenv("COSFIT_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && best != nullptr) return best;
  }
  return best != nullptr ? best : &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> ptr{initial_choice()};
  return ptr;
}

}  // namespace

const Kernels* avx2_kernels() {
#if defined(COSFIT_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() { return *current().load(std::memory_order_acquire); }

void select(Backend backend) {
  const Kernels* k = backend == Backend::scalar ? &scalar_kernels() : avx2_kernels();
  if (k == nullptr) throw InvalidArgument("simd::select: backend not available on this machine");
  current().store(k, std::memory_order_release);
}

}  // namespace cosfit::simd
