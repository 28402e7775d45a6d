#include "aqt/kernels.hpp"

#include <atomic>

namespace aqt::kernels {

#if defined(AQT_KERNELS_AVX2)
const Ops* avx2_ops_table();  // defined in kernels_avx2.cpp
#endif

const Ops* avx2_ops() {
#if defined(AQT_KERNELS_AVX2)
  return avx2_ops_table();
#else
  return nullptr;
#endif
}

bool cpu_supports_avx2() {
#if defined(AQT_KERNELS_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Ops* pick_default() {
  if (const Ops* v = avx2_ops(); v != nullptr && cpu_supports_avx2()) return v;
  return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = pick_default();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool set_active(Variant v) {
  if (v == Variant::scalar) {
    g_active.store(&scalar_ops(), std::memory_order_release);
    return true;
  }
  const Ops* ops = avx2_ops();
  if (ops == nullptr || !cpu_supports_avx2()) return false;
  g_active.store(ops, std::memory_order_release);
  return true;
}

Variant active_variant() {
  return &active() == &scalar_ops() ? Variant::scalar : Variant::avx2;
}

}  // namespace aqt::kernels
