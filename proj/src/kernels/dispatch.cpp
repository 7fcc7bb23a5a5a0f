#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "latw/kernels/kernels.hpp"

namespace latw::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  const char* force = std::getenv("LATW_FORCE_SCALAR");
  if (force != nullptr && std::string(force) == "1") return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return detect(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("ISA not available: " + std::string(name(isa)));
  active().store(isa, std::memory_order_relaxed);
}

void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift) {
  if (active_isa() == Isa::avx2)
    avx2::shifted_mul_acc(acc, a, b, shift);
  else
    scalar::shifted_mul_acc(acc, a, b, shift);
}

void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out) {
  if (active_isa() == Isa::avx2)
    avx2::volterra_field(x, grad, out);
  else
    scalar::volterra_field(x, grad, out);
}

}  // namespace latw::kernels
