#pragma once
// f64 inner loops with a scalar reference and an AVX2 variant selected at
// runtime. Both variants perform the same operations in the same order (no
// FMA contraction), so their results are bit-identical.

#include <span>
#include <string_view>

namespace latw::kernels {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);

/// Best ISA supported by this CPU and build (honours LATW_FORCE_SCALAR=1).
Isa detected_isa();

/// ISA used by the dispatching entry points below.
Isa active_isa();
/// Override dispatch (tests use this to run both variants). Throws if the
/// requested ISA is unavailable.
void set_active_isa(Isa isa);
bool isa_available(Isa isa);

/// acc[s] += a[s] * b[(s + shift) mod N], N = acc.size().
void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift);

/// Volterra/W2 Hamiltonian vector field: out[i] = sum_j {x_i, x_j} grad[j] for
/// the cubic bracket {x_i,x_{i+1}} = x_i x_{i+1}(x_i + x_{i+1} - 1),
/// {x_i,x_{i+2}} = x_i x_{i+1} x_{i+2}, indices cyclic, N >= 3.
void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out);

namespace scalar {
void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift);
void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift);
void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out);
}  // namespace avx2

}  // namespace latw::kernels
