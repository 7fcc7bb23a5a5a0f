#include <vector>

#include "latw/kernels/kernels.hpp"
#include "padded.hpp"

namespace latw::kernels::scalar {

void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift) {
  const long n = long(acc.size());
  long k = shift % n;
  if (k < 0) k += n;
  for (long s = 0; s < n; ++s) {
    long idx = s + k;
    if (idx >= n) idx -= n;
    double p = a[s] * b[idx];
    acc[s] = acc[s] + p;
  }
}

void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out) {
  const long n = long(x.size());
  detail::Padded xp(x), gp(grad);
  for (long i = 0; i < n; ++i) {
    double xm2 = xp[i - 2], xm1 = xp[i - 1], x0 = xp[i], x1 = xp[i + 1], x2 = xp[i + 2];
    double forward1 = x0 * x1 * (x0 + x1 - 1.0);
    double forward2 = x0 * x1 * x2;
    double back1 = xm1 * x0 * (xm1 + x0 - 1.0);
    double back2 = xm2 * xm1 * x0;
    double v = forward1 * gp[i + 1];
    v = v + forward2 * gp[i + 2];
    v = v - back1 * gp[i - 1];
    v = v - back2 * gp[i - 2];
    out[i] = v;
  }
}

}  // namespace latw::kernels::scalar
