#include "latw/kernels/kernels.hpp"
#include "padded.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define LATW_HAVE_X86 1
#else
#define LATW_HAVE_X86 0
#endif

namespace latw::kernels::avx2 {

#if LATW_HAVE_X86

namespace {

__attribute__((target("avx2"))) void mul_acc_run(double* acc, const double* a, const double* b,
                                                 long len) {
  long s = 0;
  for (; s + 4 <= len; s += 4) {
    __m256d va = _mm256_loadu_pd(a + s);
    __m256d vb = _mm256_loadu_pd(b + s);
    __m256d vc = _mm256_loadu_pd(acc + s);
    _mm256_storeu_pd(acc + s, _mm256_add_pd(vc, _mm256_mul_pd(va, vb)));
  }
  for (; s < len; ++s) {
    double p = a[s] * b[s];
    acc[s] = acc[s] + p;
  }
}

}  // namespace

void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift) {
  const long n = long(acc.size());
  long k = shift % n;
  if (k < 0) k += n;
  // Two contiguous runs: s in [0, n-k) reads b[k..n), s in [n-k, n) reads b[0..k).
  mul_acc_run(acc.data(), a.data(), b.data() + k, n - k);
  mul_acc_run(acc.data() + (n - k), a.data() + (n - k), b.data(), k);
}

__attribute__((target("avx2"))) void volterra_field(std::span<const double> x,
                                                    std::span<const double> grad,
                                                    std::span<double> out) {
  const long n = long(x.size());
  detail::Padded xp(x), gp(grad);
  const __m256d one = _mm256_set1_pd(1.0);
  long i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xm2 = _mm256_loadu_pd(xp.at(i - 2));
    __m256d xm1 = _mm256_loadu_pd(xp.at(i - 1));
    __m256d x0 = _mm256_loadu_pd(xp.at(i));
    __m256d x1 = _mm256_loadu_pd(xp.at(i + 1));
    __m256d x2 = _mm256_loadu_pd(xp.at(i + 2));
    __m256d forward1 = _mm256_mul_pd(_mm256_mul_pd(x0, x1), _mm256_sub_pd(_mm256_add_pd(x0, x1), one));
    __m256d forward2 = _mm256_mul_pd(_mm256_mul_pd(x0, x1), x2);
    __m256d back1 = _mm256_mul_pd(_mm256_mul_pd(xm1, x0), _mm256_sub_pd(_mm256_add_pd(xm1, x0), one));
    __m256d back2 = _mm256_mul_pd(_mm256_mul_pd(xm2, xm1), x0);
    __m256d v = _mm256_mul_pd(forward1, _mm256_loadu_pd(gp.at(i + 1)));
    v = _mm256_add_pd(v, _mm256_mul_pd(forward2, _mm256_loadu_pd(gp.at(i + 2))));
    v = _mm256_sub_pd(v, _mm256_mul_pd(back1, _mm256_loadu_pd(gp.at(i - 1))));
    v = _mm256_sub_pd(v, _mm256_mul_pd(back2, _mm256_loadu_pd(gp.at(i - 2))));
    _mm256_storeu_pd(out.data() + i, v);
  }
  if (i < n) {
    // Tail: reuse the scalar loop body on the remaining sites.
    for (; i < n; ++i) {
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
}

#else

void shifted_mul_acc(std::span<double> acc, std::span<const double> a, std::span<const double> b,
                     long shift) {
  scalar::shifted_mul_acc(acc, a, b, shift);
}
void volterra_field(std::span<const double> x, std::span<const double> grad, std::span<double> out) {
  scalar::volterra_field(x, grad, out);
}

#endif

}  // namespace latw::kernels::avx2
