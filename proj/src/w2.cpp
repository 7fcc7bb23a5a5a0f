#include "latw/w2.hpp"

#include "latw/kernels/kernels.hpp"

namespace latw {

Hamiltonian builtin_hamiltonian(const std::string& name) {
  using V = std::vector<double>;
  if (name == "const")
    return {name, [](const V&) { return 1.0; }, [](const V& x) { return V(x.size(), 0.0); }};
  if (name == "sum")
    return {name,
            [](const V& x) {
              double s = 0.0;
              for (double v : x) s += v;
              return s;
            },
            [](const V& x) { return V(x.size(), 1.0); }};
  if (name == "sum_log")
    return {name,
            [](const V& x) {
              double s = 0.0;
              for (double v : x) s += std::log(v);
              return s;
            },
            [](const V& x) {
              V g(x.size());
              for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0 / x[i];
              return g;
            }};
  throw DomainError("unknown hamiltonian '" + name + "' (expected const, sum or sum_log)");
}

std::vector<double> w2_vector_field(const std::vector<double>& x, const std::vector<double>& grad) {
  if (x.size() < 3) throw DomainError("w2 bracket needs N > 2");
  std::vector<double> out(x.size());
  kernels::volterra_field(x, grad, out);
  return out;
}

CrossRatioChart<double> hamiltonian_step(const CrossRatioChart<double>& c, const Hamiltonian& h, double dt) {
  const std::size_t n = c.x.size();
  auto field = [&](const std::vector<double>& x) { return w2_vector_field(x, h.gradient(x)); };
  auto axpy = [n](const std::vector<double>& x, const std::vector<double>& k, double a) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * k[i];
    return y;
  };
  const auto& x = c.x;
  auto k1 = field(x);
  auto k2 = field(axpy(x, k1, dt / 2));
  auto k3 = field(axpy(x, k2, dt / 2));
  auto k4 = field(axpy(x, k3, dt));
  CrossRatioChart<double> out{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) out.x[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

}  // namespace latw
