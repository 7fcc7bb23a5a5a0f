#pragma once

#include <span>
#include <vector>

namespace latw::kernels::detail {

// Cyclic array with a halo of two entries on each side; index range [-2, n+2).
class Padded {
 public:
  explicit Padded(std::span<const double> v) : n_(long(v.size())), data_(v.size() + 4 + 4) {
    for (long i = -2; i < n_ + 2 + 4; ++i) {
      long j = i % n_;
      if (j < 0) j += n_;
      data_[i + 2] = v[j];
    }
  }
  double operator[](long i) const { return data_[i + 2]; }
  const double* at(long i) const { return data_.data() + i + 2; }

 private:
  long n_;
  std::vector<double> data_;
};

}  // namespace latw::kernels::detail
