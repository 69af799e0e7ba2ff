#pragma once

#include <complex>
#include <type_traits>

namespace lcs {

// Neumaier's variant of Kahan summation. Works for double and
// std::complex<double> (real and imaginary parts compensated independently).
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T initial) : sum_(initial) {}

  void add(T x) {
    if constexpr (std::is_floating_point_v<T>) {
      step(sum_, comp_, x);
    } else {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      step(re, cre, x.real());
      step(im, cim, x.imag());
      sum_ = T(re, im);
      comp_ = T(cre, cim);
    }
  }

  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const { return sum_ + comp_; }

 private:
  static void step(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  T sum_{};
  T comp_{};
};

}  // namespace lcs
