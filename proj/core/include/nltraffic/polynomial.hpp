#pragma once

#include <span>
#include <vector>

namespace nltraffic {

/// Dense polynomial sum_k c[k] x^k, evaluated by Horner's rule.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double x) const noexcept;
  Polynomial derivative() const;
  /// Antiderivative vanishing at x = 0.
  Polynomial antiderivative() const;
  /// Coefficients of p(a + s) in powers of s.
  Polynomial shifted(double a) const;
  Polynomial scaled_argument(double factor) const;  // p(factor * x)

  std::span<const double> coefficients() const noexcept { return c_; }
  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace nltraffic
