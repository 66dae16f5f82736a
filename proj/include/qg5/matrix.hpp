#pragma once

// 4x4 matrices over the exact complex scalar field. Everything here is
// value-semantic and exact; inverse() performs Gauss-Jordan elimination in
// Q(sqrt2)+iQ(sqrt2) and either succeeds exactly or throws.

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "qg5/exact.hpp"

namespace qg5 {

class Mat4c {
 public:
  Mat4c() = default;

  static Mat4c zero() { return Mat4c(); }
  static Mat4c identity();
  static Mat4c scalar(const ExactComplex& s);

  const ExactComplex& at(int r, int c) const { return e_[r * 4 + c]; }
  ExactComplex& at(int r, int c) { return e_[r * 4 + c]; }

  Mat4c operator+(const Mat4c& o) const;
  Mat4c operator-(const Mat4c& o) const;
  Mat4c operator*(const Mat4c& o) const;
  Mat4c operator-() const;
  Mat4c scaled(const ExactComplex& s) const;

  bool operator==(const Mat4c& o) const { return e_ == o.e_; }
  bool operator!=(const Mat4c& o) const { return !(*this == o); }
  bool is_zero() const;

  Mat4c transpose() const;
  Mat4c conj_transpose() const;
  bool is_hermitian() const { return *this == conj_transpose(); }

  Mat4c inverse() const;  // throws NotInvertible

  // Split into s*I + residual with s taken from the (0,0) entry.
  std::pair<ExactComplex, Mat4c> identity_part() const;
  // s if the matrix equals s*I exactly.
  std::optional<ExactComplex> as_scalar_identity() const;

  // Largest |entry| in double precision (diagnostic magnitude of residuals).
  double max_abs() const;

  std::array<std::complex<double>, 16> to_complex() const;
  std::string str() const;

 private:
  std::array<ExactComplex, 16> e_{};
};

inline Mat4c anticommutator_half(const Mat4c& a, const Mat4c& b) {
  return (a * b + b * a).scaled(ExactComplex(Rational(1, 2)));
}

inline Mat4c commutator(const Mat4c& a, const Mat4c& b) { return a * b - b * a; }

}  // namespace qg5
