#pragma once

// Exact scalar arithmetic for the Clifford layer and the expression engine.
// The working field is Q(sqrt2) + i*Q(sqrt2): every value is
// (a + b*sqrt2) + i*(c + d*sqrt2) with a,b,c,d arbitrary-precision rationals.
// Plain rationals are the b = d = 0 case; the sqrt2 part is what makes the
// similarity transformation (1 + gamma4)/sqrt2 exactly representable.

#include <gmpxx.h>

#include <complex>
#include <string>

namespace qg5 {

using Rational = mpq_class;

// q^e for integer e (e < 0 requires q != 0).
Rational rational_pow(const Rational& q, long e);

// Exact k-th root of q if one exists in Q (k >= 1; q >= 0 or k odd).
bool rational_root(const Rational& q, unsigned long k, Rational& out);

std::string rational_str(const Rational& q);

// Element a + b*sqrt2 of the real quadratic field Q(sqrt2).
class Sqrt2Ext {
 public:
  Sqrt2Ext() : a_(0), b_(0) {}
  Sqrt2Ext(long v) : a_(v), b_(0) {}                       // NOLINT(runtime/explicit)
  Sqrt2Ext(const Rational& a) : a_(a), b_(0) {}            // NOLINT(runtime/explicit)
  Sqrt2Ext(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static Sqrt2Ext sqrt2() { return Sqrt2Ext(Rational(0), Rational(1)); }
  static Sqrt2Ext inv_sqrt2() { return Sqrt2Ext(Rational(0), Rational(1, 2)); }

  const Rational& rat_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  Sqrt2Ext operator-() const { return Sqrt2Ext(-a_, -b_); }
  Sqrt2Ext operator+(const Sqrt2Ext& o) const { return Sqrt2Ext(a_ + o.a_, b_ + o.b_); }
  Sqrt2Ext operator-(const Sqrt2Ext& o) const { return Sqrt2Ext(a_ - o.a_, b_ - o.b_); }
  Sqrt2Ext operator*(const Sqrt2Ext& o) const {
    return Sqrt2Ext(a_ * o.a_ + 2 * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
  }
  Sqrt2Ext inverse() const;  // throws on zero
  Sqrt2Ext operator/(const Sqrt2Ext& o) const { return *this * o.inverse(); }

  bool operator==(const Sqrt2Ext& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const Sqrt2Ext& o) const { return !(*this == o); }

  double to_double() const { return a_.get_d() + b_.get_d() * 1.4142135623730950488; }
  std::string str() const;

  // Total order compatible with the real embedding is not needed; this is a
  // deterministic structural order for canonical sorting only.
  int cmp_structural(const Sqrt2Ext& o) const;

 private:
  Rational a_, b_;
};

// Exact complex scalar over Q(sqrt2).
class ExactComplex {
 public:
  ExactComplex() : re_(), im_() {}
  ExactComplex(long v) : re_(v), im_() {}                  // NOLINT(runtime/explicit)
  ExactComplex(const Rational& re) : re_(re), im_() {}     // NOLINT(runtime/explicit)
  ExactComplex(Sqrt2Ext re) : re_(std::move(re)), im_() {} // NOLINT(runtime/explicit)
  ExactComplex(Sqrt2Ext re, Sqrt2Ext im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactComplex i() { return ExactComplex(Sqrt2Ext(0), Sqrt2Ext(1)); }
  static ExactComplex from_rational(const Rational& re, const Rational& im) {
    Rational r = re, m = im;
    r.canonicalize();
    m.canonicalize();
    return ExactComplex(Sqrt2Ext(r), Sqrt2Ext(m));
  }

  const Sqrt2Ext& re() const { return re_; }
  const Sqrt2Ext& im() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return im_.is_zero() && re_ == Sqrt2Ext(1); }
  bool is_real_rational() const { return im_.is_zero() && re_.is_rational(); }

  ExactComplex conj() const { return ExactComplex(re_, -im_); }
  // |z|^2 as an element of Q(sqrt2); positive for z != 0.
  Sqrt2Ext norm2() const { return re_ * re_ + im_ * im_; }

  ExactComplex operator-() const { return ExactComplex(-re_, -im_); }
  ExactComplex operator+(const ExactComplex& o) const {
    return ExactComplex(re_ + o.re_, im_ + o.im_);
  }
  ExactComplex operator-(const ExactComplex& o) const {
    return ExactComplex(re_ - o.re_, im_ - o.im_);
  }
  ExactComplex operator*(const ExactComplex& o) const {
    return ExactComplex(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
  }
  ExactComplex inverse() const;  // throws on zero
  ExactComplex operator/(const ExactComplex& o) const { return *this * o.inverse(); }

  ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
  ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
  ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }

  bool operator==(const ExactComplex& o) const { return re_ == o.re_ && im_ == o.im_; }
  bool operator!=(const ExactComplex& o) const { return !(*this == o); }

  // Integer powers (e < 0 requires nonzero value).
  ExactComplex pow_int(long e) const;

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }
  std::string str() const;

  int cmp_structural(const ExactComplex& o) const;

 private:
  Sqrt2Ext re_, im_;
};

}  // namespace qg5
