#include "qg5/exact.hpp"

#include <cstdlib>

#include "qg5/errors.hpp"

namespace qg5 {

Rational rational_pow(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  bool neg = e < 0;
  unsigned long n = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), q.get_num_mpz_t(), n);
  mpz_pow_ui(out.get_den_mpz_t(), q.get_den_mpz_t(), n);
  out.canonicalize();
  if (neg) {
    if (out == 0) throw Error("rational_pow: zero to negative power");
    out = Rational(1) / out;
  }
  return out;
}

bool rational_root(const Rational& q, unsigned long k, Rational& out) {
  if (k == 0) return false;
  if (k == 1) { out = q; return true; }
  if (sgn(q) < 0 && k % 2 == 0) return false;
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class rnum, rden;
  bool neg = sgn(num) < 0;
  mpz_class anum = abs(num);
  if (!mpz_root(rnum.get_mpz_t(), anum.get_mpz_t(), k)) return false;
  // mpz_root truncates; re-verify exactness explicitly for clarity.
  mpz_class check;
  mpz_pow_ui(check.get_mpz_t(), rnum.get_mpz_t(), k);
  if (check != anum) return false;
  if (!mpz_root(rden.get_mpz_t(), den.get_mpz_t(), k)) return false;
  mpz_pow_ui(check.get_mpz_t(), rden.get_mpz_t(), k);
  if (check != den) return false;
  out = Rational(neg ? -rnum : rnum, rden);
  out.canonicalize();
  return true;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

Sqrt2Ext Sqrt2Ext::inverse() const {
  // 1/(a + b*sqrt2) = (a - b*sqrt2)/(a^2 - 2 b^2); the denominator vanishes
  // only at a = b = 0 because sqrt2 is irrational.
  Rational d = a_ * a_ - 2 * b_ * b_;
  if (d == 0) {
    if (is_zero()) throw Error("Sqrt2Ext: inverse of zero");
    // a^2 = 2 b^2 with (a,b) != 0 would make sqrt2 rational.
    throw Error("Sqrt2Ext: impossible zero norm");
  }
  return Sqrt2Ext(a_ / d, -b_ / d);
}

std::string Sqrt2Ext::str() const {
  if (b_ == 0) return a_.get_str();
  std::string s;
  if (a_ != 0) s = a_.get_str();
  if (b_ == 1) {
    s += s.empty() ? "s2" : "+s2";
  } else if (b_ == -1) {
    s += "-s2";
  } else {
    std::string bs = b_.get_str();
    if (!s.empty() && bs[0] != '-') s += "+";
    s += bs + "*s2";
  }
  return s;
}

int Sqrt2Ext::cmp_structural(const Sqrt2Ext& o) const {
  int c = cmp(a_, o.a_);
  if (c != 0) return c;
  return cmp(b_, o.b_);
}

ExactComplex ExactComplex::inverse() const {
  Sqrt2Ext n = norm2();
  if (n.is_zero()) throw Error("ExactComplex: inverse of zero");
  Sqrt2Ext ninv = n.inverse();
  return ExactComplex(re_ * ninv, -im_ * ninv);
}

ExactComplex ExactComplex::pow_int(long e) const {
  if (e < 0) return inverse().pow_int(-e);
  ExactComplex acc(1);
  ExactComplex base = *this;
  unsigned long n = static_cast<unsigned long>(e);
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

std::string ExactComplex::str() const {
  if (im_.is_zero()) return re_.str();
  std::string s;
  if (!re_.is_zero()) s = re_.str();
  std::string is = im_.str();
  bool needs_paren = is.find_first_of("+-", 1) != std::string::npos;
  if (needs_paren) {
    s += s.empty() ? "(" : "+(";
    s += is + ")*i";
  } else {
    if (!s.empty() && is[0] != '-') s += "+";
    if (is == "1") s += "i";
    else if (is == "-1") s += "-i";
    else s += is + "*i";
  }
  return s;
}

int ExactComplex::cmp_structural(const ExactComplex& o) const {
  int c = re_.cmp_structural(o.re_);
  if (c != 0) return c;
  return im_.cmp_structural(o.im_);
}

}  // namespace qg5
