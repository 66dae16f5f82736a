#pragma once

// Minimal symbolic scalar-expression engine: immutable expression trees over
// coordinates and opaque scalar fields, normalized to a canonical rational
// form whose terms are generalized monomials (rational exponents) in atoms.
// Zero-testing is decidable for this class, which is the engine's core
// obligation; everything else (derivatives, numeric evaluation, the
// s-expression format) is built on the same normal form.
//
// Atoms are: coordinates x^i; opaque fields with a partial-derivative
// multi-index; sin/cos of a single coordinate (cos^2 is rewritten to
// 1 - sin^2, so zero-testing stays sound); and exponential plane-wave fields
// whose derivative is a constant multiple of themselves.

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qg5/exact.hpp"

namespace qg5::sym {

enum class FieldKind { Opaque, Sin, Cos, PlaneWave };

struct FieldInfo {
  std::string name;
  FieldKind kind = FieldKind::Opaque;
  bool positive = false;  // fractional powers allowed only on positive fields
  int coord = -1;         // Sin/Cos argument
  std::vector<ExactComplex> wave_factor;  // PlaneWave: d_a f = wave_factor[a] * f
};

using FieldPtr = std::shared_ptr<const FieldInfo>;

FieldPtr opaque_field(std::string name, bool positive = false);
FieldPtr sin_field(int coord);
FieldPtr cos_field(int coord);
// Phase derivative factors must include the imaginary unit already.
FieldPtr plane_wave_field(std::string name, std::vector<ExactComplex> wave_factor);

struct Atom {
  bool is_coord = false;
  int coord = -1;
  FieldPtr field;
  std::vector<int> deriv;  // sorted multi-index; Opaque fields only

  static Atom coordinate(int i);
  static Atom field_atom(FieldPtr f, std::vector<int> deriv = {});

  bool operator==(const Atom& o) const;
  bool operator<(const Atom& o) const;
  std::string str() const;
};

struct Monomial {
  ExactComplex coeff;
  std::vector<std::pair<Atom, Rational>> powers;  // sorted by atom, exponents nonzero

  bool same_powers(const Monomial& o) const;
  Monomial inverted() const;  // coeff^-1, exponents negated
  bool has_cos() const;
};

class Poly {
 public:
  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly constant(const ExactComplex& c);
  static Poly from_monomial(Monomial m);  // applies the cos^2 rewrite

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const std::vector<Monomial>& terms() const { return terms_; }
  const Monomial& leading() const { return terms_.front(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const ExactComplex& c) const;
  Poly mul_monomial(const Monomial& m) const;
  Poly pow_uint(unsigned long e) const;
  Poly diff(int coord) const;

  bool operator==(const Poly& o) const;

 private:
  // Invariant: sorted by powers key, unique keys, nonzero coefficients, and
  // no cos atom with integer exponent >= 2.
  std::vector<Monomial> terms_;
};

// num/den with den != 0. When the denominator reduces to a cos-free monomial
// it is folded into the numerator, so most results are Laurent polynomials.
struct RatForm {
  Poly num;
  Poly den = Poly::constant(ExactComplex(1));

  void normalize();
  bool is_zero() const { return num.is_zero(); }

  RatForm operator+(const RatForm& o) const;
  RatForm operator-(const RatForm& o) const;
  RatForm operator-() const;
  RatForm operator*(const RatForm& o) const;
  RatForm inverse() const;  // throws on zero
  RatForm pow(const Rational& e) const;
  RatForm diff(int coord) const;
  bool equals(const RatForm& o) const;  // cross-multiplied zero test
};

// Closed-form stand-ins for opaque fields during numeric checks; they must
// evaluate any partial derivative exactly (up to rounding).
class NumericField {
 public:
  virtual ~NumericField() = default;
  virtual std::complex<double> eval(const std::vector<int>& deriv,
                                    const std::vector<double>& x) const = 0;
};

// Multivariate polynomial sum of c * prod x_i^{e_i}.
class PolynomialField : public NumericField {
 public:
  struct Term {
    double c;
    std::vector<int> exps;
  };
  explicit PolynomialField(std::vector<Term> terms) : terms_(std::move(terms)) {}
  std::complex<double> eval(const std::vector<int>& deriv,
                            const std::vector<double>& x) const override;

 private:
  std::vector<Term> terms_;
};

// P(x) * exp(-sum_i c_i x_i^2); derivatives stay in the same family.
class PolyGaussianField : public NumericField {
 public:
  PolyGaussianField(std::vector<PolynomialField::Term> poly, std::vector<double> gauss)
      : poly_(std::move(poly)), gauss_(std::move(gauss)) {}
  std::complex<double> eval(const std::vector<int>& deriv,
                            const std::vector<double>& x) const override;

 private:
  std::vector<PolynomialField::Term> poly_;
  std::vector<double> gauss_;
};

struct EvalContext {
  std::vector<double> coords;
  std::map<std::string, std::shared_ptr<const NumericField>> fields;
};

class SymExpr {
 public:
  enum class Kind { Constant, Coordinate, Field, Sum, Product, Power, Negate, Inverse };

  SymExpr();  // zero

  static SymExpr constant(const Rational& q);
  static SymExpr constant(const ExactComplex& c);
  static SymExpr coordinate(int i);
  static SymExpr field(FieldPtr f, std::vector<int> deriv = {});
  static SymExpr from_atom(const Atom& a);
  static SymExpr sum(std::vector<SymExpr> kids);
  static SymExpr product(std::vector<SymExpr> kids);

  SymExpr pow(const Rational& e) const;
  SymExpr inv() const;
  SymExpr operator-() const;

  Kind kind() const;
  bool structurally_equal(const SymExpr& o) const;

  // Canonical form; idempotent.
  SymExpr normalized() const;
  bool is_zero() const;
  bool equals(const SymExpr& o) const;  // mathematical equality
  SymExpr diff(int coord) const;

  std::complex<double> eval(const EvalContext& ctx) const;
  double eval_real(const EvalContext& ctx) const;  // throws if imaginary part is large

  std::string sexpr() const;  // canonical s-expression of the normalized form
  static SymExpr parse_sexpr(const std::string& text,
                             const std::map<std::string, FieldPtr>& fields = {});

  RatForm to_ratform() const;
  static SymExpr from_ratform(const RatForm& r);

 private:
  struct Node;
  explicit SymExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

SymExpr operator+(const SymExpr& a, const SymExpr& b);
SymExpr operator-(const SymExpr& a, const SymExpr& b);
SymExpr operator*(const SymExpr& a, const SymExpr& b);

}  // namespace qg5::sym
