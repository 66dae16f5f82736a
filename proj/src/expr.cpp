#include "qg5/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qg5/errors.hpp"

namespace qg5::sym {

namespace {

long rat_to_long(const Rational& q, const char* what) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p())
    throw Error(std::string("expected small integer in ") + what);
  return q.get_num().get_si();
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

void check_name(const std::string& name) {
  if (name.empty()) throw Error("field name must be nonempty");
  for (char c : name)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
      throw Error("field name must not contain spaces or parens: '" + name + "'");
}

}  // namespace

FieldPtr opaque_field(std::string name, bool positive) {
  check_name(name);
  auto f = std::make_shared<FieldInfo>();
  f->name = std::move(name);
  f->kind = FieldKind::Opaque;
  f->positive = positive;
  return f;
}

FieldPtr sin_field(int coord) {
  auto f = std::make_shared<FieldInfo>();
  f->name = "sin@" + std::to_string(coord);
  f->kind = FieldKind::Sin;
  f->coord = coord;
  return f;
}

FieldPtr cos_field(int coord) {
  auto f = std::make_shared<FieldInfo>();
  f->name = "cos@" + std::to_string(coord);
  f->kind = FieldKind::Cos;
  f->coord = coord;
  return f;
}

FieldPtr plane_wave_field(std::string name, std::vector<ExactComplex> wave_factor) {
  check_name(name);
  auto f = std::make_shared<FieldInfo>();
  f->name = std::move(name);
  f->kind = FieldKind::PlaneWave;
  f->wave_factor = std::move(wave_factor);
  return f;
}

Atom Atom::coordinate(int i) {
  Atom a;
  a.is_coord = true;
  a.coord = i;
  return a;
}

Atom Atom::field_atom(FieldPtr f, std::vector<int> deriv) {
  Atom a;
  a.is_coord = false;
  a.field = std::move(f);
  std::sort(deriv.begin(), deriv.end());
  a.deriv = std::move(deriv);
  return a;
}

bool Atom::operator==(const Atom& o) const {
  if (is_coord != o.is_coord) return false;
  if (is_coord) return coord == o.coord;
  return field->name == o.field->name && field->kind == o.field->kind && deriv == o.deriv;
}

bool Atom::operator<(const Atom& o) const {
  if (is_coord != o.is_coord) return is_coord;  // coordinates first
  if (is_coord) return coord < o.coord;
  if (field->name != o.field->name) return field->name < o.field->name;
  if (field->kind != o.field->kind) return field->kind < o.field->kind;
  return deriv < o.deriv;
}

std::string Atom::str() const {
  if (is_coord) return "(x " + std::to_string(coord) + ")";
  switch (field->kind) {
    case FieldKind::Sin: return "(sin " + std::to_string(field->coord) + ")";
    case FieldKind::Cos: return "(cos " + std::to_string(field->coord) + ")";
    case FieldKind::PlaneWave: return "(pw " + field->name + ")";
    default: break;
  }
  if (deriv.empty()) return "(f " + field->name + ")";
  std::string s = "(f " + field->name + " d";
  for (int i : deriv) s += " " + std::to_string(i);
  return s + ")";
}

bool Monomial::same_powers(const Monomial& o) const { return powers == o.powers; }

Monomial Monomial::inverted() const {
  Monomial m;
  m.coeff = coeff.inverse();
  m.powers = powers;
  for (auto& [a, e] : m.powers) e = -e;
  return m;
}

bool Monomial::has_cos() const {
  for (const auto& [a, e] : powers)
    if (!a.is_coord && a.field->kind == FieldKind::Cos) return true;
  return false;
}

namespace {

using PowKey = std::vector<std::pair<Atom, Rational>>;
using PolyMap = std::map<PowKey, ExactComplex>;

// Multiply atom^e into sorted powers, dropping zero exponents.
void mono_mul_atom(Monomial& m, const Atom& a, const Rational& e) {
  if (e == 0) return;
  auto it = std::lower_bound(
      m.powers.begin(), m.powers.end(), a,
      [](const std::pair<Atom, Rational>& p, const Atom& atom) { return p.first < atom; });
  if (it != m.powers.end() && it->first == a) {
    it->second += e;
    if (it->second == 0) m.powers.erase(it);
  } else {
    m.powers.insert(it, {a, e});
  }
}

// Insert a monomial with the cos^2 -> 1 - sin^2 rewrite applied, so every
// stored monomial has integer cos exponents at most 1.
void add_rewritten(PolyMap& acc, const Monomial& m) {
  if (m.coeff.is_zero()) return;
  for (size_t i = 0; i < m.powers.size(); ++i) {
    const Atom& a = m.powers[i].first;
    const Rational& e = m.powers[i].second;
    if (a.is_coord || a.field->kind != FieldKind::Cos) continue;
    if (!is_integer(e) || e < 2) continue;
    long ei = rat_to_long(e, "cos exponent");
    long k = ei / 2;
    int r = static_cast<int>(ei % 2);
    Monomial base = m;
    if (r == 0) base.powers.erase(base.powers.begin() + static_cast<std::ptrdiff_t>(i));
    else base.powers[i].second = Rational(1);
    Atom sin_a = Atom::field_atom(sin_field(a.field->coord));
    for (long j = 0; j <= k; ++j) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
      Monomial t = base;
      Rational c(binom);
      if (j % 2 == 1) c = -c;
      t.coeff = base.coeff * ExactComplex(c);
      if (j > 0) mono_mul_atom(t, sin_a, Rational(2 * j));
      add_rewritten(acc, t);
    }
    return;
  }
  auto [it, inserted] = acc.emplace(m.powers, m.coeff);
  if (!inserted) it->second += m.coeff;
}

}  // namespace

Poly Poly::constant(const ExactComplex& c) {
  Poly p;
  if (!c.is_zero()) {
    Monomial m;
    m.coeff = c;
    p.terms_.push_back(std::move(m));
  }
  return p;
}

Poly Poly::from_monomial(Monomial m) {
  PolyMap acc;
  std::sort(m.powers.begin(), m.powers.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  add_rewritten(acc, m);
  Poly p;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    Monomial t;
    t.coeff = coeff;
    t.powers = key;
    p.terms_.push_back(std::move(t));
  }
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].powers.empty());
}

Poly Poly::operator+(const Poly& o) const {
  PolyMap acc;
  for (const auto& t : terms_) acc.emplace(t.powers, t.coeff);
  for (const auto& t : o.terms_) {
    auto [it, inserted] = acc.emplace(t.powers, t.coeff);
    if (!inserted) it->second += t.coeff;
  }
  Poly p;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    Monomial t;
    t.coeff = coeff;
    t.powers = key;
    p.terms_.push_back(std::move(t));
  }
  return p;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scaled(const ExactComplex& c) const {
  if (c.is_zero()) return Poly();
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff = t.coeff * c;
  return p;
}

Poly Poly::mul_monomial(const Monomial& m) const {
  PolyMap acc;
  for (const auto& t : terms_) {
    Monomial prod = t;
    prod.coeff = t.coeff * m.coeff;
    for (const auto& [a, e] : m.powers) mono_mul_atom(prod, a, e);
    add_rewritten(acc, prod);
  }
  Poly p;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    Monomial t;
    t.coeff = coeff;
    t.powers = key;
    p.terms_.push_back(std::move(t));
  }
  return p;
}

Poly Poly::operator*(const Poly& o) const {
  PolyMap acc;
  for (const auto& t : terms_)
    for (const auto& u : o.terms_) {
      Monomial prod = t;
      prod.coeff = t.coeff * u.coeff;
      for (const auto& [a, e] : u.powers) mono_mul_atom(prod, a, e);
      add_rewritten(acc, prod);
    }
  Poly p;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    Monomial t;
    t.coeff = coeff;
    t.powers = key;
    p.terms_.push_back(std::move(t));
  }
  return p;
}

Poly Poly::pow_uint(unsigned long e) const {
  Poly acc = Poly::constant(ExactComplex(1));
  Poly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

namespace {

// d(atom)/dx_j as a polynomial factor. Returns zero, a constant, or a
// monomial in a replacement atom; `self_factor` flags the plane-wave case
// where the derivative is a multiple of the same atom.
struct AtomDeriv {
  bool zero = true;
  bool self_factor = false;
  ExactComplex factor;  // multiplies the result
  std::optional<Atom> replacement;
};

AtomDeriv atom_diff(const Atom& a, int j) {
  AtomDeriv d;
  if (a.is_coord) {
    if (a.coord == j) {
      d.zero = false;
      d.factor = ExactComplex(1);
    }
    return d;
  }
  switch (a.field->kind) {
    case FieldKind::Opaque: {
      d.zero = false;
      d.factor = ExactComplex(1);
      std::vector<int> nd = a.deriv;
      nd.push_back(j);
      d.replacement = Atom::field_atom(a.field, std::move(nd));
      return d;
    }
    case FieldKind::Sin:
      if (a.field->coord == j) {
        d.zero = false;
        d.factor = ExactComplex(1);
        d.replacement = Atom::field_atom(cos_field(a.field->coord));
      }
      return d;
    case FieldKind::Cos:
      if (a.field->coord == j) {
        d.zero = false;
        d.factor = ExactComplex(-1);
        d.replacement = Atom::field_atom(sin_field(a.field->coord));
      }
      return d;
    case FieldKind::PlaneWave: {
      if (static_cast<size_t>(j) < a.field->wave_factor.size()) {
        const ExactComplex& f = a.field->wave_factor[static_cast<size_t>(j)];
        if (!f.is_zero()) {
          d.zero = false;
          d.self_factor = true;
          d.factor = f;
        }
      }
      return d;
    }
  }
  return d;
}

}  // namespace

Poly Poly::diff(int coord) const {
  PolyMap acc;
  for (const auto& t : terms_) {
    for (size_t i = 0; i < t.powers.size(); ++i) {
      const Atom& a = t.powers[i].first;
      const Rational& e = t.powers[i].second;
      AtomDeriv d = atom_diff(a, coord);
      if (d.zero) continue;
      Monomial term = t;
      term.coeff = t.coeff * ExactComplex(e) * d.factor;
      if (d.self_factor) {
        // exponent unchanged: e * f * A^e
      } else {
        // e * A^{e-1} * dA
        term.powers[i].second = e - 1;
        if (term.powers[i].second == 0)
          term.powers.erase(term.powers.begin() + static_cast<std::ptrdiff_t>(i));
        if (d.replacement) mono_mul_atom(term, *d.replacement, Rational(1));
      }
      add_rewritten(acc, term);
    }
  }
  Poly p;
  for (auto& [key, coeff] : acc) {
    if (coeff.is_zero()) continue;
    Monomial t;
    t.coeff = coeff;
    t.powers = key;
    p.terms_.push_back(std::move(t));
  }
  return p;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].coeff == o.terms_[i].coeff)) return false;
    if (!(terms_[i].powers == o.terms_[i].powers)) return false;
  }
  return true;
}

void RatForm::normalize() {
  if (den.is_zero()) throw Error("RatForm: zero denominator");
  if (num.is_zero()) {
    den = Poly::constant(ExactComplex(1));
    return;
  }
  if (den.is_monomial() && !den.leading().has_cos()) {
    num = num.mul_monomial(den.leading().inverted());
    den = Poly::constant(ExactComplex(1));
    return;
  }
  const ExactComplex& c = den.leading().coeff;
  if (!c.is_one()) {
    ExactComplex inv = c.inverse();
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
}

RatForm RatForm::operator+(const RatForm& o) const {
  RatForm r;
  if (den == o.den) {
    r.num = num + o.num;
    r.den = den;
  } else {
    r.num = num * o.den + o.num * den;
    r.den = den * o.den;
  }
  r.normalize();
  return r;
}

RatForm RatForm::operator-() const {
  RatForm r{-num, den};
  return r;
}

RatForm RatForm::operator-(const RatForm& o) const { return *this + (-o); }

RatForm RatForm::operator*(const RatForm& o) const {
  RatForm r{num * o.num, den * o.den};
  r.normalize();
  return r;
}

RatForm RatForm::inverse() const {
  if (num.is_zero()) throw Error("RatForm: inverse of zero expression");
  RatForm r{den, num};
  r.normalize();
  return r;
}

namespace {

Monomial mono_pow_frac(const Monomial& m, const Rational& e) {
  Monomial out;
  for (const auto& [a, q] : m.powers) {
    Rational ne = q * e;
    if (ne == 0) continue;
    if (!is_integer(ne)) {
      bool ok = !a.is_coord && a.field->kind == FieldKind::Opaque && a.field->positive &&
                a.deriv.empty();
      if (!ok)
        throw Error("fractional power requires a designated positive field, got " + a.str());
    }
    out.powers.push_back({a, ne});
  }
  if (m.coeff.is_one()) {
    out.coeff = m.coeff;
    return out;
  }
  if (!m.coeff.is_real_rational())
    throw Error("fractional power of a non-rational coefficient");
  Rational base = m.coeff.re().rat_part();
  long p = rat_to_long(Rational(e.get_num()), "power numerator");
  unsigned long qden = static_cast<unsigned long>(rat_to_long(Rational(e.get_den()), "power denominator"));
  Rational powed = rational_pow(base, p);
  Rational root;
  if (!rational_root(powed, qden, root))
    throw Error("fractional power: coefficient " + base.get_str() + " has no exact root");
  out.coeff = ExactComplex(root);
  return out;
}

}  // namespace

RatForm RatForm::pow(const Rational& e) const {
  if (e == 0) {
    if (num.is_zero()) throw Error("RatForm: 0^0");
    return RatForm{Poly::constant(ExactComplex(1)), Poly::constant(ExactComplex(1))};
  }
  if (num.is_zero()) {
    if (e < 0) throw Error("RatForm: zero to negative power");
    return RatForm{};
  }
  if (is_integer(e)) {
    long n = rat_to_long(e, "power exponent");
    RatForm base = n < 0 ? inverse() : *this;
    unsigned long a = static_cast<unsigned long>(n < 0 ? -n : n);
    RatForm r{base.num.pow_uint(a), base.den.pow_uint(a)};
    r.normalize();
    return r;
  }
  if (!num.is_monomial() || !den.is_monomial())
    throw Error("fractional power requires a monomial expression");
  RatForm r{Poly::from_monomial(mono_pow_frac(num.leading(), e)),
            Poly::from_monomial(mono_pow_frac(den.leading(), e))};
  r.normalize();
  return r;
}

RatForm RatForm::diff(int coord) const {
  if (den.is_constant()) {
    // den is exactly 1 after normalization when constant.
    RatForm r{num.diff(coord), den};
    r.normalize();
    return r;
  }
  RatForm r{num.diff(coord) * den - num * den.diff(coord), den * den};
  r.normalize();
  return r;
}

bool RatForm::equals(const RatForm& o) const { return (num * o.den - o.num * den).is_zero(); }

std::complex<double> PolynomialField::eval(const std::vector<int>& deriv,
                                           const std::vector<double>& x) const {
  double acc = 0;
  for (const auto& t : terms_) {
    std::vector<int> exps = t.exps;
    double c = t.c;
    bool dead = false;
    for (int d : deriv) {
      if (static_cast<size_t>(d) >= exps.size() || exps[static_cast<size_t>(d)] == 0) { dead = true; break; }
      c *= exps[static_cast<size_t>(d)];
      exps[static_cast<size_t>(d)] -= 1;
    }
    if (dead) continue;
    double v = c;
    for (size_t i = 0; i < exps.size(); ++i)
      for (int k = 0; k < exps[i]; ++k) v *= (i < x.size() ? x[i] : 0.0);
    acc += v;
  }
  return acc;
}

std::complex<double> PolyGaussianField::eval(const std::vector<int>& deriv,
                                             const std::vector<double>& x) const {
  // Repeatedly apply d/dx_d (P * G) = (dP/dx_d - 2 c_d x_d P) * G.
  using Term = PolynomialField::Term;
  std::vector<Term> p = poly_;
  auto diff_poly = [&](const std::vector<Term>& terms, int d) {
    std::vector<Term> out;
    for (const auto& t : terms) {
      if (static_cast<size_t>(d) < t.exps.size() && t.exps[static_cast<size_t>(d)] > 0) {
        Term nt = t;
        nt.c *= t.exps[static_cast<size_t>(d)];
        nt.exps[static_cast<size_t>(d)] -= 1;
        out.push_back(std::move(nt));
      }
      double cg = static_cast<size_t>(d) < gauss_.size() ? gauss_[static_cast<size_t>(d)] : 0.0;
      if (cg != 0.0) {
        Term nt = t;
        nt.c *= -2.0 * cg;
        if (nt.exps.size() <= static_cast<size_t>(d)) nt.exps.resize(static_cast<size_t>(d) + 1, 0);
        nt.exps[static_cast<size_t>(d)] += 1;
        out.push_back(std::move(nt));
      }
    }
    return out;
  };
  for (int d : deriv) p = diff_poly(p, d);
  double pv = 0;
  for (const auto& t : p) {
    double v = t.c;
    for (size_t i = 0; i < t.exps.size(); ++i)
      for (int k = 0; k < t.exps[i]; ++k) v *= (i < x.size() ? x[i] : 0.0);
    pv += v;
  }
  double g = 0;
  for (size_t i = 0; i < gauss_.size(); ++i)
    g += gauss_[i] * (i < x.size() ? x[i] * x[i] : 0.0);
  return pv * std::exp(-g);
}

// ---------------------------------------------------------------------------
// Expression trees

struct SymExpr::Node {
  Kind kind;
  ExactComplex cval;
  int coord = -1;
  Atom atom;
  std::vector<SymExpr> kids;
  Rational exponent;
};

SymExpr::SymExpr() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n_ = std::move(n);
}

SymExpr SymExpr::constant(const Rational& q) {
  Rational canon = q;
  canon.canonicalize();
  return constant(ExactComplex(canon));
}

SymExpr SymExpr::constant(const ExactComplex& c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->cval = c;
  return SymExpr(std::move(n));
}

SymExpr SymExpr::coordinate(int i) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coordinate;
  n->coord = i;
  return SymExpr(std::move(n));
}

SymExpr SymExpr::field(FieldPtr f, std::vector<int> deriv) {
  return from_atom(Atom::field_atom(std::move(f), std::move(deriv)));
}

SymExpr SymExpr::from_atom(const Atom& a) {
  if (a.is_coord) return coordinate(a.coord);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Field;
  n->atom = a;
  return SymExpr(std::move(n));
}

SymExpr SymExpr::sum(std::vector<SymExpr> kids) {
  if (kids.empty()) return SymExpr();
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->kids = std::move(kids);
  return SymExpr(std::move(n));
}

SymExpr SymExpr::product(std::vector<SymExpr> kids) {
  if (kids.empty()) return constant(Rational(1));
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->kids = std::move(kids);
  return SymExpr(std::move(n));
}

SymExpr SymExpr::pow(const Rational& e) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->kids = {*this};
  n->exponent = e;
  n->exponent.canonicalize();  // mpq_class(a, b) does not reduce on its own
  return SymExpr(std::move(n));
}

SymExpr SymExpr::inv() const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inverse;
  n->kids = {*this};
  return SymExpr(std::move(n));
}

SymExpr SymExpr::operator-() const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->kids = {*this};
  return SymExpr(std::move(n));
}

SymExpr::Kind SymExpr::kind() const { return n_->kind; }

SymExpr operator+(const SymExpr& a, const SymExpr& b) { return SymExpr::sum({a, b}); }
SymExpr operator-(const SymExpr& a, const SymExpr& b) { return SymExpr::sum({a, -b}); }
SymExpr operator*(const SymExpr& a, const SymExpr& b) { return SymExpr::product({a, b}); }

bool SymExpr::structurally_equal(const SymExpr& o) const {
  if (n_ == o.n_) return true;
  if (n_->kind != o.n_->kind) return false;
  switch (n_->kind) {
    case Kind::Constant: return n_->cval == o.n_->cval;
    case Kind::Coordinate: return n_->coord == o.n_->coord;
    case Kind::Field: return n_->atom == o.n_->atom;
    case Kind::Power:
      if (!(n_->exponent == o.n_->exponent)) return false;
      [[fallthrough]];
    default: {
      if (n_->kids.size() != o.n_->kids.size()) return false;
      for (size_t i = 0; i < n_->kids.size(); ++i)
        if (!n_->kids[i].structurally_equal(o.n_->kids[i])) return false;
      return true;
    }
  }
}

RatForm SymExpr::to_ratform() const {
  switch (n_->kind) {
    case Kind::Constant: {
      RatForm r{Poly::constant(n_->cval), Poly::constant(ExactComplex(1))};
      return r;
    }
    case Kind::Coordinate: {
      Monomial m;
      m.coeff = ExactComplex(1);
      m.powers = {{Atom::coordinate(n_->coord), Rational(1)}};
      return RatForm{Poly::from_monomial(std::move(m)), Poly::constant(ExactComplex(1))};
    }
    case Kind::Field: {
      Monomial m;
      m.coeff = ExactComplex(1);
      m.powers = {{n_->atom, Rational(1)}};
      return RatForm{Poly::from_monomial(std::move(m)), Poly::constant(ExactComplex(1))};
    }
    case Kind::Sum: {
      RatForm acc{};
      acc.den = Poly::constant(ExactComplex(1));
      for (const auto& k : n_->kids) acc = acc + k.to_ratform();
      return acc;
    }
    case Kind::Product: {
      RatForm acc{Poly::constant(ExactComplex(1)), Poly::constant(ExactComplex(1))};
      for (const auto& k : n_->kids) acc = acc * k.to_ratform();
      return acc;
    }
    case Kind::Power: return n_->kids[0].to_ratform().pow(n_->exponent);
    case Kind::Negate: return -n_->kids[0].to_ratform();
    case Kind::Inverse: return n_->kids[0].to_ratform().inverse();
  }
  throw Error("SymExpr: bad node");
}

namespace {

SymExpr monomial_to_expr(const Monomial& m) {
  std::vector<SymExpr> kids;
  if (!m.coeff.is_one() || m.powers.empty()) kids.push_back(SymExpr::constant(m.coeff));
  for (const auto& [a, e] : m.powers) {
    SymExpr base = SymExpr::from_atom(a);
    kids.push_back(e == 1 ? base : base.pow(e));
  }
  return SymExpr::product(std::move(kids));
}

SymExpr poly_to_expr(const Poly& p) {
  if (p.is_zero()) return SymExpr::constant(Rational(0));
  std::vector<SymExpr> kids;
  kids.reserve(p.terms().size());
  for (const auto& t : p.terms()) kids.push_back(monomial_to_expr(t));
  return SymExpr::sum(std::move(kids));
}

bool poly_is_one(const Poly& p) {
  return p.is_monomial() && p.leading().powers.empty() && p.leading().coeff.is_one();
}

}  // namespace

SymExpr SymExpr::from_ratform(const RatForm& r) {
  SymExpr num = poly_to_expr(r.num);
  if (poly_is_one(r.den)) return num;
  SymExpr deninv = poly_to_expr(r.den).inv();
  if (r.num.is_monomial() && r.num.leading().powers.empty() && r.num.leading().coeff.is_one())
    return deninv;
  return SymExpr::product({num, deninv});
}

SymExpr SymExpr::normalized() const { return from_ratform(to_ratform()); }

bool SymExpr::is_zero() const { return to_ratform().is_zero(); }

bool SymExpr::equals(const SymExpr& o) const { return to_ratform().equals(o.to_ratform()); }

SymExpr SymExpr::diff(int coord) const { return from_ratform(to_ratform().diff(coord)); }

namespace {

std::complex<double> eval_atom(const Atom& a, const EvalContext& ctx) {
  if (a.is_coord) {
    if (static_cast<size_t>(a.coord) >= ctx.coords.size())
      throw EvaluationDomain("coordinate index out of range");
    return ctx.coords[static_cast<size_t>(a.coord)];
  }
  switch (a.field->kind) {
    case FieldKind::Sin:
      return std::sin(ctx.coords.at(static_cast<size_t>(a.field->coord)));
    case FieldKind::Cos:
      return std::cos(ctx.coords.at(static_cast<size_t>(a.field->coord)));
    case FieldKind::PlaneWave: {
      std::complex<double> ph = 0;
      for (size_t i = 0; i < a.field->wave_factor.size() && i < ctx.coords.size(); ++i)
        ph += a.field->wave_factor[i].to_complex() * ctx.coords[i];
      return std::exp(ph);
    }
    case FieldKind::Opaque: {
      auto it = ctx.fields.find(a.field->name);
      if (it == ctx.fields.end())
        throw EvaluationDomain("no numeric model bound for field '" + a.field->name + "'");
      return it->second->eval(a.deriv, ctx.coords);
    }
  }
  throw EvaluationDomain("bad atom");
}

std::complex<double> cpow(const std::complex<double>& base, const Rational& e) {
  if (is_integer(e)) {
    long n = rat_to_long(e, "eval exponent");
    if (n == 0) return 1.0;
    bool neg = n < 0;
    unsigned long a = static_cast<unsigned long>(neg ? -n : n);
    std::complex<double> acc = 1.0, b = base;
    while (a > 0) {
      if (a & 1) acc *= b;
      b *= b;
      a >>= 1;
    }
    if (neg) {
      if (acc == std::complex<double>(0.0)) throw EvaluationDomain("pole in evaluation");
      return 1.0 / acc;
    }
    return acc;
  }
  if (std::abs(base.imag()) > 1e-9 * (1.0 + std::abs(base.real())) || base.real() <= 0.0)
    throw EvaluationDomain("fractional power of a non-positive value");
  return std::pow(base.real(), e.get_d());
}

}  // namespace

std::complex<double> SymExpr::eval(const EvalContext& ctx) const {
  switch (n_->kind) {
    case Kind::Constant: return n_->cval.to_complex();
    case Kind::Coordinate: return eval_atom(Atom::coordinate(n_->coord), ctx);
    case Kind::Field: return eval_atom(n_->atom, ctx);
    case Kind::Sum: {
      std::complex<double> acc = 0;
      for (const auto& k : n_->kids) acc += k.eval(ctx);
      return acc;
    }
    case Kind::Product: {
      std::complex<double> acc = 1;
      for (const auto& k : n_->kids) acc *= k.eval(ctx);
      return acc;
    }
    case Kind::Power: return cpow(n_->kids[0].eval(ctx), n_->exponent);
    case Kind::Negate: return -n_->kids[0].eval(ctx);
    case Kind::Inverse: {
      std::complex<double> v = n_->kids[0].eval(ctx);
      if (v == std::complex<double>(0.0)) throw EvaluationDomain("pole in evaluation");
      return 1.0 / v;
    }
  }
  throw EvaluationDomain("bad node");
}

double SymExpr::eval_real(const EvalContext& ctx) const {
  std::complex<double> v = eval(ctx);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw EvaluationDomain("expression is not real at this point");
  return v.real();
}

// ---------------------------------------------------------------------------
// S-expression format (see docs/sexpr_grammar.md)

namespace {

std::string sqrt2_sexpr(const Sqrt2Ext& v) {
  if (v.is_rational()) return v.rat_part().get_str();
  return "(r2 " + v.rat_part().get_str() + " " + v.sqrt2_part().get_str() + ")";
}

std::string coeff_sexpr(const ExactComplex& c) {
  if (c.im().is_zero() && c.re().is_rational()) return c.re().rat_part().get_str();
  return "(c " + sqrt2_sexpr(c.re()) + " " + sqrt2_sexpr(c.im()) + ")";
}

std::string monomial_sexpr(const Monomial& m) {
  std::vector<std::string> parts;
  if (!m.coeff.is_one() || m.powers.empty()) parts.push_back(coeff_sexpr(m.coeff));
  for (const auto& [a, e] : m.powers) {
    if (e == 1) parts.push_back(a.str());
    else parts.push_back("(^ " + a.str() + " " + e.get_str() + ")");
  }
  if (parts.size() == 1) return parts[0];
  std::string s = "(*";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

std::string poly_sexpr(const Poly& p) {
  if (p.is_zero()) return "0";
  if (p.is_monomial()) return monomial_sexpr(p.leading());
  std::string s = "(+";
  for (const auto& t : p.terms()) s += " " + monomial_sexpr(t);
  return s + ")";
}

struct Tokenizer {
  std::string text;
  size_t pos = 0;
  std::optional<std::string> peeked;

  std::string next() {
    if (peeked) {
      std::string t = *peeked;
      peeked.reset();
      return t;
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) return "";
    if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return text.substr(start, pos - start);
  }
  std::string peek() {
    if (!peeked) peeked = next();
    return *peeked;
  }
};

Rational parse_rational(const std::string& tok) {
  try {
    Rational q(tok);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw Error("sexpr: bad rational '" + tok + "'");
  }
}

int parse_int(const std::string& tok) {
  return static_cast<int>(rat_to_long(parse_rational(tok), "sexpr integer"));
}

Sqrt2Ext parse_sqrt2(Tokenizer& tz) {
  std::string t = tz.next();
  if (t != "(") return Sqrt2Ext(parse_rational(t));
  std::string head = tz.next();
  if (head != "r2") throw Error("sexpr: expected r2, got '" + head + "'");
  Rational a = parse_rational(tz.next());
  Rational b = parse_rational(tz.next());
  if (tz.next() != ")") throw Error("sexpr: unterminated r2");
  return Sqrt2Ext(a, b);
}

SymExpr parse_expr(Tokenizer& tz, const std::map<std::string, FieldPtr>& fields);

SymExpr parse_list(Tokenizer& tz, const std::map<std::string, FieldPtr>& fields) {
  std::string head = tz.next();
  auto finish = [&tz](SymExpr e) {
    if (tz.next() != ")") throw Error("sexpr: missing ')'");
    return e;
  };
  if (head == "+") {
    std::vector<SymExpr> kids;
    while (tz.peek() != ")") kids.push_back(parse_expr(tz, fields));
    return finish(SymExpr::sum(std::move(kids)));
  }
  if (head == "*") {
    std::vector<SymExpr> kids;
    while (tz.peek() != ")") kids.push_back(parse_expr(tz, fields));
    return finish(SymExpr::product(std::move(kids)));
  }
  if (head == "^") {
    SymExpr base = parse_expr(tz, fields);
    Rational e = parse_rational(tz.next());
    return finish(base.pow(e));
  }
  if (head == "inv") return finish(parse_expr(tz, fields).inv());
  if (head == "neg") return finish(-parse_expr(tz, fields));
  if (head == "x") return finish(SymExpr::coordinate(parse_int(tz.next())));
  if (head == "sin") return finish(SymExpr::field(sin_field(parse_int(tz.next()))));
  if (head == "cos") return finish(SymExpr::field(cos_field(parse_int(tz.next()))));
  if (head == "c") {
    Sqrt2Ext re = parse_sqrt2(tz);
    Sqrt2Ext im = parse_sqrt2(tz);
    return finish(SymExpr::constant(ExactComplex(re, im)));
  }
  if (head == "pw") {
    std::string name = tz.next();
    auto it = fields.find(name);
    if (it == fields.end()) throw Error("sexpr: unknown plane-wave field '" + name + "'");
    return finish(SymExpr::field(it->second));
  }
  if (head == "f") {
    std::string name = tz.next();
    FieldPtr f;
    auto it = fields.find(name);
    f = it != fields.end() ? it->second : opaque_field(name);
    std::vector<int> deriv;
    if (tz.peek() == "d") {
      tz.next();
      while (tz.peek() != ")") deriv.push_back(parse_int(tz.next()));
    }
    return finish(SymExpr::field(std::move(f), std::move(deriv)));
  }
  throw Error("sexpr: unknown head '" + head + "'");
}

SymExpr parse_expr(Tokenizer& tz, const std::map<std::string, FieldPtr>& fields) {
  std::string t = tz.next();
  if (t.empty()) throw Error("sexpr: unexpected end of input");
  if (t == "(") return parse_list(tz, fields);
  if (t == ")") throw Error("sexpr: unexpected ')'");
  return SymExpr::constant(parse_rational(t));
}

}  // namespace

std::string SymExpr::sexpr() const {
  RatForm r = to_ratform();
  std::string num = poly_sexpr(r.num);
  if (poly_is_one(r.den)) return num;
  std::string den = "(inv " + poly_sexpr(r.den) + ")";
  if (num == "1") return den;
  return "(* " + num + " " + den + ")";
}

SymExpr SymExpr::parse_sexpr(const std::string& text,
                             const std::map<std::string, FieldPtr>& fields) {
  Tokenizer tz{text, 0, std::nullopt};
  SymExpr e = parse_expr(tz, fields);
  std::string rest = tz.next();
  if (!rest.empty()) throw Error("sexpr: trailing tokens after expression");
  return e;
}

}  // namespace qg5::sym
