#include "qg5/exact.hpp"

#include "doctest.h"
#include "qg5/errors.hpp"
#include "qg5/matrix.hpp"
#include "qg5/rng.hpp"

using namespace qg5;

namespace {

Rational rand_rational(std::uint64_t seed, std::uint64_t idx, std::uint64_t slot) {
  long num = static_cast<long>(mix3(seed, idx, slot) % 2001) - 1000;
  long den = static_cast<long>(mix3(seed, idx, slot + 100) % 999) + 1;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Sqrt2Ext rand_sqrt2(std::uint64_t seed, std::uint64_t idx) {
  return Sqrt2Ext(rand_rational(seed, idx, 0), rand_rational(seed, idx, 1));
}

ExactComplex rand_complex(std::uint64_t seed, std::uint64_t idx) {
  return ExactComplex(rand_sqrt2(seed, 2 * idx), rand_sqrt2(seed, 2 * idx + 1));
}

}  // namespace

TEST_CASE("rational arithmetic is exact and canonical") {
  Rational q(6, 4);
  q.canonicalize();
  CHECK(q.get_num() == 3);
  CHECK(q.get_den() == 2);

  Rational r(5, -10);
  r.canonicalize();
  CHECK(r.get_den() > 0);  // denominator normalized positive
  CHECK(r == Rational(-1, 2));

  for (std::uint64_t i = 0; i < 300; ++i) {
    Rational a = rand_rational(11, i, 0), b = rand_rational(11, i, 7);
    CHECK((a + b) - b == a);
    if (b != 0) CHECK((a / b) * b == a);
  }
}

TEST_CASE("rational_pow and rational_root") {
  CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rational_pow(Rational(2, 3), -2) == Rational(9, 4));
  Rational out;
  CHECK(rational_root(Rational(27, 8), 3, out));
  CHECK(out == Rational(3, 2));
  CHECK(rational_root(Rational(-8), 3, out));
  CHECK(out == -2);
  CHECK_FALSE(rational_root(Rational(2), 2, out));
  CHECK_FALSE(rational_root(Rational(-4), 2, out));
}

TEST_CASE("Q(sqrt2) is a field") {
  Sqrt2Ext one(1);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Sqrt2Ext x = rand_sqrt2(23, i), y = rand_sqrt2(29, i);
    CHECK((x + y) - y == x);
    CHECK(x * y == y * x);
    if (!x.is_zero()) CHECK(x * x.inverse() == one);
  }
  CHECK(Sqrt2Ext::sqrt2() * Sqrt2Ext::sqrt2() == Sqrt2Ext(2));
  CHECK(Sqrt2Ext::inv_sqrt2() * Sqrt2Ext::sqrt2() == one);
  CHECK_THROWS_AS(Sqrt2Ext().inverse(), Error);
}

TEST_CASE("exact complex field ops") {
  ExactComplex i = ExactComplex::i();
  CHECK(i * i == ExactComplex(-1));
  CHECK(i.pow_int(4).is_one());
  for (std::uint64_t n = 0; n < 200; ++n) {
    ExactComplex a = rand_complex(31, n), b = rand_complex(37, n), c = rand_complex(41, n);
    CHECK((a + b) - b == a);
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) {
      CHECK((a * a.inverse()).is_one());
      CHECK(a.pow_int(-2) == (a * a).inverse());
    }
    CHECK((a * a.conj()).im().is_zero());  // |a|^2 real
  }
}

TEST_CASE("matrix product associativity and exact inverse") {
  auto rand_mat = [](std::uint64_t seed) {
    Mat4c m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m.at(r, c) = rand_complex(seed, static_cast<std::uint64_t>(4 * r + c));
    return m;
  };
  for (std::uint64_t s = 0; s < 20; ++s) {
    Mat4c a = rand_mat(100 + s), b = rand_mat(200 + s), c = rand_mat(300 + s);
    CHECK((a * b) * c == a * (b * c));
  }
  // I + strictly-upper-triangular is always invertible.
  for (std::uint64_t s = 0; s < 20; ++s) {
    Mat4c m = Mat4c::identity();
    for (int r = 0; r < 4; ++r)
      for (int c = r + 1; c < 4; ++c) m.at(r, c) = rand_complex(400 + s, static_cast<std::uint64_t>(4 * r + c));
    CHECK(m * m.inverse() == Mat4c::identity());
    CHECK(m.inverse() * m == Mat4c::identity());
  }
  Mat4c singular;  // rank 1
  singular.at(0, 0) = ExactComplex(1);
  singular.at(0, 1) = ExactComplex(2);
  CHECK_THROWS_AS(singular.inverse(), NotInvertible);
}

TEST_CASE("identity-part split") {
  Mat4c m = Mat4c::scalar(ExactComplex(Rational(5, 3)));
  auto s = m.as_scalar_identity();
  REQUIRE(s.has_value());
  CHECK(*s == ExactComplex(Rational(5, 3)));
  m.at(2, 1) = ExactComplex(1);
  CHECK_FALSE(m.as_scalar_identity().has_value());
  auto [sc, res] = m.identity_part();
  CHECK(sc == ExactComplex(Rational(5, 3)));
  CHECK(res.at(2, 1) == ExactComplex(1));
}
