#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kt/numbers.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

using kt::GaussianRational;
using kt::Integer;
using kt::QuadExt;
using kt::Rational;

namespace {

Rational random_rational(std::mt19937_64& rng, long bound = 50) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  return Rational(num(rng), den(rng));
}

Rational random_nonzero_rational(std::mt19937_64& rng) {
  Rational q;
  do q = random_rational(rng); while (q.is_zero());
  return q;
}

GaussianRational random_gaussian(std::mt19937_64& rng) { return {random_rational(rng), random_rational(rng)}; }

QuadExt random_quad(std::mt19937_64& rng, long d) { return QuadExt(random_rational(rng), random_rational(rng), Integer(d)); }

}  // namespace

TEST_CASE("rationals are canonical") {
  Rational q(6, -4);
  CHECK(q.numerator() == -3);
  CHECK(q.denominator() == 2);
  CHECK(Rational::parse("-6/4") == q);
  CHECK(Rational::parse(" 7 ") == Rational(7));
  CHECK(q.str() == "-3/2");
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1/-2"));
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(7, 2).ceil() == 4);
}

TEST_CASE("rational_is_perfect_square") {
  CHECK(kt::rational_is_perfect_square(Rational(4)) == Rational(2));
  CHECK(kt::rational_is_perfect_square(Rational(9, 4)) == Rational(3, 2));
  CHECK_FALSE(kt::rational_is_perfect_square(Rational(2)).has_value());
  CHECK(kt::rational_is_perfect_square(Rational(0)) == Rational(0));
  CHECK_THROWS_AS(kt::rational_is_perfect_square(Rational(-1)), std::domain_error);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Rational q = random_rational(rng, 1000).abs();
    CHECK(kt::rational_is_perfect_square(q * q) == q);
  }
}

TEST_CASE("quad_sign examples") {
  CHECK(kt::quad_sign(QuadExt(0, 0, 17)) == 0);
  CHECK(kt::quad_sign(QuadExt(4, 1, 17)) == 1);
  CHECK(kt::quad_sign(QuadExt(4, -1, 17)) == -1);
  CHECK(kt::quad_sign(QuadExt(-5, 1, 17)) == -1);
  CHECK(kt::quad_sign(QuadExt(-4, 1, 17)) == 1);
}

TEST_CASE("quad_is_negative_integer") {
  CHECK(kt::quad_is_negative_integer(QuadExt(-1, 0, 17)));
  CHECK_FALSE(kt::quad_is_negative_integer(QuadExt(Rational(-1, 2), 0, 17)));
  CHECK_FALSE(kt::quad_is_negative_integer(QuadExt(-1, Rational(1, 3), 17)));
  CHECK_FALSE(kt::quad_is_negative_integer(QuadExt(0, 0, 17)));
  CHECK_FALSE(kt::quad_is_negative_integer(QuadExt(3, 0, 17)));
}

TEST_CASE("quadratic radicands are normalised squarefree") {
  QuadExt v(1, 1, 68);
  CHECK(v.radicand() == 17);
  CHECK(v.y() == Rational(2));
  QuadExt w(1, 3, 9);
  CHECK(w.is_rational());
  CHECK(w.x() == Rational(10));
  CHECK(kt::squarefree_split(Integer(360)).squarefree == 10);
  CHECK(kt::squarefree_split(Integer(360)).square == 6);
  CHECK_THROWS_AS(QuadExt(1, 1, 2) + QuadExt(1, 1, 3), std::invalid_argument);
}

TEST_CASE("quadratic parsing and printing round-trip") {
  CHECK(QuadExt::parse("4+1*sqrt(17)") == QuadExt(4, 1, 17));
  CHECK(QuadExt::parse(" 1/2 - 3/4 * sqrt( 5 ) ") == QuadExt(Rational(1, 2), Rational(-3, 4), 5));
  CHECK(QuadExt::parse("sqrt(17)") == QuadExt(0, 1, 17));
  CHECK(QuadExt::parse("-sqrt(2)") == QuadExt(0, -1, 2));
  CHECK(QuadExt::parse("-2+sqrt(3)") == QuadExt(-2, 1, 3));
  CHECK(QuadExt(4, 1, 17).str() == "4 + 1*sqrt(17)");
  CHECK_THROWS(QuadExt::parse("4+1*sqrt(0)"));
  CHECK_THROWS(QuadExt::parse("4+1*sqrt(x)"));
  CHECK_THROWS(QuadExt::parse("4"));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    QuadExt v = random_quad(rng, 17);
    CHECK(QuadExt::parse(v.str()) == v);
    Rational q = random_rational(rng);
    CHECK(Rational::parse(q.str()) == q);
  }
}

TEST_CASE("field axioms hold on random elements") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Rational p = random_rational(rng), q = random_rational(rng), r = random_nonzero_rational(rng);
    CHECK((p + q) + r == p + (q + r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(r * r.inverse() == Rational(1));

    GaussianRational x = random_gaussian(rng), y = random_gaussian(rng), z = random_gaussian(rng);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x.conj().conj() == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
    if (!z.is_zero()) CHECK(z * z.inverse() == GaussianRational(1));

    QuadExt u = random_quad(rng, 17), v = random_quad(rng, 17), w = random_quad(rng, 17);
    CHECK((u * v) * w == u * (v * w));
    CHECK(u * (v + w) == u * v + u * w);
    if (kt::quad_sign(w) != 0) CHECK(w * w.inverse() == QuadExt(1, 0, 17));
  }
}

TEST_CASE("quad_sign matches 100-digit evaluation and is odd") {
  using Big = boost::multiprecision::cpp_dec_float_100;
  std::mt19937_64 rng(19);
  const long radicands[] = {2, 3, 5, 17, 1009};
  for (int i = 0; i < 1000; ++i) {
    long d = radicands[i % 5];
    // Include near-cancelling elements x ~ -y sqrt(D).
    QuadExt v = random_quad(rng, d);
    if (i % 3 == 0) {
      Rational y = random_nonzero_rational(rng);
      Big approx = Big(y.to_double()) * boost::multiprecision::sqrt(Big(d));
      Rational x(static_cast<long>(-approx.convert_to<double>() * 1000), 1000);
      v = QuadExt(x, y, Integer(d));
    }
    Big x = Big(v.x().numerator().get_str()) / Big(v.x().denominator().get_str());
    Big y = Big(v.y().numerator().get_str()) / Big(v.y().denominator().get_str());
    Big value = x + y * boost::multiprecision::sqrt(Big(v.radicand().get_str()));
    int expected = value > 0 ? 1 : (value < 0 ? -1 : 0);
    CHECK(kt::quad_sign(v) == expected);
    if (expected != 0) CHECK(kt::quad_sign(v) * kt::quad_sign(-v) == -1);
  }
}
