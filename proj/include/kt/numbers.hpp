#pragma once

// Exact arithmetic: big rationals, Gaussian rationals and elements of a real
// quadratic field Q(sqrt(D)).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kt {

using Integer = mpz_class;

class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : value_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den);
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  explicit Rational(const Integer& v) : value_(v) {}
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  static Rational parse(std::string_view text);

  Integer numerator() const { return value_.get_num(); }
  Integer denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  double to_double() const { return value_.get_d(); }

  Rational abs() const { return Rational(mpq_class(::abs(value_))); }
  Rational inverse() const;
  Rational pow(int e) const;
  /// Largest integer <= value.
  Integer floor() const;
  Integer ceil() const;

  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  mpq_class value_;
};

/// Returns sqrt(q) when it is rational. Throws std::domain_error for q < 0.
std::optional<Rational> rational_is_perfect_square(const Rational& q);

/// Integer square root when n is a perfect square.
std::optional<Integer> integer_sqrt_exact(const Integer& n);

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(long re) : re_(re) {}                 // NOLINT(google-explicit-constructor)
  GaussianRational(int re) : re_(re) {}                  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

 private:
  Rational re_;
  Rational im_;
};

/// Squarefree part of a positive integer together with the square factor:
/// n = square^2 * squarefree.
struct SquarefreeSplit {
  Integer squarefree;
  Integer square;
};
SquarefreeSplit squarefree_split(const Integer& n);

/// x + y*sqrt(D) with D squarefree and positive. Elements with different D do
/// not mix; doing so throws std::invalid_argument.
class QuadExt {
 public:
  QuadExt() : d_(1) {}
  /// D need not be squarefree here: square factors are pulled into y.
  QuadExt(Rational x, Rational y, const Integer& radicand);
  static QuadExt rational(Rational x, const Integer& squarefree_d);

  /// Grammar: "p1/q1 + p2/q2*sqrt(D)", whitespace-insensitive; the leading
  /// rational and the coefficient of sqrt are optional.
  static QuadExt parse(std::string_view text);

  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }
  const Integer& radicand() const { return d_; }

  bool is_rational() const { return y_.is_zero(); }
  bool is_integer() const { return is_rational() && x_.is_integer(); }
  QuadExt conj() const { return QuadExt(x_, -y_, d_, Canonical{}); }
  /// Field norm x^2 - D y^2.
  Rational norm() const { return x_ * x_ - y_ * y_ * Rational(d_); }
  QuadExt inverse() const;
  double to_double() const;

  QuadExt operator-() const { return QuadExt(-x_, -y_, d_, Canonical{}); }
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o) { return *this *= o.inverse(); }
  QuadExt& operator+=(const Rational& q) { x_ += q; return *this; }
  QuadExt& operator*=(const Rational& q) { x_ *= q; y_ *= q; return *this; }

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }
  friend QuadExt operator*(QuadExt a, const Rational& q) { return a *= q; }
  friend QuadExt operator+(QuadExt a, const Rational& q) { return a += q; }

  friend bool operator==(const QuadExt&, const QuadExt&) = default;

  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const QuadExt& v) { return os << v.str(); }

 private:
  struct Canonical {};
  QuadExt(Rational x, Rational y, Integer d, Canonical)
      : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {}
  void require_same_field(const QuadExt& o) const;

  Rational x_;
  Rational y_;
  Integer d_;
};

/// Exact sign of x + y*sqrt(D).
int quad_sign(const QuadExt& v);

/// True iff v is a negative rational integer.
bool quad_is_negative_integer(const QuadExt& v);

}  // namespace kt

template <>
struct std::hash<kt::Rational> {
  size_t operator()(const kt::Rational& q) const {
    return std::hash<std::string>{}(q.str());
  }
};
