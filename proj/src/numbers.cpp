#include "kt/numbers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace kt {

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s = strip_spaces(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(std::string_view(s).substr(0, slash));
  std::string_view den_text = std::string_view(s).substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw std::invalid_argument("signed denominator in '" + s + "'");
  }
  Integer den = parse_integer(den_text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(num, den);
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational");
  return Rational(mpq_class(1 / value_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero rational");
  value_ /= o.value_;
  return *this;
}

Rational Rational::pow(int e) const {
  Rational base = e < 0 ? inverse() : *this;
  unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.value_.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.value_.get_den_mpz_t(), n);
  return Rational(num, den);
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

std::string Rational::str() const { return value_.get_str(); }

std::optional<Integer> integer_sqrt_exact(const Integer& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Rational> rational_is_perfect_square(const Rational& q) {
  if (q.sign() < 0) throw std::domain_error("perfect-square test on negative rational " + q.str());
  auto num = integer_sqrt_exact(q.numerator());
  if (!num) return std::nullopt;
  auto den = integer_sqrt_exact(q.denominator());
  if (!den) return std::nullopt;
  return Rational(*num, *den);
}

GaussianRational GaussianRational::inverse() const {
  Rational n = norm();
  if (n.is_zero()) throw std::domain_error("inverse of zero Gaussian rational");
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::str() const {
  if (im_.is_zero()) return re_.str();
  std::string imag = (im_ == Rational(1)) ? "i" : (im_ == Rational(-1) ? "-i" : im_.str() + "i");
  if (re_.is_zero()) return imag;
  if (im_.sign() < 0) return re_.str() + " - " + imag.substr(1);
  return re_.str() + " + " + imag;
}

SquarefreeSplit squarefree_split(const Integer& n) {
  if (n <= 0) throw std::domain_error("squarefree_split needs a positive integer");
  Integer rest = n;
  Integer square = 1;
  Integer squarefree = 1;
  for (Integer p = 2; p * p <= rest; ++p) {
    int exponent = 0;
    while (rest % p == 0) {
      rest /= p;
      ++exponent;
    }
    for (int e = 0; e < exponent / 2; ++e) square *= p;
    if (exponent % 2 == 1) squarefree *= p;
  }
  squarefree *= rest;
  return {squarefree, square};
}

QuadExt::QuadExt(Rational x, Rational y, const Integer& radicand) {
  if (radicand <= 0) throw std::invalid_argument("QuadExt radicand must be positive");
  auto split = squarefree_split(radicand);
  x_ = std::move(x);
  y_ = std::move(y) * Rational(split.square);
  d_ = split.squarefree;
  if (d_ == 1) {
    x_ += y_;
    y_ = Rational(0);
  }
}

QuadExt QuadExt::rational(Rational x, const Integer& squarefree_d) {
  return QuadExt(std::move(x), Rational(0), squarefree_d);
}

QuadExt QuadExt::parse(std::string_view text) {
  std::string s = strip_spaces(text);
  auto pos = s.find("sqrt(");
  if (pos == std::string::npos) {
    throw std::invalid_argument("quadratic element needs a sqrt(D) term: '" + std::string(text) + "'");
  }
  auto close = s.find(')', pos);
  if (close == std::string::npos || close + 1 != s.size()) {
    throw std::invalid_argument("malformed sqrt(D) term in '" + std::string(text) + "'");
  }
  Integer radicand = parse_integer(std::string_view(s).substr(pos + 5, close - pos - 5));
  if (radicand <= 0) throw std::invalid_argument("sqrt radicand must be positive");

  // Everything before sqrt( is "[x](+|-)[y*]" or "[y*]".
  std::string head = s.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  // Split head at the last top-level sign that is not the very first char.
  size_t split = std::string::npos;
  for (size_t i = head.size(); i-- > 1;) {
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  }
  Rational x(0);
  std::string coeff = head;
  if (split != std::string::npos) {
    x = Rational::parse(head.substr(0, split));
    coeff = head.substr(split);
  }
  Rational y(1);
  if (coeff.empty() || coeff == "+") {
    y = Rational(1);
  } else if (coeff == "-") {
    y = Rational(-1);
  } else {
    y = Rational::parse(coeff);
  }
  return QuadExt(x, y, radicand);
}

void QuadExt::require_same_field(const QuadExt& o) const {
  if (d_ == o.d_) return;
  // A rational element lives in every field.
  if (o.y_.is_zero() || y_.is_zero()) return;
  throw std::invalid_argument("mixing Q(sqrt(" + d_.get_str() + ")) with Q(sqrt(" + o.d_.get_str() + "))");
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  require_same_field(o);
  if (y_.is_zero() && !o.y_.is_zero()) d_ = o.d_;
  x_ += o.x_;
  y_ += o.y_;
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) { return *this += -o; }

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  require_same_field(o);
  if (y_.is_zero() && !o.y_.is_zero()) d_ = o.d_;
  Rational x = x_ * o.x_ + y_ * o.y_ * Rational(d_);
  Rational y = x_ * o.y_ + y_ * o.x_;
  x_ = std::move(x);
  y_ = std::move(y);
  return *this;
}

QuadExt QuadExt::inverse() const {
  Rational n = norm();
  if (n.is_zero()) throw std::domain_error("inverse of zero quadratic element");
  return QuadExt(x_ / n, -y_ / n, d_, Canonical{});
}

double QuadExt::to_double() const {
  return x_.to_double() + y_.to_double() * std::sqrt(d_.get_d());
}

std::string QuadExt::str() const {
  std::string out = x_.str();
  if (y_.sign() < 0) {
    out += " - " + (-y_).str();
  } else {
    out += " + " + y_.str();
  }
  return out + "*sqrt(" + d_.get_str() + ")";
}

int quad_sign(const QuadExt& v) {
  int sx = v.x().sign();
  int sy = v.y().sign();
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // Opposite signs: compare x^2 with y^2 D.
  Rational diff = v.x() * v.x() - v.y() * v.y() * Rational(v.radicand());
  return diff.sign() * sx;
}

bool quad_is_negative_integer(const QuadExt& v) {
  return v.is_integer() && v.x().sign() < 0;
}

}  // namespace kt
