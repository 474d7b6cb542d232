#include "kt/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kt::stokes {

void WBSector::validate() const {
  if (n == 0) throw std::invalid_argument("Weil-Brezin sector needs n != 0");
  if (m < 0 || m >= (n < 0 ? -n : n)) throw std::invalid_argument("Weil-Brezin sector needs 0 <= m < |n|");
}

PiPoly::PiPoly(GaussianRational c) { add(0, c); }

PiPoly::PiPoly(int power, GaussianRational c) { add(power, c); }

void PiPoly::add(int power, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(power, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GaussianRational PiPoly::coefficient(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? GaussianRational() : it->second;
}

std::complex<double> PiPoly::evaluate() const {
  std::complex<double> out = 0.0;
  for (const auto& [p, c] : terms_) {
    out += std::complex<double>(c.re().to_double(), c.im().to_double()) * std::pow(std::numbers::pi, p);
  }
  return out;
}

PiPoly PiPoly::real_part() const {
  PiPoly out;
  for (const auto& [p, c] : terms_) out.add(p, GaussianRational(c.re()));
  return out;
}

PiPoly PiPoly::imag_part() const {
  PiPoly out;
  for (const auto& [p, c] : terms_) out.add(p, GaussianRational(c.im()));
  return out;
}

PiPoly PiPoly::operator-() const {
  PiPoly out;
  for (const auto& [p, c] : terms_) out.terms_.emplace(p, -c);
  return out;
}

PiPoly& PiPoly::operator+=(const PiPoly& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

PiPoly& PiPoly::operator*=(const PiPoly& o) {
  PiPoly out;
  for (const auto& [pl, cl] : terms_) {
    for (const auto& [pr, cr] : o.terms_) out.add(pl + pr, cl * cr);
  }
  *this = std::move(out);
  return *this;
}

std::string PiPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += "(" + it->second.str() + ")";
    if (it->first == 1) out += "*pi";
    else if (it->first != 0) out += "*pi^" + std::to_string(it->first);
  }
  return out;
}

PiMatrix operator*(const PiMatrix& x, const PiMatrix& y) {
  PiMatrix out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  }
  return out;
}

ComplexMatrix evaluate(const PiMatrix& m) {
  ComplexMatrix out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = m[i][j].evaluate();
  }
  return out;
}

namespace {

Rational to_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }

}  // namespace

OdeSystem build_ode_system(const WBSector& sector, const Rational& a, const Rational& d, const Rational& rho_sqrt) {
  sector.validate();
  if (d.sign() <= 0) throw std::invalid_argument("d must be positive");
  if (rho_sqrt.sign() <= 0) throw std::invalid_argument("sqrt(rho) must be positive");
  const Rational rho = rho_sqrt * rho_sqrt;
  const Rational k = to_rational(sector.k), m = to_rational(sector.m), n = to_rational(sector.n);
  const GaussianRational a_minus_i(a, Rational(-1)), a_plus_i(a, Rational(1));
  // (a -+ i) n / b with b = 8 pi d, times 2 pi, is (a -+ i) n / (4d): pi-free.
  const GaussianRational shift_minus = a_minus_i * GaussianRational(n / (Rational(4) * d));
  const GaussianRational shift_plus = a_plus_i * GaussianRational(n / (Rational(4) * d));

  OdeSystem sys;
  sys.sector = sector;
  sys.A[0][1] = PiPoly(1, Rational(2) * n / rho);
  sys.A[1][0] = PiPoly(1, Rational(2) * n);
  sys.B[0][0] = PiPoly(1, Rational(2) * k);
  sys.B[0][1] = PiPoly(1, Rational(2) * m / rho) - PiPoly(shift_minus * GaussianRational(rho.inverse()));
  sys.B[1][0] = PiPoly(1, Rational(2) * m) - PiPoly(shift_plus);
  // 2 pi (i b/4pi - k) = pi (4 d i - 2k).
  sys.B[1][1] = PiPoly(1, GaussianRational(Rational(-2) * k, Rational(4) * d));
  return sys;
}

Diagonalization diagonalize(const OdeSystem& system, const Rational& rho_sqrt) {
  const Rational& r = rho_sqrt;
  const bool swap = system.sector.n < 0;
  const Rational sgn = swap ? Rational(-1) : Rational(1);
  // P = [[r, s], [r, -s]], P^-1 = [[1/2r, 1/2r], [1/2s, -1/2s]] with s = +-1.
  PiMatrix P{{{PiPoly(r), PiPoly(sgn)}, {PiPoly(r), PiPoly(-sgn)}}};
  const Rational half_r = (Rational(2) * r).inverse();
  const Rational half_s = sgn / Rational(2);
  PiMatrix P_inv{{{PiPoly(half_r), PiPoly(half_r)}, {PiPoly(half_s), PiPoly(-half_s)}}};

  Diagonalization out;
  out.conjugated_A = P * system.A * P_inv;
  if (!out.conjugated_A[0][1].is_zero() || !out.conjugated_A[1][0].is_zero()) {
    throw std::logic_error("P does not diagonalise A");
  }
  out.lambda1 = out.conjugated_A[0][0];
  out.lambda2 = out.conjugated_A[1][1];
  if (out.lambda1.evaluate().real() <= 0.0 || out.lambda2.evaluate().real() >= 0.0) {
    throw std::logic_error("eigenvalue ordering lambda1 > 0 > lambda2 violated");
  }
  PiMatrix PBP = P * system.B * P_inv;
  out.b1 = PBP[0][0];
  out.b2 = PBP[0][1];
  out.b3 = PBP[1][0];
  out.b4 = PBP[1][1];
  return out;
}

PiPoly b2b3_closed_form(const WBSector& sector, const Rational& d, const Rational& rho_sqrt) {
  const Rational rho = rho_sqrt * rho_sqrt;
  const Rational k = to_rational(sector.k), n = to_rational(sector.n);
  PiPoly out(n * n / (Rational(16) * d * d * rho));
  out += PiPoly(2, GaussianRational(Rational(4) * k * k - Rational(4) * d * d, Rational(-8) * d * k));
  return out;
}

TParam TParam::pi_multiple(Rational coefficient) {
  if (coefficient.sign() <= 0) throw std::invalid_argument("t must be positive");
  TParam t;
  t.mode_ = Mode::pi_rational;
  t.pi_coefficient_ = std::move(coefficient);
  return t;
}

TParam TParam::quadratic(QuadExt value) {
  if (quad_sign(value) <= 0) throw std::invalid_argument("t must be positive");
  TParam t;
  t.mode_ = Mode::quadratic;
  t.value_ = std::move(value);
  return t;
}

TParam TParam::from_structure(const Rational& d, const Rational& rho_sqrt) {
  return pi_multiple(Rational(8) * d * d * rho_sqrt);
}

double TParam::to_double() const {
  return mode_ == Mode::pi_rational ? pi_coefficient_.to_double() * std::numbers::pi : value_.to_double();
}

std::string TParam::str() const {
  return mode_ == Mode::pi_rational ? pi_coefficient_.str() + "*pi" : value_.str();
}

QuadExt solvability_ratio(const QuadExt& t, std::int64_t n) {
  if (n == 0) throw std::invalid_argument("n must be nonzero");
  const Rational nr = to_rational(n);
  const Rational abs_n = nr.abs();
  QuadExt numerator = QuadExt::rational(nr * nr, t.radicand()) - t * t;
  QuadExt denominator = t * Rational(8) * abs_n;
  return numerator / denominator;
}

std::optional<StokesCertificate> l2_solvable(const WBSector& sector, const TParam& t) {
  sector.validate();
  // Im(b2 b3) = -8 pi^2 d k while lambda1 - lambda2 is real.
  if (sector.k != 0) return std::nullopt;
  const std::int64_t abs_n = sector.n < 0 ? -sector.n : sector.n;
  if (t.mode() == TParam::Mode::pi_rational) {
    // t^2 + 8|n| u t - n^2 is a polynomial in pi whose pi^2 coefficient is
    // the square of t/pi, independent of u. A nonzero rational polynomial
    // cannot vanish at pi.
    PiPoly t_poly(1, t.pi_coefficient());
    PiPoly relation_leading = t_poly * t_poly;
    if (relation_leading.coefficient(2).is_zero()) throw std::logic_error("t must be nonzero");
    return std::nullopt;
  }
  QuadExt u = solvability_ratio(t.value(), sector.n);
  if (!quad_is_negative_integer(u)) return std::nullopt;
  return StokesCertificate{sector.n, u.x().numerator().get_si(), abs_n};
}

StokesCount h_double_prime(const TParam& t, std::int64_t nmax) {
  if (nmax < 1) throw std::invalid_argument("nmax must be at least 1");
  StokesCount out;
  for (std::int64_t abs_n = 1; abs_n <= nmax; ++abs_n) {
    for (std::int64_t n : {-abs_n, abs_n}) {
      // b2 b3 does not involve m, so one evaluation covers all |n| values of m.
      if (auto cert = l2_solvable({0, 0, n}, t)) {
        out.count += cert->multiplicity;
        out.certificates.push_back(*cert);
      }
    }
  }
  std::stable_sort(out.certificates.begin(), out.certificates.end(), [](const auto& x, const auto& y) {
    std::int64_t ax = x.n < 0 ? -x.n : x.n, ay = y.n < 0 ? -y.n : y.n;
    if (ax != ay) return ax < ay;
    if (x.n != y.n) return x.n < y.n;
    return x.u < y.u;
  });
  return out;
}

}  // namespace kt::stokes
