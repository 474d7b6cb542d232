#pragma once

// Weil-Brezin (n != 0) sectors. Harmonicity in sector (k, m, n) is the system
// y' = (Ax + B) y on the line. It has a Schwartz solution iff, after
// diagonalising A with lambda1 > 0 > lambda2, the off-diagonal entries of the
// conjugated B satisfy b2 b3 in (lambda1 - lambda2) * Z^-.
//
// With b = 8 pi d every quantity is a Laurent polynomial in pi over the
// Gaussian rationals, and solvability depends on the single scalar
// t = 8 pi d^2 sqrt(rho): for k = 0 the condition reads
// t^2 + 8|n| u t - n^2 = 0 with u a negative integer.

#include "kt/numbers.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kt::stokes {

/// Sector label with n != 0 and 0 <= m < |n|.
struct WBSector {
  std::int64_t k = 0;
  std::int64_t m = 0;
  std::int64_t n = 1;

  /// Throws std::invalid_argument when the invariant fails.
  void validate() const;
  friend bool operator==(const WBSector&, const WBSector&) = default;
};

/// Finite Laurent polynomial in pi with Gaussian-rational coefficients. Since
/// pi is transcendental, such an expression vanishes iff every coefficient does.
class PiPoly {
 public:
  PiPoly() = default;
  PiPoly(GaussianRational c);  // NOLINT(google-explicit-constructor)
  PiPoly(int power, GaussianRational c);
  static PiPoly pi() { return PiPoly(1, 1); }

  GaussianRational coefficient(int power) const;
  const std::map<int, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::complex<double> evaluate() const;
  PiPoly real_part() const;
  PiPoly imag_part() const;

  PiPoly operator-() const;
  PiPoly& operator+=(const PiPoly& o);
  PiPoly& operator-=(const PiPoly& o) { return *this += -o; }
  PiPoly& operator*=(const PiPoly& o);
  friend PiPoly operator+(PiPoly x, const PiPoly& y) { return x += y; }
  friend PiPoly operator-(PiPoly x, const PiPoly& y) { return x -= y; }
  friend PiPoly operator*(PiPoly x, const PiPoly& y) { return x *= y; }
  friend bool operator==(const PiPoly&, const PiPoly&) = default;

  std::string str() const;

 private:
  void add(int power, const GaussianRational& c);
  std::map<int, GaussianRational> terms_;
};

using PiMatrix = std::array<std::array<PiPoly, 2>, 2>;
using ComplexMatrix = std::array<std::array<std::complex<double>, 2>, 2>;

PiMatrix operator*(const PiMatrix& x, const PiMatrix& y);
ComplexMatrix evaluate(const PiMatrix& m);

struct OdeSystem {
  WBSector sector;
  PiMatrix A;
  PiMatrix B;
};

/// A = 2 pi n [[0, 1/rho], [1, 0]],
/// B = 2 pi [[k, (m - (a - i)n/b)/rho], [m - (a + i)n/b, ib/4pi - k]], b = 8 pi d.
OdeSystem build_ode_system(const WBSector& sector, const Rational& a, const Rational& d, const Rational& rho_sqrt);

struct Diagonalization {
  PiPoly lambda1;  // > 0
  PiPoly lambda2;  // < 0
  PiMatrix conjugated_A;
  PiPoly b1, b2, b3, b4;
};

/// Conjugates by P = [[r, 1], [r, -1]] (rows swapped for n < 0 so that
/// lambda1 > 0 > lambda2), r = sqrt(rho).
Diagonalization diagonalize(const OdeSystem& system, const Rational& rho_sqrt);

/// n^2/(16 d^2 rho) + 4 pi^2 (k^2 - d^2) - 8 pi^2 d k i.
PiPoly b2b3_closed_form(const WBSector& sector, const Rational& d, const Rational& rho_sqrt);

/// t = 8 pi d^2 sqrt(rho): either a rational multiple of pi (rational sqrt(rho))
/// or an exact real quadratic number.
class TParam {
 public:
  enum class Mode { pi_rational, quadratic };

  static TParam pi_multiple(Rational coefficient);
  static TParam quadratic(QuadExt value);
  static TParam from_structure(const Rational& d, const Rational& rho_sqrt);

  Mode mode() const { return mode_; }
  const Rational& pi_coefficient() const { return pi_coefficient_; }
  const QuadExt& value() const { return value_; }
  double to_double() const;
  std::string str() const;

 private:
  Mode mode_ = Mode::pi_rational;
  Rational pi_coefficient_;
  QuadExt value_;
};

struct StokesCertificate {
  std::int64_t n = 0;
  std::int64_t u = 0;
  std::int64_t multiplicity = 0;
  friend bool operator==(const StokesCertificate&, const StokesCertificate&) = default;
};

/// u = (n^2 - t^2)/(8|n| t) in Q(sqrt(D)).
QuadExt solvability_ratio(const QuadExt& t, std::int64_t n);

std::optional<StokesCertificate> l2_solvable(const WBSector& sector, const TParam& t);

struct StokesCount {
  std::int64_t count = 0;
  std::vector<StokesCertificate> certificates;  // sorted by (|n|, n, u)
};

/// Sums |n| over the solvable n in {+-1, ..., +-nmax} with k = 0.
StokesCount h_double_prime(const TParam& t, std::int64_t nmax);

}  // namespace kt::stokes
