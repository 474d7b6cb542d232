#pragma once

// Toral (n = 0) Fourier sectors: each sector reduces harmonicity to a 2x2
// linear system; the sectors with a kernel are the points of Z x (1/sqrt(rho))Z
// on the circle of radius d centred at (d, 0), where d = b/8pi.

#include "kt/numbers.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kt::lattice {

struct ToralSector {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::int64_t m = 0;
  friend bool operator==(const ToralSector&, const ToralSector&) = default;
};

enum class PointKind { origin, antipode, interior };
std::string to_string(PointKind kind);
PointKind point_kind_from_string(const std::string& s);

struct LatticePoint {
  std::int64_t l = 0;
  std::int64_t m = 0;
  PointKind kind = PointKind::origin;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Kernel vector (f, g) of a sector system.
struct ToralSolution {
  ToralSector sector;
  GaussianRational f_coeff;
  GaussianRational g_coeff;
  friend bool operator==(const ToralSolution&, const ToralSolution&) = default;
};

using Matrix2 = std::array<std::array<GaussianRational, 2>, 2>;

/// Rows [-m, k + il - 2di] and [rho(k - il), m]; the sector solutions are its kernel.
/// Throws std::invalid_argument for rho <= 0.
Matrix2 toral_system_matrix(const ToralSector& sector, const Rational& d, const Rational& rho);

int kernel_dimension(const Matrix2& m);
std::array<GaussianRational, 2> apply(const Matrix2& m, const std::array<GaussianRational, 2>& v);

struct LatticeCount {
  std::int64_t h_prime = 0;
  std::vector<LatticePoint> points;       // sorted by (l, m)
  std::vector<ToralSolution> solutions;   // parallel to points
};

/// Counts harmonic toral solutions for d > 0 and sqrt(rho) > 0 given exactly.
LatticeCount count_lattice_solutions(const Rational& d, const Rational& rho_sqrt);
/// Same count from rho alone, for rational rho whose square root is irrational.
LatticeCount count_lattice_solutions_rho(const Rational& d, const Rational& rho);
/// For transcendental rho only the points with m = 0 can exist.
LatticeCount count_lattice_solutions_transcendental_rho(const Rational& d);

/// Smallest box that contains every solution sector and meets the scan
/// precondition box >= 2 ceil(2d).
std::int64_t sufficient_box(const Rational& d, const Rational& rho_sqrt);

/// Sums the kernel dimension of the sector system over (k, l, m) in
/// [-box, box]^3. Independent of count_lattice_solutions; used as its oracle.
std::int64_t brute_force_nullity_scan(const Rational& d, const Rational& rho_sqrt, std::int64_t box);

namespace detail {
/// Sector matrix with rows multiplied by den(d) and den(rho) so that all
/// entries are Gaussian integers. Entries are (re, im) pairs.
using GaussInt = std::array<__int128, 2>;
std::array<std::array<GaussInt, 2>, 2> scaled_toral_matrix(const ToralSector& s, std::int64_t d_num, std::int64_t d_den,
                                                           std::int64_t rho_num, std::int64_t rho_den);
}  // namespace detail

}  // namespace kt::lattice
