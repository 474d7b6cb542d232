#pragma once

// h^{0,1} = h' + h'': harmonic (0,1)-forms split into toral sectors (lattice
// points on a circle) and Weil-Brezin sectors (L^2 solvability of an ODE).

#include "kt/lattice.hpp"
#include "kt/numbers.hpp"
#include "kt/stokes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kt {

inline constexpr std::int64_t kDefaultNmax = 64;

/// Structure J_{a,b} with metric weight rho. b = 8 pi d. The metric is given
/// either by a rational sqrt(rho) or by t = 8 pi d^2 sqrt(rho) in a real
/// quadratic field (then sqrt(rho) = t/(8 pi d^2) is transcendental).
struct StructureParams {
  Rational a{0};
  Rational d{1};
  std::variant<Rational, QuadExt> metric{Rational(1)};
  std::int64_t nmax = kDefaultNmax;

  bool quadratic_mode() const { return std::holds_alternative<QuadExt>(metric); }
  const Rational& sqrt_rho() const { return std::get<Rational>(metric); }
  const QuadExt& t() const { return std::get<QuadExt>(metric); }
  /// Throws std::invalid_argument when d <= 0, the metric is not positive or nmax < 1.
  void validate() const;
  stokes::TParam t_param() const;

  friend bool operator==(const StructureParams&, const StructureParams&) = default;
};

struct HodgeReport {
  StructureParams params;
  std::int64_t h_prime = 0;
  std::int64_t h_double_prime = 0;
  std::int64_t h01 = 0;
  std::vector<lattice::LatticePoint> lattice_points;
  std::vector<stokes::StokesCertificate> stokes_certificates;
  std::int64_t nmax_used = 0;

  friend bool operator==(const HodgeReport&, const HodgeReport&) = default;
};

HodgeReport compute_h01(const StructureParams& params);

struct SweepEntry {
  std::optional<HodgeReport> report;
  std::string error;  // empty on success
};

/// Order-preserving; a failing entry records its error and the sweep continues.
std::vector<SweepEntry> sweep(const std::vector<StructureParams>& grid);

}  // namespace kt
