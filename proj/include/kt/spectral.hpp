#pragma once

// Floating-point oracle for the exact sector counts. Nothing here feeds back
// into exact results.
//
// Weil-Brezin sectors: the operator y -> y' - (Ax + B)y is discretised on
// scaled Hermite functions phi_j(x) = sqrt(kappa) psi_j(kappa x) with
// kappa = sqrt(2 pi) sigma. Multiplication by x and d/dx move phi_j only to
// phi_{j+-1}, so the first N functions map exactly into the first N + 1 and
// the singular values of the 2(N+1) x 2N matrix are the exact values of
// |Ly|/|y| on that subspace.

#include "kt/lattice.hpp"
#include "kt/stokes.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace kt::spectral {

using cd = std::complex<double>;
using CMatrix2 = std::array<std::array<cd, 2>, 2>;

inline constexpr std::int64_t kMinBasisSize = 8;

struct HermiteBasisConfig {
  std::int64_t size = 256;
  /// Scale sigma; 0 selects sqrt(lambda1 / 2pi), matching the Gaussian decay of A.
  double scale = 0.0;
  double threshold = 1e-8;  // relative to the largest singular value
  double gap = 1e3;
};

struct KernelResult {
  std::optional<std::int64_t> dim;  // absent: indeterminate
  std::string reason;               // why indeterminate
  std::vector<double> singular_values;  // ascending
  double epsilon = 0.0;                 // absolute threshold used
  double scale = 0.0;                   // sigma actually used
  std::int64_t size = 0;
  /// Right singular vectors for the reported kernel; coefficients of (F, G),
  /// each of length size.
  std::vector<std::vector<cd>> kernel;
};

/// Eigenvalues of A if they are real with lambda1 > 0 > lambda2.
std::optional<std::array<double, 2>> hyperbolic_spectrum(const CMatrix2& A);

/// Throws std::invalid_argument when A is not hyperbolic. Basis sizes below
/// kMinBasisSize and thresholds outside (0, 1) give an indeterminate result.
KernelResult ode_kernel_dim(const CMatrix2& A, const CMatrix2& B, const HermiteBasisConfig& cfg,
                            bool want_kernel = false);

/// Floating version of the sector system, built from the sector formulas directly.
struct OdeMatrices {
  CMatrix2 A;
  CMatrix2 B;
};
OdeMatrices ode_matrices(std::int64_t k, std::int64_t m, std::int64_t n, double a, double b, double rho);

/// Nullity of the toral 2x2 system: singular values below eps * largest.
int toral_nullity(const lattice::ToralSector& sector, double b, double rho, double eps = 1e-12);

/// Sum of toral_nullity over [-box, box]^3.
std::int64_t toral_nullity_scan(double b, double rho, std::int64_t box, double eps = 1e-12);

// Scaled Hermite functions.
double hermite_kappa(double sigma);
/// phi_0..phi_{count-1} and their derivatives at x.
void hermite_values(double x, double kappa, std::size_t count, std::vector<double>& value, std::vector<double>& deriv);

struct HermiteExpansion {
  std::vector<cd> coeffs;
  double sigma = 1.0;
  cd value(double x) const;
  cd derivative(double x) const;
};

struct WBValue {
  cd value;
  /// Sum of term moduli for truncation < |xi| <= truncation + 64; the terms
  /// decay like Gaussians so this dominates the neglected tail.
  double tail_estimate = 0.0;
};

/// Truncated series sum_{|xi| <= truncation} F(x + xi) e^{2 pi i (kt + (m + n xi) y + n z)}.
WBValue weil_brezin_evaluate(const HermiteExpansion& f, const stokes::WBSector& sector,
                             const std::array<double, 4>& point, std::int64_t truncation);

/// Largest |W(p) - W(g p)| over the grid, for the lattice generators
/// (t, x, y, z) -> (t+1, x, y, z), (t, x+1, y, z+y), (t, x, y+1, z), (t, x, y, z+1).
struct QuasiPeriodicity {
  double t_shift = 0.0;
  double x_shift = 0.0;
  double y_shift = 0.0;
  double z_shift = 0.0;
  double max() const;
};

struct GridSample {
  std::int64_t resolution = 4;  // per axis on [0,1)^4, >= 4
  std::vector<std::array<double, 4>> points() const;
};

QuasiPeriodicity quasi_periodicity_residual(const HermiteExpansion& f, const stokes::WBSector& sector,
                                            const GridSample& grid, std::int64_t truncation);

struct PdeParams {
  double a = 0.0;
  double b = 0.0;
  double rho = 1.0;
};

/// (f, g) = (F, G) e^{2 pi i (kt + lx + my)}.
struct ToralNumericSolution {
  lattice::ToralSector sector;
  cd f;
  cd g;
};

/// (f, g) = W_{k,m,n} applied to the expansions (F, G).
struct WBNumericSolution {
  stokes::WBSector sector;
  HermiteExpansion f;
  HermiteExpansion g;
  std::int64_t truncation = 12;
};

/// Max modulus over the grid of both harmonic equations, with the frame
/// e1 = d/dt, e2 = d/dx, e3 = d/dy + x d/dz, e4 = d/dz.
double pde_residual(const ToralNumericSolution& s, const PdeParams& p, const GridSample& grid);
double pde_residual(const WBNumericSolution& s, const PdeParams& p, const GridSample& grid);

/// Builds (F, G) expansions from a kernel vector of ode_kernel_dim.
WBNumericSolution wb_solution_from_kernel(const stokes::WBSector& sector, const std::vector<cd>& kernel_vector,
                                          double sigma, std::int64_t truncation = 12);

nlohmann::json to_json(const HermiteBasisConfig& cfg);
/// Keeps the smallest `max_values` singular values.
nlohmann::json to_json(const KernelResult& r, std::size_t max_values = 16);

}  // namespace kt::spectral
