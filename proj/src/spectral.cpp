#include "kt/spectral.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kt::spectral {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

// Graph-norm weight: the operator grows like sqrt(j) on phi_j, so columns are
// scaled by 1/sqrt(j+1). This keeps the largest singular value bounded in N and
// the relative threshold meaningful; the kernel is unchanged.
double column_weight(Eigen::Index j) { return 1.0 / std::sqrt(static_cast<double>(j) + 1.0); }

cd cexp_2pi_i(double phase) {
  // Reduce first so large phases keep full precision.
  double r = phase - std::round(phase);
  return std::polar(1.0, 2.0 * kPi * r);
}

}  // namespace

std::optional<std::array<double, 2>> hyperbolic_spectrum(const CMatrix2& A) {
  cd tr = A[0][0] + A[1][1];
  cd det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  cd disc = std::sqrt(tr * tr - 4.0 * det);
  cd l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
  double scale = std::max({std::abs(l1), std::abs(l2), 1e-300});
  if (std::abs(l1.imag()) > 1e-12 * scale || std::abs(l2.imag()) > 1e-12 * scale) return std::nullopt;
  double a = std::max(l1.real(), l2.real()), b = std::min(l1.real(), l2.real());
  if (!(a > 0.0 && b < 0.0)) return std::nullopt;
  return std::array<double, 2>{a, b};
}

double hermite_kappa(double sigma) { return std::sqrt(2.0 * kPi) * sigma; }

KernelResult ode_kernel_dim(const CMatrix2& A, const CMatrix2& B, const HermiteBasisConfig& cfg, bool want_kernel) {
  auto spectrum = hyperbolic_spectrum(A);
  if (!spectrum) throw std::invalid_argument("A must have real eigenvalues lambda1 > 0 > lambda2");

  KernelResult out;
  out.size = cfg.size;
  out.scale = cfg.scale > 0.0 ? cfg.scale : std::sqrt((*spectrum)[0] / (2.0 * kPi));
  if (cfg.size < kMinBasisSize) {
    out.reason = "basis size " + std::to_string(cfg.size) + " below minimum " + std::to_string(kMinBasisSize);
    return out;
  }
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0) || !(cfg.gap > 1.0)) {
    out.reason = "threshold must lie in (0, 1) and gap must exceed 1";
    return out;
  }

  const auto N = static_cast<Eigen::Index>(cfg.size);
  const double kappa = hermite_kappa(out.scale);
  // Rows: component r in {F, G}, output index 0..N. Columns: component c, input index 0..N-1.
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2 * (N + 1), 2 * N);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      for (Eigen::Index j = 0; j < N; ++j) {
        const double jd = static_cast<double>(j);
        const double up = std::sqrt((jd + 1.0) / 2.0), down = std::sqrt(jd / 2.0);
        const Eigen::Index col = c * N + j;
        auto row = [&](Eigen::Index i) { return r * (N + 1) + i; };
        const double w = column_weight(j);
        cd diag = -B[r][c] * w;
        cd to_up = -A[r][c] * (w * up / kappa);
        cd to_down = -A[r][c] * (w * down / kappa);
        if (r == c) {
          to_up += -kappa * w * up;
          to_down += kappa * w * down;
        }
        L(row(j), col) += diag;
        L(row(j + 1), col) += to_up;
        if (j > 0) L(row(j - 1), col) += to_down;
      }
    }
  }

  const unsigned options = want_kernel ? static_cast<unsigned>(Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(L, options);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  std::reverse(out.singular_values.begin(), out.singular_values.end());

  const double sigma_max = out.singular_values.back();
  out.epsilon = cfg.threshold * sigma_max;
  std::int64_t dim = 0;
  while (dim < static_cast<std::int64_t>(out.singular_values.size()) &&
         out.singular_values[static_cast<size_t>(dim)] < out.epsilon) {
    ++dim;
  }
  if (dim < static_cast<std::int64_t>(out.singular_values.size()) &&
      out.singular_values[static_cast<size_t>(dim)] <= cfg.gap * out.epsilon) {
    out.reason = "no spectral gap: singular value " + std::to_string(out.singular_values[static_cast<size_t>(dim)]) +
                 " lies between epsilon and gap * epsilon";
    return out;
  }
  out.dim = dim;
  if (want_kernel) {
    const Eigen::MatrixXcd& V = svd.matrixV();
    for (std::int64_t i = 0; i < dim; ++i) {
      Eigen::Index column = V.cols() - 1 - static_cast<Eigen::Index>(i);
      Eigen::VectorXcd v = V.col(column);
      for (Eigen::Index r = 0; r < v.size(); ++r) v(r) *= column_weight(r % N);
      v.normalize();
      out.kernel.emplace_back(v.data(), v.data() + v.size());
    }
  }
  return out;
}

OdeMatrices ode_matrices(std::int64_t k, std::int64_t m, std::int64_t n, double a, double b, double rho) {
  if (n == 0) throw std::invalid_argument("n must be nonzero");
  if (!(rho > 0.0) || b == 0.0) throw std::invalid_argument("need rho > 0 and b != 0");
  const auto kd = static_cast<double>(k), md = static_cast<double>(m), nd = static_cast<double>(n);
  OdeMatrices out{};
  out.A = {{{0.0, 2.0 * kPi * nd / rho}, {2.0 * kPi * nd, 0.0}}};
  out.B[0][0] = 2.0 * kPi * kd;
  out.B[0][1] = 2.0 * kPi * (md - (a - kI) * nd / b) / rho;
  out.B[1][0] = 2.0 * kPi * (md - (a + kI) * nd / b);
  out.B[1][1] = 2.0 * kPi * (kI * b / (4.0 * kPi) - kd);
  return out;
}

int toral_nullity(const lattice::ToralSector& s, double b, double rho, double eps) {
  const auto k = static_cast<double>(s.k), l = static_cast<double>(s.l), m = static_cast<double>(s.m);
  const cd m00 = -m, m01 = cd(k, l - b / (4.0 * kPi));
  const cd m10 = rho * cd(k, -l), m11 = m;
  const double fro2 = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  if (fro2 == 0.0) return 2;
  const double det = std::abs(m00 * m11 - m01 * m10);
  // sigma_max^2 = (F + sqrt(F^2 - 4 det^2))/2 and sigma_min = det / sigma_max.
  const double sigma_max = std::sqrt((fro2 + std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det))) / 2.0);
  const double sigma_min = det / sigma_max;
  return sigma_min < eps * sigma_max ? 1 : 0;
}

std::int64_t toral_nullity_scan(double b, double rho, std::int64_t box, double eps) {
  std::int64_t total = 0;
  for (std::int64_t k = -box; k <= box; ++k) {
    for (std::int64_t l = -box; l <= box; ++l) {
      for (std::int64_t m = -box; m <= box; ++m) total += toral_nullity({k, l, m}, b, rho, eps);
    }
  }
  return total;
}

void hermite_values(double x, double kappa, std::size_t count, std::vector<double>& value, std::vector<double>& deriv) {
  value.assign(count + 1, 0.0);
  deriv.assign(count, 0.0);
  const double u = kappa * x;
  const double norm = std::sqrt(kappa);
  // psi_0 = pi^{-1/4} e^{-u^2/2}; psi_{j+1} = sqrt(2/(j+1)) u psi_j - sqrt(j/(j+1)) psi_{j-1}.
  value[0] = norm * std::pow(kPi, -0.25) * std::exp(-u * u / 2.0);
  if (count >= 1) value[1] = std::sqrt(2.0) * u * value[0];
  for (std::size_t j = 1; j + 1 <= count; ++j) {
    const auto jd = static_cast<double>(j);
    value[j + 1] = std::sqrt(2.0 / (jd + 1.0)) * u * value[j] - std::sqrt(jd / (jd + 1.0)) * value[j - 1];
  }
  for (std::size_t j = 0; j < count; ++j) {
    const auto jd = static_cast<double>(j);
    double down = j > 0 ? std::sqrt(jd / 2.0) * value[j - 1] : 0.0;
    deriv[j] = kappa * (down - std::sqrt((jd + 1.0) / 2.0) * value[j + 1]);
  }
  value.resize(count);
}

cd HermiteExpansion::value(double x) const {
  std::vector<double> v, dv;
  hermite_values(x, hermite_kappa(sigma), coeffs.size(), v, dv);
  cd out = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) out += coeffs[j] * v[j];
  return out;
}

cd HermiteExpansion::derivative(double x) const {
  std::vector<double> v, dv;
  hermite_values(x, hermite_kappa(sigma), coeffs.size(), v, dv);
  cd out = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) out += coeffs[j] * dv[j];
  return out;
}

namespace {

cd wb_phase(const stokes::WBSector& s, const std::array<double, 4>& p, std::int64_t xi) {
  const auto [t, x, y, z] = p;
  (void)x;
  const double phase = static_cast<double>(s.k) * t + static_cast<double>(s.m + s.n * xi) * y +
                       static_cast<double>(s.n) * z;
  return cexp_2pi_i(phase);
}

}  // namespace

WBValue weil_brezin_evaluate(const HermiteExpansion& f, const stokes::WBSector& sector,
                             const std::array<double, 4>& point, std::int64_t truncation) {
  if (truncation < 1) throw std::invalid_argument("truncation must be at least 1");
  WBValue out{0.0, 0.0};
  for (std::int64_t xi = -truncation; xi <= truncation; ++xi) {
    out.value += f.value(point[1] + static_cast<double>(xi)) * wb_phase(sector, point, xi);
  }
  for (std::int64_t xi = truncation + 1; xi <= truncation + 64; ++xi) {
    out.tail_estimate += std::abs(f.value(point[1] + static_cast<double>(xi)));
    out.tail_estimate += std::abs(f.value(point[1] - static_cast<double>(xi)));
  }
  return out;
}

double QuasiPeriodicity::max() const { return std::max({t_shift, x_shift, y_shift, z_shift}); }

std::vector<std::array<double, 4>> GridSample::points() const {
  if (resolution < 4) throw std::invalid_argument("grid resolution must be at least 4");
  std::vector<std::array<double, 4>> out;
  const auto r = static_cast<double>(resolution);
  for (std::int64_t i = 0; i < resolution; ++i) {
    for (std::int64_t j = 0; j < resolution; ++j) {
      for (std::int64_t k = 0; k < resolution; ++k) {
        for (std::int64_t l = 0; l < resolution; ++l) {
          out.push_back({static_cast<double>(i) / r, static_cast<double>(j) / r, static_cast<double>(k) / r,
                         static_cast<double>(l) / r});
        }
      }
    }
  }
  return out;
}

QuasiPeriodicity quasi_periodicity_residual(const HermiteExpansion& f, const stokes::WBSector& sector,
                                            const GridSample& grid, std::int64_t truncation) {
  QuasiPeriodicity out;
  for (const auto& p : grid.points()) {
    const auto [t, x, y, z] = p;
    const cd base = weil_brezin_evaluate(f, sector, p, truncation).value;
    auto diff = [&](const std::array<double, 4>& q) {
      return std::abs(base - weil_brezin_evaluate(f, sector, q, truncation).value);
    };
    out.t_shift = std::max(out.t_shift, diff({t + 1.0, x, y, z}));
    out.x_shift = std::max(out.x_shift, diff({t, x + 1.0, y, z + y}));
    out.y_shift = std::max(out.y_shift, diff({t, x, y + 1.0, z}));
    out.z_shift = std::max(out.z_shift, diff({t, x, y, z + 1.0}));
  }
  return out;
}

double pde_residual(const ToralNumericSolution& s, const PdeParams& p, const GridSample& grid) {
  const auto k = static_cast<double>(s.sector.k), l = static_cast<double>(s.sector.l),
             m = static_cast<double>(s.sector.m);
  // e1, e2, e3, e4 act on e^{2 pi i (kt + lx + my)} by 2 pi i (k, l, m, 0).
  const cd e1 = 2.0 * kPi * kI * k, e2 = 2.0 * kPi * kI * l, e3 = 2.0 * kPi * kI * m, e4 = 0.0;
  const cd v1 = 0.5 * (e1 - kI * e2), v1bar = 0.5 * (e1 + kI * e2);
  const cd v2 = 0.5 * (e3 - (p.a - kI) / p.b * e4), v2bar = 0.5 * (e3 - (p.a + kI) / p.b * e4);
  double out = 0.0;
  for (const auto& q : grid.points()) {
    const cd phase = cexp_2pi_i(k * q[0] + l * q[1] + m * q[2]);
    const cd f = s.f * phase, g = s.g * phase;
    const cd eq2 = -v2bar * f + v1bar * g + (p.b / 4.0) * g;
    const cd eq3 = p.rho * v1 * f + v2 * g;
    out = std::max({out, std::abs(eq2), std::abs(eq3)});
  }
  return out;
}

double pde_residual(const WBNumericSolution& s, const PdeParams& p, const GridSample& grid) {
  const auto k = static_cast<double>(s.sector.k), m = static_cast<double>(s.sector.m),
             n = static_cast<double>(s.sector.n);
  double out = 0.0;
  for (const auto& q : grid.points()) {
    cd eq2 = 0.0, eq3 = 0.0;
    for (std::int64_t xi = -s.truncation; xi <= s.truncation; ++xi) {
      const double X = q[1] + static_cast<double>(xi);
      const cd phase = wb_phase(s.sector, q, xi);
      const cd F = s.f.value(X), G = s.g.value(X);
      const cd dF = s.f.derivative(X), dG = s.g.derivative(X);
      // Frame derivatives of a single Weil-Brezin term h(X) e^{2 pi i (kt + (m + n xi) y + nz)}:
      // e1 -> 2 pi i k, e2 -> d/dX, e3 -> 2 pi i (m + nX), e4 -> 2 pi i n.
      auto e1 = [&](cd h) { return 2.0 * kPi * kI * k * h; };
      auto e3 = [&](cd h) { return 2.0 * kPi * kI * (m + n * X) * h; };
      auto e4 = [&](cd h) { return 2.0 * kPi * kI * n * h; };
      const cd v1f = 0.5 * (e1(F) - kI * dF);
      const cd v1bar_g = 0.5 * (e1(G) + kI * dG);
      const cd v2g = 0.5 * (e3(G) - (p.a - kI) / p.b * e4(G));
      const cd v2bar_f = 0.5 * (e3(F) - (p.a + kI) / p.b * e4(F));
      eq2 += (-v2bar_f + v1bar_g + (p.b / 4.0) * G) * phase;
      eq3 += (p.rho * v1f + v2g) * phase;
    }
    out = std::max({out, std::abs(eq2), std::abs(eq3)});
  }
  return out;
}

WBNumericSolution wb_solution_from_kernel(const stokes::WBSector& sector, const std::vector<cd>& kernel_vector,
                                          double sigma, std::int64_t truncation) {
  if (kernel_vector.size() % 2 != 0) throw std::invalid_argument("kernel vector must have even length");
  const std::size_t N = kernel_vector.size() / 2;
  WBNumericSolution out;
  out.sector = sector;
  out.truncation = truncation;
  out.f.sigma = out.g.sigma = sigma;
  out.f.coeffs.assign(kernel_vector.begin(), kernel_vector.begin() + static_cast<std::ptrdiff_t>(N));
  out.g.coeffs.assign(kernel_vector.begin() + static_cast<std::ptrdiff_t>(N), kernel_vector.end());
  return out;
}

nlohmann::json to_json(const HermiteBasisConfig& cfg) {
  return {{"size", cfg.size}, {"scale", cfg.scale}, {"threshold", cfg.threshold}, {"gap", cfg.gap}};
}

nlohmann::json to_json(const KernelResult& r, std::size_t max_values) {
  nlohmann::json j;
  j["dim"] = r.dim ? nlohmann::json(*r.dim) : nlohmann::json(nullptr);
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["size"] = r.size;
  j["scale"] = r.scale;
  j["epsilon"] = r.epsilon;
  const std::size_t count = std::min(max_values, r.singular_values.size());
  j["smallest_singular_values"] = std::vector<double>(r.singular_values.begin(), r.singular_values.begin() +
                                                                                      static_cast<std::ptrdiff_t>(count));
  if (!r.singular_values.empty()) j["largest_singular_value"] = r.singular_values.back();
  return j;
}

}  // namespace kt::spectral
