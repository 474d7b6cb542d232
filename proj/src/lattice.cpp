#include "kt/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace kt::lattice {

std::string to_string(PointKind kind) {
  switch (kind) {
    case PointKind::origin: return "origin";
    case PointKind::antipode: return "antipode";
    case PointKind::interior: return "interior";
  }
  return "?";
}

PointKind point_kind_from_string(const std::string& s) {
  if (s == "origin") return PointKind::origin;
  if (s == "antipode") return PointKind::antipode;
  if (s == "interior") return PointKind::interior;
  throw std::invalid_argument("unknown lattice point kind '" + s + "'");
}

Matrix2 toral_system_matrix(const ToralSector& s, const Rational& d, const Rational& rho) {
  if (rho.sign() <= 0) throw std::invalid_argument("rho must be positive");
  const Rational k(static_cast<long>(s.k)), l(static_cast<long>(s.l)), m(static_cast<long>(s.m));
  return {{
      {GaussianRational(-m), GaussianRational(k, l - Rational(2) * d)},
      {GaussianRational(rho * k, -(rho * l)), GaussianRational(m)},
  }};
}

int kernel_dimension(const Matrix2& m) {
  bool all_zero = m[0][0].is_zero() && m[0][1].is_zero() && m[1][0].is_zero() && m[1][1].is_zero();
  if (all_zero) return 2;
  GaussianRational det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return det.is_zero() ? 1 : 0;
}

std::array<GaussianRational, 2> apply(const Matrix2& m, const std::array<GaussianRational, 2>& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

namespace {

std::int64_t to_int64(const Integer& v, const char* what) {
  if (!v.fits_slong_p()) throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

LatticeCount count_from_rho(const Rational& d, const Rational& rho) {
  if (d.sign() <= 0) throw std::invalid_argument("d must be positive");
  if (rho.sign() <= 0) throw std::invalid_argument("rho must be positive");
  const Rational two_d = Rational(2) * d;
  LatticeCount out;
  auto push = [&](std::int64_t l, std::int64_t m, PointKind kind, GaussianRational f, GaussianRational g) {
    out.points.push_back({l, m, kind});
    out.solutions.push_back({{0, l, m}, std::move(f), std::move(g)});
  };

  push(0, 0, PointKind::origin, 1, 0);
  const std::int64_t upper = to_int64(two_d.ceil(), "2d");
  for (std::int64_t l = 1; l < upper; ++l) {
    const Rational lr(static_cast<long>(l));
    Rational value = rho * lr * (two_d - lr);
    auto root = rational_is_perfect_square(value);
    if (!root || !root->is_integer()) continue;
    std::int64_t m = to_int64(root->numerator(), "m");
    const GaussianRational g(Rational(0), rho * lr);
    push(l, -m, PointKind::interior, GaussianRational(Rational(static_cast<long>(-m))), g);
    push(l, m, PointKind::interior, GaussianRational(Rational(static_cast<long>(m))), g);
  }
  if (two_d.is_integer()) push(upper, 0, PointKind::antipode, 0, 1);

  out.h_prime = static_cast<std::int64_t>(out.points.size());
  return out;
}

}  // namespace

LatticeCount count_lattice_solutions(const Rational& d, const Rational& rho_sqrt) {
  if (rho_sqrt.sign() <= 0) throw std::invalid_argument("sqrt(rho) must be positive");
  return count_from_rho(d, rho_sqrt * rho_sqrt);
}

LatticeCount count_lattice_solutions_rho(const Rational& d, const Rational& rho) { return count_from_rho(d, rho); }

LatticeCount count_lattice_solutions_transcendental_rho(const Rational& d) {
  if (d.sign() <= 0) throw std::invalid_argument("d must be positive");
  // m^2 = rho l (2d - l) with l(2d - l) != 0 would make rho rational.
  LatticeCount out;
  out.points.push_back({0, 0, PointKind::origin});
  out.solutions.push_back({{0, 0, 0}, 1, 0});
  const Rational two_d = Rational(2) * d;
  if (two_d.is_integer()) {
    std::int64_t l = to_int64(two_d.numerator(), "2d");
    out.points.push_back({l, 0, PointKind::antipode});
    out.solutions.push_back({{0, l, 0}, 0, 1});
  }
  out.h_prime = static_cast<std::int64_t>(out.points.size());
  return out;
}

std::int64_t sufficient_box(const Rational& d, const Rational& rho_sqrt) {
  std::int64_t by_l = 2 * to_int64((Rational(2) * d).ceil(), "2d");
  std::int64_t by_m = to_int64((rho_sqrt * d).ceil(), "sqrt(rho) d");
  return std::max(by_l, by_m);
}

namespace detail {

std::array<std::array<GaussInt, 2>, 2> scaled_toral_matrix(const ToralSector& s, std::int64_t d_num, std::int64_t d_den,
                                                           std::int64_t rho_num, std::int64_t rho_den) {
  const __int128 k = s.k, l = s.l, m = s.m;
  // Row 1 times den(d), row 2 times den(rho).
  return {{
      {GaussInt{-m * d_den, 0}, GaussInt{k * d_den, l * d_den - 2 * static_cast<__int128>(d_num)}},
      {GaussInt{rho_num * k, -rho_num * l}, GaussInt{m * rho_den, 0}},
  }};
}

}  // namespace detail

namespace {

detail::GaussInt mul(const detail::GaussInt& x, const detail::GaussInt& y) {
  return {x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]};
}

int scaled_kernel_dimension(const std::array<std::array<detail::GaussInt, 2>, 2>& mat) {
  bool all_zero = true;
  for (const auto& row : mat) {
    for (const auto& z : row) all_zero = all_zero && z[0] == 0 && z[1] == 0;
  }
  if (all_zero) return 2;
  auto p = mul(mat[0][0], mat[1][1]);
  auto q = mul(mat[0][1], mat[1][0]);
  return (p[0] == q[0] && p[1] == q[1]) ? 1 : 0;
}

}  // namespace

std::int64_t brute_force_nullity_scan(const Rational& d, const Rational& rho_sqrt, std::int64_t box) {
  if (d.sign() <= 0 || rho_sqrt.sign() <= 0) throw std::invalid_argument("d and sqrt(rho) must be positive");
  if (box < 2 * to_int64((Rational(2) * d).ceil(), "2d")) throw std::invalid_argument("box smaller than 2 ceil(2d)");
  const Rational rho = rho_sqrt * rho_sqrt;
  const std::int64_t d_num = to_int64(d.numerator(), "num(d)");
  const std::int64_t d_den = to_int64(d.denominator(), "den(d)");
  const std::int64_t rho_num = to_int64(rho.numerator(), "num(rho)");
  const std::int64_t rho_den = to_int64(rho.denominator(), "den(rho)");

  auto scan_k_range = [&](std::int64_t k_begin, std::int64_t k_end) {
    std::int64_t total = 0;
    for (std::int64_t k = k_begin; k < k_end; ++k) {
      for (std::int64_t l = -box; l <= box; ++l) {
        for (std::int64_t m = -box; m <= box; ++m) {
          total += scaled_kernel_dimension(detail::scaled_toral_matrix({k, l, m}, d_num, d_den, rho_num, rho_den));
        }
      }
    }
    return total;
  };

  const std::int64_t span = 2 * box + 1;
  const auto workers = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1 || span < 2 * workers) return scan_k_range(-box, box + 1);

  std::vector<std::int64_t> partial(static_cast<size_t>(workers), 0);
  {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < workers; ++w) {
      std::int64_t begin = -box + span * w / workers;
      std::int64_t end = -box + span * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { partial[static_cast<size_t>(w)] = scan_k_range(begin, end); });
    }
  }
  std::int64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

}  // namespace kt::lattice
