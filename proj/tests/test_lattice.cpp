#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kt/lattice.hpp"

#include <algorithm>
#include <random>

using namespace kt::lattice;
using kt::GaussianRational;
using kt::Rational;

namespace {

std::vector<std::pair<std::int64_t, std::int64_t>> coords(const LatticeCount& c) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& p : c.points) out.emplace_back(p.l, p.m);
  std::sort(out.begin(), out.end());
  return out;
}

Rational R(long p, long q = 1) { return Rational(p, q); }

}  // namespace

TEST_CASE("toral system matrix") {
  Matrix2 m = toral_system_matrix({0, 0, 0}, R(1), R(4));
  CHECK(m[0][0] == GaussianRational());
  CHECK(m[0][1] == GaussianRational(R(0), R(-2)));
  CHECK(m[1][0] == GaussianRational());
  CHECK(m[1][1] == GaussianRational());
  CHECK(kernel_dimension(m) == 1);
  CHECK(apply(m, {GaussianRational(1), GaussianRational()})[0].is_zero());

  // l = 2d: kernel spanned by (0, 1).
  Matrix2 anti = toral_system_matrix({0, 3, 0}, R(3, 2), R(5));
  CHECK(kernel_dimension(anti) == 1);
  auto img = apply(anti, {GaussianRational(), GaussianRational(1)});
  CHECK(img[0].is_zero());
  CHECK(img[1].is_zero());

  // det = m^2 + rho k^2 + rho l^2 - 2 d rho (l + k i) = 1 + 4 - 8i != 0.
  CHECK(kernel_dimension(toral_system_matrix({1, 0, 1}, R(1), R(4))) == 0);
  CHECK_THROWS_AS(toral_system_matrix({0, 0, 0}, R(1), R(0)), std::invalid_argument);
  CHECK_THROWS_AS(toral_system_matrix({0, 0, 0}, R(1), R(-1)), std::invalid_argument);
}

TEST_CASE("lattice counts") {
  auto c = count_lattice_solutions(R(1), R(2));
  CHECK(c.h_prime == 4);
  CHECK(coords(c) == std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 0}, {1, -2}, {1, 2}, {2, 0}});

  auto c2 = count_lattice_solutions(R(1), R(3, 2));
  CHECK(c2.h_prime == 2);
  CHECK(coords(c2) == std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 0}, {2, 0}});

  auto big = count_lattice_solutions(R(25, 2), R(1));
  CHECK(big.h_prime == 10);
  std::vector<std::int64_t> interior_l;
  for (const auto& p : big.points) {
    if (p.kind == PointKind::interior && p.m > 0) interior_l.push_back(p.l);
  }
  CHECK(interior_l == std::vector<std::int64_t>{5, 9, 16, 20});

  // 2d not an integer: no antipode.
  auto half = count_lattice_solutions(R(3, 4), R(1));
  CHECK(half.h_prime == 1);

  CHECK_THROWS_AS(count_lattice_solutions(R(0), R(1)), std::invalid_argument);
  CHECK_THROWS_AS(count_lattice_solutions(R(1), R(-1)), std::invalid_argument);
}

TEST_CASE("point kinds round-trip") {
  for (PointKind k : {PointKind::origin, PointKind::antipode, PointKind::interior}) {
    CHECK(point_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(point_kind_from_string("boundary"));
}

TEST_CASE("brute-force scan examples") {
  CHECK(brute_force_nullity_scan(R(1), R(2), 8) == 4);
  CHECK(brute_force_nullity_scan(R(1), R(3, 2), 8) == 2);
  CHECK(brute_force_nullity_scan(R(1, 2), R(7), 16) == 2);
  CHECK_THROWS(brute_force_nullity_scan(R(3), R(1), 5));
}

TEST_CASE("exact count agrees with brute force on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> v(1, 20);
  int checked = 0;
  while (checked < 50) {
    Rational d(v(rng), v(rng)), r(v(rng), v(rng));
    std::int64_t box = sufficient_box(d, r);
    auto c = count_lattice_solutions(d, r);
    INFO("d = " << d.str() << ", sqrt(rho) = " << r.str() << ", box = " << box);
    CHECK(brute_force_nullity_scan(d, r, box) == c.h_prime);
    ++checked;
  }
}

TEST_CASE("lattice invariants") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> v(1, 30);
  for (int i = 0; i < 300; ++i) {
    Rational d(v(rng), v(rng)), r(v(rng), v(rng));
    Rational rho = r * r;
    auto c = count_lattice_solutions(d, r);
    CHECK(c.h_prime >= 1);
    CHECK(c.h_prime == static_cast<std::int64_t>(c.points.size()));
    CHECK(c.points.size() == c.solutions.size());
    const bool antipode = (Rational(2) * d).is_integer();
    CHECK((c.h_prime - 1 - (antipode ? 1 : 0)) % 2 == 0);
    // Depends on rho only.
    CHECK(count_lattice_solutions(d, -r * Rational(-1)).h_prime == c.h_prime);
    CHECK(count_lattice_solutions_rho(d, rho).h_prime == c.h_prime);
    for (std::size_t j = 0; j < c.points.size(); ++j) {
      const auto& p = c.points[j];
      Rational l(static_cast<long>(p.l)), m(static_cast<long>(p.m));
      CHECK(m * m / rho + (l - d) * (l - d) == d * d);
      const auto& s = c.solutions[j];
      CHECK(s.sector.k == 0);
      CHECK(!(s.f_coeff.is_zero() && s.g_coeff.is_zero()));
      auto img = apply(toral_system_matrix(s.sector, d, rho), {s.f_coeff, s.g_coeff});
      CHECK(img[0].is_zero());
      CHECK(img[1].is_zero());
    }
  }
}

TEST_CASE("irrational sqrt(rho) via rho") {
  // rho = 2, d = 1: rho l(2 - l) = 2 at l = 1, not a square.
  CHECK(count_lattice_solutions_rho(R(1), R(2)).h_prime == 2);
  // rho = 3, d = 2: l = 1 gives 3*3 = 9, l = 3 gives 9 as well.
  auto c = count_lattice_solutions_rho(R(2), R(3));
  CHECK(c.h_prime == 6);
  CHECK(count_lattice_solutions_transcendental_rho(R(2)).h_prime == 2);
  CHECK(count_lattice_solutions_transcendental_rho(R(5, 4)).h_prime == 1);
}
