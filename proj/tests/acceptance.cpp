// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "kt/cli.hpp"
#include "kt/hodge.hpp"
#include "kt/lattice.hpp"
#include "kt/spectral.hpp"
#include "kt/stokes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using kt::QuadExt;
using kt::Rational;
using namespace kt::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(const char* name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && elapsed > limit_seconds) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "took %.2f s, limit %.0f s", elapsed, limit_seconds);
    o.fail(buf);
  }
  if (!o.ok) ++failures;
  std::printf("%s  %-28s %7.2f s  %s\n", o.ok ? "PASS" : "FAIL", name, elapsed, o.detail.c_str());
  std::fflush(stdout);
}

kt::StructureParams params(Rational d, Rational sqrt_rho, Rational a = Rational(0), std::int64_t nmax = 64) {
  kt::StructureParams p;
  p.a = a;
  p.d = d;
  p.metric = sqrt_rho;
  p.nmax = nmax;
  return p;
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(1, max_num), den(1, max_den);
  return Rational(num(rng), den(rng));
}

OdeMatrices wb_matrices(double d, double t, std::int64_t n, double a = 0.0) {
  const double sqrt_rho = t / (8.0 * kPi * d * d);
  return ode_matrices(0, 0, n, a, 8.0 * kPi * d, sqrt_rho * sqrt_rho);
}

HermiteBasisConfig basis(std::int64_t size) {
  HermiteBasisConfig c;
  c.size = size;
  return c;
}

}  // namespace

int main() {
  criterion("reference values", 1.0, [](Outcome& o) {
    for (int r : {1, 2, 3, 10}) {
      auto rep = kt::compute_h01(params(Rational(1), Rational(r)));
      if (rep.h01 != 4) o.fail("sqrt_rho=" + std::to_string(r) + " gave " + std::to_string(rep.h01));
    }
    for (auto [p, q] : {std::pair{1, 2}, {3, 2}, {5, 2}, {7, 3}}) {
      auto rep = kt::compute_h01(params(Rational(1), Rational(p, q)));
      if (rep.h01 != 2) o.fail("sqrt_rho=" + std::to_string(p) + "/" + std::to_string(q) + " gave " + std::to_string(rep.h01));
    }
    if (o.ok) o.detail = "h01 = 4 for integral, 2 for half-integral and 7/3";
  });

  criterion("derive --check-all", 1.0, [](Outcome& o) {
    std::ostringstream out, err;
    const int code = kt::cli::run_cli({"derive", "--check-all"}, out, err);
    const std::string text = out.str();
    if (code != 0) o.fail("exit " + std::to_string(code));
    if (text.find("FAIL") != std::string::npos) o.fail("a check failed");
    if (text.find("dω = 0 PASS") == std::string::npos) o.fail("closedness check missing");
    if (o.ok) o.detail = "all identities hold";
  });

  criterion("no Stokes sectors (rational)", 0, [](Outcome& o) {
    std::mt19937_64 rng(20261015);
    for (int i = 0; i < 20; ++i) {
      const Rational d = random_rational(rng, 30, 12), s = random_rational(rng, 30, 12);
      auto c = kt::stokes::h_double_prime(kt::stokes::TParam::from_structure(d, s), 1000);
      if (c.count != 0) o.fail("d=" + d.str() + " sqrt_rho=" + s.str() + " gave h''=" + std::to_string(c.count));
    }
    if (o.ok) o.detail = "h'' = 0 on 20 random pairs, nmax 1000";
  });

  criterion("quadratic certificate", 10.0, [](Outcome& o) {
    kt::StructureParams p;
    p.metric = QuadExt(4, 1, 17);
    p.nmax = 8;
    auto rep = kt::compute_h01(p);
    const std::vector<kt::stokes::StokesCertificate> expected{{-1, -1, 1}, {1, -1, 1}};
    if (rep.h_double_prime != 2 || rep.stokes_certificates != expected) o.fail("exact certificates differ");

    const double t = 4.0 + std::sqrt(17.0);
    auto m = wb_matrices(1.0, t, 1);
    auto r = ode_kernel_dim(m.A, m.B, basis(256));
    if (!r.dim || *r.dim != 1) o.fail("spectral kernel dimension is not 1");
    else if (!(r.singular_values[0] < 1e-6 && r.singular_values[1] > 1e-3)) o.fail("no clear singular value gap");

    auto mp = wb_matrices(1.0, 4.01 + std::sqrt(17.0), 1);
    auto rp = ode_kernel_dim(mp.A, mp.B, basis(256));
    if (!rp.dim || *rp.dim != 0) o.fail("perturbed instance is not kernel-free");
    if (o.ok) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "s0=%.1e s1=%.2f; perturbed s0=%.1e", r.singular_values[0], r.singular_values[1],
                    rp.singular_values[0]);
      o.detail = buf;
    }
  });

  criterion("toral count vs brute force", 30.0, [](Outcome& o) {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
      const Rational d = random_rational(rng, 10, 4), s = random_rational(rng, 10, 4);
      if (d > Rational(10) || s > Rational(10)) {
        --i;
        continue;
      }
      auto count = kt::lattice::count_lattice_solutions(d, s);
      auto brute = kt::lattice::brute_force_nullity_scan(d, s, kt::lattice::sufficient_box(d, s));
      if (count.h_prime != brute) o.fail("d=" + d.str() + " sqrt_rho=" + s.str());
      ++checked;
    }
    if (o.ok) o.detail = std::to_string(checked) + " instances agree";
  });

  criterion("interior lattice points", 0, [](Outcome& o) {
    auto rep = kt::compute_h01(params(Rational(25, 2), Rational(1)));
    if (rep.h_prime != 10) o.fail("h' = " + std::to_string(rep.h_prime));
    std::set<std::int64_t> interior;
    for (const auto& p : rep.lattice_points)
      if (p.kind == kt::lattice::PointKind::interior) interior.insert(p.l);
    if (interior != std::set<std::int64_t>{5, 9, 16, 20}) o.fail("interior l values differ");
    if (o.ok) o.detail = "h' = 10, interior l in {5, 9, 16, 20}";
  });

  criterion("independence of a", 0, [](Outcome& o) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
      auto base = params(random_rational(rng, 12, 4), random_rational(rng, 12, 4));
      auto ref = kt::compute_h01(base);
      for (const Rational& a : {Rational(1), Rational(-3), Rational(7, 2)}) {
        auto p = base;
        p.a = a;
        auto rep = kt::compute_h01(p);
        if (rep.h01 != ref.h01 || rep.lattice_points != ref.lattice_points ||
            rep.stokes_certificates != ref.stokes_certificates)
          o.fail("report changed with a for d=" + base.d.str());
      }
    }
    const double t = 4.0 + std::sqrt(17.0);
    for (double a : {0.0, 1.0, -3.0, 3.5}) {
      auto yes = wb_matrices(1.0, t, 1, a);
      auto no = wb_matrices(1.0, t * 1.03, 1, a);
      auto ry = ode_kernel_dim(yes.A, yes.B, basis(128));
      auto rn = ode_kernel_dim(no.A, no.B, basis(128));
      if (!ry.dim || *ry.dim != 1 || !rn.dim || *rn.dim != 0) o.fail("spectral dimension changed with a");
    }
    if (o.ok) o.detail = "reports and spectral dimensions unchanged";
  });

  criterion("Weil-Brezin quasi-periodicity", 0, [](Outcome& o) {
    GridSample grid{4};
    const HermiteExpansion expansions[] = {{{1.0, 0.0}, 1.0}, {{0.3, cd(0.0, -0.5), 0.2, 0.1}, 1.0}};
    double worst = 0.0;
    for (const auto& f : expansions) {
      for (const auto& sector : {kt::stokes::WBSector{0, 0, 1}, kt::stokes::WBSector{2, 1, -3}}) {
        worst = std::max(worst, quasi_periodicity_residual(f, sector, grid, 12).max());
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max residual %.1e", worst);
    if (!(worst < 1e-8)) o.fail(buf);
    else o.detail = buf;
  });

  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
