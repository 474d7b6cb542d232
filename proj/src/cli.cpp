#include "kt/cli.hpp"

#include "kt/exterior.hpp"
#include "kt/hodge.hpp"
#include "kt/report_io.hpp"
#include "kt/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace kt::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::string d, sqrt_rho, t, a = "0";
  std::int64_t nmax = kDefaultNmax;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f, bool require_d) {
  auto* d = cmd->add_option("--d", f.d, "d = b/(8 pi), rational p/q");
  if (require_d) d->required();
  auto* s = cmd->add_option("--sqrt-rho", f.sqrt_rho, "sqrt(rho), rational p/q");
  auto* t = cmd->add_option("--t", f.t, "t = 8 pi d^2 sqrt(rho) as \"p/q + r/s*sqrt(D)\"");
  s->excludes(t);
  cmd->add_option("--a", f.a, "a, rational p/q")->capture_default_str();
  cmd->add_option("--nmax", f.nmax, "largest |n| enumerated")->capture_default_str();
}

Rational parse_rational_flag(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("invalid value for " + flag + ": \"" + text + "\" (" + e.what() + ")");
  }
}

/// Syntax errors always throw; invalid values only when `validate` is set.
StructureParams build_params(const ParamFlags& f, bool validate = true) {
  if (f.sqrt_rho.empty() == f.t.empty()) throw UsageError("exactly one of --sqrt-rho and --t is required");
  StructureParams p;
  p.d = parse_rational_flag("--d", f.d);
  p.a = parse_rational_flag("--a", f.a);
  if (!f.t.empty()) {
    try {
      p.metric = QuadExt::parse(f.t);
    } catch (const std::exception& e) {
      throw UsageError("invalid value for --t: \"" + f.t + "\" (" + e.what() + ")");
    }
  } else {
    p.metric = parse_rational_flag("--sqrt-rho", f.sqrt_rho);
  }
  p.nmax = f.nmax;
  if (!validate) return p;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

/// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// ---------------------------------------------------------------- compute

int cmd_compute(const ParamFlags& flags, const std::string& format, const std::string& out_path, std::ostream& out) {
  StructureParams params = build_params(flags);
  HodgeReport report = compute_h01(params);
  Sink sink(out_path, out);
  if (format == "json") {
    *sink << io::report_to_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    *sink << io::csv_header() << '\n' << io::csv_row(params, &report, "") << '\n';
  } else {
    *sink << io::report_table(report);
  }
  return kSuccess;
}

// ---------------------------------------------------------------- sweep

StructureParams parse_grid_line(const std::string& line, std::size_t line_no) {
  CLI::App app;
  ParamFlags f;
  add_param_flags(&app, f, true);
  try {
    app.parse(line, false);
    return build_params(f, false);
  } catch (const CLI::ParseError& e) {
    throw UsageError("grid line " + std::to_string(line_no) + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError("grid line " + std::to_string(line_no) + ": " + e.what());
  }
}

/// Entries with invalid values still become rows; sweep records their errors.
std::vector<StructureParams> read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read grid file " + path);
  std::vector<StructureParams> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    rows.push_back(parse_grid_line(line, line_no));
  }
  return rows;
}

int cmd_sweep(const std::string& grid_path, const std::string& d_list, const std::string& rho_list,
              const std::string& a_text, std::int64_t nmax, const std::string& format, const std::string& out_path,
              std::ostream& out) {
  std::vector<StructureParams> grid;
  if (!grid_path.empty()) {
    grid = read_grid(grid_path);
  } else {
    // Everything is parsed before anything is computed.
    const Rational a = parse_rational_flag("--a", a_text);
    std::vector<Rational> ds, rs;
    for (const auto& s : split_list(d_list)) ds.push_back(parse_rational_flag("--d-list", s));
    for (const auto& s : split_list(rho_list)) rs.push_back(parse_rational_flag("--sqrt-rho-list", s));
    for (const auto& d : ds) {
      for (const auto& r : rs) {
        StructureParams p;
        p.a = a;
        p.d = d;
        p.metric = r;
        p.nmax = nmax;
        grid.push_back(p);
      }
    }
  }

  std::vector<SweepEntry> results = sweep(grid);

  Sink sink(out_path, out);
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].report) {
        arr.push_back(io::report_to_json(*results[i].report));
      } else {
        arr.push_back({{"params", io::params_to_json(grid[i])}, {"error", results[i].error}});
      }
    }
    *sink << arr.dump(2) << '\n';
  } else {
    *sink << io::csv_header() << '\n';
    for (std::size_t i = 0; i < results.size(); ++i) {
      const HodgeReport* report = results[i].report ? &*results[i].report : nullptr;
      *sink << io::csv_row(grid[i], report, results[i].error) << '\n';
    }
  }
  return kSuccess;
}

// ---------------------------------------------------------------- verify

enum class Verdict { pass, fail, indeterminate };

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::indeterminate: return "INDETERMINATE";
  }
  return "?";
}

struct Claim {
  std::string label;
  Verdict verdict = Verdict::fail;
  std::string detail;
  nlohmann::json diagnostics;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct VerifyOptions {
  std::int64_t basis_size = 256;
  double hermite_scale = 0.0;
  double threshold = 1e-8;
};

constexpr double kResidualTolerance = 1e-8;

std::vector<Claim> verify_claims(const HodgeReport& report, const VerifyOptions& opt) {
  constexpr double pi = std::numbers::pi;
  const StructureParams& p = report.params;
  const double d = p.d.to_double();
  const double b = 8.0 * pi * d;
  const double sqrt_rho = p.quadratic_mode() ? p.t().to_double() / (8.0 * pi * d * d) : p.sqrt_rho().to_double();
  const double rho = sqrt_rho * sqrt_rho;
  const double a = p.a.to_double();
  const spectral::PdeParams pde{a, b, rho};
  const spectral::GridSample grid{4};

  std::vector<Claim> claims;

  // Toral sectors: each lattice point is a one-dimensional kernel, and the
  // exact kernel vector solves the harmonic equations on the manifold.
  for (const auto& pt : report.lattice_points) {
    lattice::ToralSector sector{0, pt.l, pt.m};
    Claim c;
    c.label = "toral l=" + std::to_string(pt.l) + " m=" + std::to_string(pt.m) + " (" + lattice::to_string(pt.kind) + ")";
    const int nullity = spectral::toral_nullity(sector, b, rho);
    spectral::cd f = 0.0, g = 0.0;
    switch (pt.kind) {
      case lattice::PointKind::origin: f = 1.0; break;
      case lattice::PointKind::antipode: g = 1.0; break;
      case lattice::PointKind::interior:
        f = static_cast<double>(pt.m);
        g = spectral::cd(0.0, rho * static_cast<double>(pt.l));
        break;
    }
    const double scale = std::max({1.0, std::abs(f), std::abs(g)}) * std::max(1.0, rho) * (1.0 + b);
    const double residual = spectral::pde_residual(spectral::ToralNumericSolution{sector, f, g}, pde, grid) / scale;
    c.verdict = (nullity == 1 && residual < kResidualTolerance) ? Verdict::pass : Verdict::fail;
    c.detail = "nullity " + std::to_string(nullity) + ", relative residual " + sci(residual);
    c.diagnostics = {{"nullity", nullity}, {"relative_residual", residual}};
    claims.push_back(std::move(c));
  }

  // Toral scan: no further sector within the sufficient box has a kernel.
  {
    const auto box = static_cast<std::int64_t>(
        std::max(2.0 * std::ceil(2.0 * d), std::ceil(sqrt_rho * d)));
    const std::int64_t total = spectral::toral_nullity_scan(b, rho, box);
    Claim c;
    c.label = "toral scan box=" + std::to_string(box);
    c.verdict = total == report.h_prime ? Verdict::pass : Verdict::fail;
    c.detail = "floating nullity total " + std::to_string(total) + ", exact h' " + std::to_string(report.h_prime);
    c.diagnostics = {{"box", box}, {"total", total}};
    claims.push_back(std::move(c));
  }

  spectral::HermiteBasisConfig cfg;
  cfg.size = opt.basis_size;
  cfg.scale = opt.hermite_scale;
  cfg.threshold = opt.threshold;

  auto wb_claim = [&](std::int64_t n, std::int64_t m, std::int64_t expected, const std::string& label) {
    auto M = spectral::ode_matrices(0, m, n, a, b, rho);
    auto r = spectral::ode_kernel_dim(M.A, M.B, cfg, expected > 0);
    Claim c;
    c.label = label;
    c.diagnostics = spectral::to_json(r);
    if (!r.dim) {
      c.verdict = Verdict::indeterminate;
      c.detail = r.reason;
      return c;
    }
    c.detail = "kernel dim " + std::to_string(*r.dim) + ", smallest singular value " + sci(r.singular_values[0]);
    c.verdict = *r.dim == expected ? Verdict::pass : Verdict::fail;
    if (c.verdict == Verdict::pass && expected > 0) {
      auto sol = spectral::wb_solution_from_kernel({0, m, n}, r.kernel[0], r.scale);
      const double residual = spectral::pde_residual(sol, pde, grid);
      c.detail += ", residual " + sci(residual);
      c.diagnostics["residual"] = residual;
      if (!(residual < kResidualTolerance)) c.verdict = Verdict::fail;
    }
    return c;
  };

  for (const auto& cert : report.stokes_certificates) {
    const std::int64_t abs_n = cert.n < 0 ? -cert.n : cert.n;
    for (std::int64_t m = 0; m < abs_n; ++m) {
      claims.push_back(wb_claim(cert.n, m, 1,
                                "stokes n=" + std::to_string(cert.n) + " m=" + std::to_string(m) +
                                    " u=" + std::to_string(cert.u)));
    }
  }

  // Absence for small |n| without a certificate.
  const std::int64_t reach = std::min<std::int64_t>(p.nmax, 3);
  for (std::int64_t abs_n = 1; abs_n <= reach; ++abs_n) {
    for (std::int64_t n : {-abs_n, abs_n}) {
      bool certified = false;
      for (const auto& cert : report.stokes_certificates) certified = certified || cert.n == n;
      if (!certified) claims.push_back(wb_claim(n, 0, 0, "no stokes solution n=" + std::to_string(n) + " m=0"));
    }
  }
  return claims;
}

int cmd_verify(const ParamFlags& flags, const VerifyOptions& opt, const std::string& format,
               const std::string& out_path, std::ostream& out) {
  StructureParams params = build_params(flags);
  HodgeReport report = compute_h01(params);
  std::vector<Claim> claims = verify_claims(report, opt);

  bool any_fail = false, any_indeterminate = false;
  for (const auto& c : claims) {
    any_fail = any_fail || c.verdict == Verdict::fail;
    any_indeterminate = any_indeterminate || c.verdict == Verdict::indeterminate;
  }

  Sink sink(out_path, out);
  if (format == "json") {
    nlohmann::json j;
    j["report"] = io::report_to_json(report);
    j["basis"] = {{"size", opt.basis_size}, {"scale", opt.hermite_scale}, {"threshold", opt.threshold}};
    j["claims"] = nlohmann::json::array();
    for (const auto& c : claims) {
      j["claims"].push_back(
          {{"label", c.label}, {"verdict", verdict_name(c.verdict)}, {"detail", c.detail}, {"diagnostics", c.diagnostics}});
    }
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "h' = " << report.h_prime << ", h'' = " << report.h_double_prime << ", h01 = " << report.h01 << '\n';
    for (const auto& c : claims) *sink << verdict_name(c.verdict) << "  " << c.label << ": " << c.detail << '\n';
  }
  if (any_fail) return kVerificationFailed;
  if (any_indeterminate) return kIndeterminate;
  return kSuccess;
}

// ---------------------------------------------------------------- derive

int cmd_derive(bool check_all, std::ostream& out) {
  using namespace exterior;
  const CoframeStructure standard = CoframeStructure::standard();
  const HarmonicDerivation tr = derive_harmonic_transcript(standard);
  const char* names[4] = {"φ¹", "φ²", "φ̄¹", "φ̄²"};

  out << "structure equations\n";
  for (int i = 0; i < 4; ++i) out << "  d" << names[i] << " = " << standard.d_generator(i).str() << '\n';
  out << "star\n";
  for (int i = 0; i < 4; ++i) out << "  *" << names[i] << " = " << hodge_star(Form::generator(i)).str() << '\n';
  out << "s = " << tr.s.str() << '\n';
  out << "*s = " << tr.star_s.str() << '\n';
  out << "∂̄s = " << tr.dbar_s.str() << '\n';
  out << "∂(*s) = " << tr.del_star_s.str() << '\n';
  out << "f-terms of ∂(*s): " << tr.f_term_from_dphi2.str() << " from dφ², " << tr.f_term_from_dphi2bar.str()
      << " from dφ̄², sum " << (tr.f_term_from_dphi2 + tr.f_term_from_dphi2bar).str() << '\n';
  out << "harmonic system\n";
  out << "  " << tr.system.dbar_equation.str() << " = 0\n";
  out << "  " << tr.system.del_star_equation.str() << " = 0\n";
  if (!check_all) return kSuccess;

  bool all = true;
  auto report = [&](const std::string& name, bool ok) {
    all = all && ok;
    out << name << ' ' << (ok ? "PASS" : "FAIL") << '\n';
  };

  out << "checks\n";
  report("∂̄-equation: −V̄₂(f) + V̄₁(g) + (b/4)g = 0", tr.system.dbar_equation.str() == "−V̄₂(f) + V̄₁(g) + (b/4)g");
  report("∂*-equation: ρV₁(f) + V₂(g) = 0", tr.system.del_star_equation.str() == "ρV₁(f) + V₂(g)");
  report("f-terms cancel", (tr.f_term_from_dphi2 + tr.f_term_from_dphi2bar).is_zero() &&
                               !tr.f_term_from_dphi2.is_zero());

  const ScalarExpr b4 = ScalarExpr(GaussianRational(Rational(1, 4))) * ScalarExpr::b();
  const Form dphi2 =
      b4 * (phi({kPhi1, kPhi2}) + phi({kPhi1, kPhi2Bar}) + phi({kPhi2, kPhi1Bar}) - phi({kPhi1Bar, kPhi2Bar}));
  report("dφ² = (b/4)(φ^{12} + φ^{12̄} + φ^{21̄} − φ^{1̄2̄})", exterior_d(Form::generator(kPhi2)) == dphi2);
  report("de⁴ = −e²∧e³ in the φ-basis", exterior_d(to_phi(e({4}))) == to_phi(-e({2, 3})));

  bool dd = true;
  for (int mask = 0; mask < 16; ++mask) {
    dd = dd && exterior_d(exterior_d(Form(static_cast<std::uint8_t>(mask), 1))).is_zero();
    dd = dd && exterior_d(exterior_d(RealFrameForm(static_cast<std::uint8_t>(mask), 1))).is_zero();
  }
  report("d∘d = 0", dd);
  report("dω = 0", check_almost_kahler(standard));
  report("*φ̄¹ = ρφ^{21̄2̄}", hodge_star(Form::generator(kPhi1Bar)) == ScalarExpr::rho() * phi({kPhi2, kPhi1Bar, kPhi2Bar}));
  report("*φ̄² = −φ^{11̄2̄}", hodge_star(Form::generator(kPhi2Bar)) == -phi({kPhi1, kPhi1Bar, kPhi2Bar}));
  bool star_star = true;
  for (int mask = 0; mask < 16; ++mask) {
    Form x(static_cast<std::uint8_t>(mask), 1);
    const int k = std::popcount(static_cast<unsigned>(mask));
    star_star = star_star && hodge_star(hodge_star(x)) == ((k * (4 - k)) % 2 ? -x : x);
  }
  report("** = (−1)^{k(4−k)}", star_star);
  report("*(1) = ρφ^{121̄2̄}", hodge_star(Form::scalar(1)) == volume_form());
  return all ? kSuccess : kVerificationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dolbeault h^{0,1} of the Kodaira-Thurston family", "kt-hodge"};
  app.require_subcommand(1);

  ParamFlags compute_flags, verify_flags;
  std::string compute_format = "table", compute_out;

  auto* compute = app.add_subcommand("compute", "exact h^{0,1} = h' + h''");
  add_param_flags(compute, compute_flags, true);
  compute->add_option("--format", compute_format)->check(CLI::IsMember({"table", "json", "csv"}))->capture_default_str();
  compute->add_option("--out", compute_out, "output file");

  std::string grid_path, d_list, rho_list, sweep_a = "0", sweep_format = "csv", sweep_out;
  std::int64_t sweep_nmax = kDefaultNmax;
  auto* sweep_cmd = app.add_subcommand("sweep", "h^{0,1} over a parameter grid");
  auto* grid_opt = sweep_cmd->add_option("--grid", grid_path, "file with one parameter set per line, flag syntax");
  auto* d_opt = sweep_cmd->add_option("--d-list", d_list, "comma-separated d values");
  auto* r_opt = sweep_cmd->add_option("--sqrt-rho-list", rho_list, "comma-separated sqrt(rho) values");
  grid_opt->excludes(d_opt)->excludes(r_opt);
  sweep_cmd->add_option("--a", sweep_a)->capture_default_str();
  sweep_cmd->add_option("--nmax", sweep_nmax)->capture_default_str();
  sweep_cmd->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output file");

  VerifyOptions vopt;
  std::string verify_format = "table", verify_out;
  auto* verify = app.add_subcommand("verify", "confirm every sector claim numerically");
  add_param_flags(verify, verify_flags, true);
  verify->add_option("--basis-size", vopt.basis_size, "Hermite functions per component")->capture_default_str();
  verify->add_option("--hermite-scale", vopt.hermite_scale, "Hermite scale sigma (0: automatic)")->capture_default_str();
  verify->add_option("--threshold", vopt.threshold, "kernel threshold relative to the largest singular value")
      ->capture_default_str();
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  verify->add_option("--out", verify_out, "output file");

  bool check_all = false;
  auto* derive = app.add_subcommand("derive", "symbolic derivation of the harmonic system");
  derive->add_flag("--check-all", check_all, "also check the structure and star identities");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  const bool d_list_given = d_opt->count() > 0 || r_opt->count() > 0;

  try {
    if (compute->parsed()) return cmd_compute(compute_flags, compute_format, compute_out, out);
    if (sweep_cmd->parsed()) {
      if (grid_path.empty() && !d_list_given) throw UsageError("sweep needs --grid or --d-list/--sqrt-rho-list");
      return cmd_sweep(grid_path, d_list, rho_list, sweep_a, sweep_nmax, sweep_format, sweep_out, out);
    }
    if (verify->parsed()) return cmd_verify(verify_flags, vopt, verify_format, verify_out, out);
    if (derive->parsed()) return cmd_derive(check_all, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace kt::cli
