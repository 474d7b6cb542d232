#include "kt/hodge.hpp"

#include <stdexcept>

namespace kt {

void StructureParams::validate() const {
  if (d.sign() <= 0) throw std::invalid_argument("d must be positive, got " + d.str());
  if (nmax < 1) throw std::invalid_argument("nmax must be at least 1");
  if (quadratic_mode()) {
    if (quad_sign(t()) <= 0) throw std::invalid_argument("t must be positive, got " + t().str());
  } else if (sqrt_rho().sign() <= 0) {
    throw std::invalid_argument("sqrt(rho) must be positive, got " + sqrt_rho().str());
  }
}

stokes::TParam StructureParams::t_param() const {
  if (quadratic_mode()) return stokes::TParam::quadratic(t());
  return stokes::TParam::from_structure(d, sqrt_rho());
}

HodgeReport compute_h01(const StructureParams& params) {
  params.validate();
  // a never enters: both sector conditions are a-free.
  lattice::LatticeCount toral = params.quadratic_mode()
                                    ? lattice::count_lattice_solutions_transcendental_rho(params.d)
                                    : lattice::count_lattice_solutions(params.d, params.sqrt_rho());
  stokes::StokesCount wb = stokes::h_double_prime(params.t_param(), params.nmax);

  HodgeReport report;
  report.params = params;
  report.h_prime = toral.h_prime;
  report.h_double_prime = wb.count;
  report.h01 = report.h_prime + report.h_double_prime;
  report.lattice_points = std::move(toral.points);
  report.stokes_certificates = std::move(wb.certificates);
  report.nmax_used = params.nmax;
  return report;
}

std::vector<SweepEntry> sweep(const std::vector<StructureParams>& grid) {
  std::vector<SweepEntry> out;
  out.reserve(grid.size());
  for (const auto& params : grid) {
    SweepEntry entry;
    try {
      entry.report = compute_h01(params);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace kt
