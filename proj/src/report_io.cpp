#include "kt/report_io.hpp"

#include <sstream>
#include <stdexcept>

namespace kt::io {

using nlohmann::json;

std::string metric_key(const StructureParams& p) { return p.quadratic_mode() ? "t" : "sqrt_rho"; }

std::string metric_string(const StructureParams& p) { return p.quadratic_mode() ? p.t().str() : p.sqrt_rho().str(); }

json params_to_json(const StructureParams& p) {
  json j;
  j["a"] = p.a.str();
  j["d"] = p.d.str();
  j[metric_key(p)] = metric_string(p);
  j["nmax"] = p.nmax;
  return j;
}

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::int64_t int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

StructureParams params_from_json(const json& j) {
  StructureParams p;
  p.a = Rational::parse(string_field(j, "a"));
  p.d = Rational::parse(string_field(j, "d"));
  const bool has_sqrt = j.contains("sqrt_rho"), has_t = j.contains("t");
  if (has_sqrt == has_t) throw std::invalid_argument("params need exactly one of \"sqrt_rho\" and \"t\"");
  if (has_t) p.metric = QuadExt::parse(string_field(j, "t"));
  else p.metric = Rational::parse(string_field(j, "sqrt_rho"));
  p.nmax = int_field(j, "nmax");
  return p;
}

json report_to_json(const HodgeReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_to_json(r.params);
  j["h_prime"] = r.h_prime;
  j["h_double_prime"] = r.h_double_prime;
  j["h01"] = r.h01;
  j["nmax_used"] = r.nmax_used;
  j["lattice_points"] = json::array();
  for (const auto& p : r.lattice_points) {
    j["lattice_points"].push_back({{"l", p.l}, {"m", p.m}, {"kind", lattice::to_string(p.kind)}});
  }
  j["stokes_certificates"] = json::array();
  for (const auto& c : r.stokes_certificates) {
    j["stokes_certificates"].push_back({{"n", c.n}, {"u", c.u}, {"multiplicity", c.multiplicity}});
  }
  return j;
}

HodgeReport report_from_json(const json& j) {
  if (int_field(j, "schema_version") != kSchemaVersion) throw std::invalid_argument("unsupported schema_version");
  HodgeReport r;
  r.params = params_from_json(field(j, "params"));
  r.h_prime = int_field(j, "h_prime");
  r.h_double_prime = int_field(j, "h_double_prime");
  r.h01 = int_field(j, "h01");
  r.nmax_used = j.contains("nmax_used") ? int_field(j, "nmax_used") : r.params.nmax;
  for (const auto& p : field(j, "lattice_points")) {
    r.lattice_points.push_back(
        {int_field(p, "l"), int_field(p, "m"), lattice::point_kind_from_string(string_field(p, "kind"))});
  }
  for (const auto& c : field(j, "stokes_certificates")) {
    r.stokes_certificates.push_back({int_field(c, "n"), int_field(c, "u"), int_field(c, "multiplicity")});
  }
  if (r.h01 != r.h_prime + r.h_double_prime) throw std::invalid_argument("h01 != h_prime + h_double_prime");
  return r;
}

std::string csv_header() {
  return "d,sqrt_rho_or_t,a,nmax,h_prime,h_double_prime,h01,n_lattice_points,n_certificates,error";
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_row(const StructureParams& p, const HodgeReport* report, const std::string& error) {
  std::ostringstream os;
  os << csv_quote(p.d.str()) << ',' << csv_quote(metric_string(p)) << ',' << csv_quote(p.a.str()) << ',' << p.nmax
     << ',';
  if (report != nullptr) {
    os << report->h_prime << ',' << report->h_double_prime << ',' << report->h01 << ','
       << report->lattice_points.size() << ',' << report->stokes_certificates.size() << ',';
  } else {
    os << ",,,,,";
  }
  os << csv_quote(error);
  return os.str();
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string report_table(const HodgeReport& r) {
  std::ostringstream os;
  os << "a        " << r.params.a.str() << '\n'
     << "d        " << r.params.d.str() << '\n'
     << (r.params.quadratic_mode() ? "t        " : "sqrt_rho ") << metric_string(r.params) << '\n'
     << "nmax     " << r.nmax_used << "\n\n"
     << "h'       " << r.h_prime << '\n'
     << "h''      " << r.h_double_prime << '\n'
     << "h01      " << r.h01 << "\n\n";
  os << "lattice points (" << r.lattice_points.size() << ")\n";
  for (const auto& p : r.lattice_points) {
    os << "  l=" << p.l << " m=" << p.m << "  " << lattice::to_string(p.kind) << '\n';
  }
  os << "stokes certificates (" << r.stokes_certificates.size() << ")\n";
  for (const auto& c : r.stokes_certificates) {
    os << "  n=" << c.n << " u=" << c.u << "  multiplicity " << c.multiplicity << '\n';
  }
  return os.str();
}

}  // namespace kt::io
