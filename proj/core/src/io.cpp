#include "xyep/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <regex>

#include <json.hpp>

#include "xyep/errors.hpp"

namespace xyep::io {

const char* version() { return XYEP_VERSION; }

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  static const std::string num = R"(([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+\.))";
  static const std::regex real_only("^([+-]?)" + num + "$");
  static const std::regex imag_only("^([+-]?)" + num + "?[ij]$");
  static const std::regex both("^([+-]?)" + num + "([+-])" + num + "?[ij]$");
  std::smatch m;
  auto mag = [](const std::ssub_match& g) { return g.matched ? std::stod(g.str()) : 1.0; };
  auto sgn = [](const std::ssub_match& g) { return g.str() == "-" ? -1.0 : 1.0; };
  if (std::regex_match(s, m, real_only)) return {sgn(m[1]) * mag(m[2]), 0.0};
  if (std::regex_match(s, m, imag_only)) return {0.0, sgn(m[1]) * mag(m[2])};
  if (std::regex_match(s, m, both)) return {sgn(m[1]) * mag(m[2]), sgn(m[3]) * mag(m[4])};
  throw Error(ErrorKind::InvalidConfig, "cannot parse complex literal '" + text + "'");
}

std::string format_real(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string format_complex(cplx z, int digits) {
  std::string im = format_real(std::abs(z.imag()), digits);
  return format_real(z.real(), digits) + (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

void write_header(std::ostream& os, const std::string& command, const ConfigEntries& config) {
  os << "# xyep " << version() << "\n# command = " << command << "\n";
  for (const auto& [k, v] : config) os << "# " << k << " = " << v << "\n";
}

void write_ep_table_csv(std::ostream& os, const std::vector<ep::EPRecord>& records) {
  os << "L,mode,re_gamma,im_gamma,re_epsilon,im_epsilon,boundary_residual\n";
  for (const auto& r : records)
    os << r.L << ',' << chain::mode_name(r.mode) << ',' << format_real(r.gamma_ep.real()) << ','
       << format_real(r.gamma_ep.imag()) << ',' << format_real(r.epsilon_ep.real()) << ','
       << format_real(r.epsilon_ep.imag()) << ',' << format_real(r.residuals.boundary) << '\n';
}

void write_overlap_csv(std::ostream& os, const topology::OverlapGrid& grid) {
  os << "re_gamma,im_gamma,re_overlap,im_overlap,abs_overlap\n";
  for (const auto& s : grid.samples)
    os << format_real(s.gamma.real()) << ',' << format_real(s.gamma.imag()) << ','
       << format_real(s.overlap.real()) << ',' << format_real(s.overlap.imag()) << ','
       << format_real(s.magnitude) << '\n';
}

void write_seam_csv(std::ostream& os, const std::vector<topology::SeamCell>& seam) {
  os << "i,j,re_gamma,im_gamma\n";
  for (const auto& c : seam)
    os << c.i << ',' << c.j << ',' << format_real(c.gamma.real()) << ',' << format_real(c.gamma.imag()) << '\n';
}

void write_spectrum_csv(std::ostream& os, const chain::QuasiSpectrum& qs, const basis::ManyBodySpectrum& mb) {
  os << "# quasi-energies\nmode,branch,re_x,im_x,re_epsilon,im_epsilon\n";
  for (const auto& p : qs.points)
    os << chain::mode_name(p.mode) << ',' << p.branch_index << ',' << format_real(p.x.real()) << ','
       << format_real(p.x.imag()) << ',' << format_real(p.epsilon.real()) << ',' << format_real(p.epsilon.imag())
       << '\n';
  os << "# many-body energies\noccupation,re_energy,im_energy\n";
  const int L = mb.L;
  for (const auto& e : mb.entries) {
    std::string bits;
    for (int k = 0; k < L; ++k) bits += ((e.occupation >> k) & 1u) ? '1' : '0';
    os << bits << ',' << format_real(e.energy.real()) << ',' << format_real(e.energy.imag()) << '\n';
  }
}

std::string loop_report_json(const std::string& command, const ConfigEntries& config, const topology::LoopSpec& loop,
                             const topology::LoopResult& res) {
  nlohmann::ordered_json header;
  header["version"] = version();
  header["command"] = command;
  for (const auto& [k, v] : config) header["config"][k] = v;
  nlohmann::ordered_json j;
  j["header"] = header;
  j["center"] = {loop.center.real(), loop.center.imag()};
  j["radius"] = loop.radius;
  j["steps"] = loop.steps;
  j["refinements"] = res.refinements;
  j["permutation"] = res.permutation;
  j["closed"] = res.closed;
  return j.dump();
}

std::string matrix_json(const CMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows.dump();
}

}  // namespace xyep::io
