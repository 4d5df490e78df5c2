#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "xyep/basis.hpp"
#include "xyep/ep.hpp"
#include "xyep/topology.hpp"

namespace xyep::io {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Parses "a", "bi", "a+bi", "a-bi", "i", "-i"; throws InvalidConfig.
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z, int digits = 12);
std::string format_real(double v, int digits = 12);

const char* version();

// "# key = value" lines, version first.
void write_header(std::ostream& os, const std::string& command, const ConfigEntries& config);

void write_ep_table_csv(std::ostream& os, const std::vector<ep::EPRecord>& records);
void write_overlap_csv(std::ostream& os, const topology::OverlapGrid& grid);
void write_seam_csv(std::ostream& os, const std::vector<topology::SeamCell>& seam);
void write_spectrum_csv(std::ostream& os, const chain::QuasiSpectrum& qs, const basis::ManyBodySpectrum& mb);

// {header, center, radius, steps, refinements, permutation, closed}
std::string loop_report_json(const std::string& command, const ConfigEntries& config, const topology::LoopSpec& loop,
                             const topology::LoopResult& res);

// Row-major [re, im] pairs.
std::string matrix_json(const CMat& m);

}  // namespace xyep::io
