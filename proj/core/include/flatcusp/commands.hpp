#pragma once

#include <string>

#include "flatcusp/config.hpp"

namespace flatcusp {

// Each command runs one study, writes a JSON report plus CSV curves under
// cfg "run.out", appends every artifact to MANIFEST.json (path, command,
// config hash, seed) and returns the JSON report text.
//
//   table         geometry audit: derived constants, tangency and
//                 perpendicular-hit residuals, curvature ranges
//   corner        corner-series ensemble asymptotics (exact, reduced,
//                 extended-precision or compare, per config)
//   tail          return-time and cell-measure tails with fitted exponents
//   expansion     expansion-factor law, lambda profiles, one-step sum
//   transitions   cell-to-cell transition support/exponents
//   correlations  autocorrelation of a trig observable on a long orbit
//   all           every command in sequence
std::string cmd_table(const Config& cfg);
std::string cmd_corner(const Config& cfg);
std::string cmd_tail(const Config& cfg);
std::string cmd_expansion(const Config& cfg);
std::string cmd_transitions(const Config& cfg);
std::string cmd_correlations(const Config& cfg);
std::string cmd_all(const Config& cfg);

}  // namespace flatcusp
