#pragma once

#include <string>
#include <string_view>

#include "mobilab/geometry.hpp"
#include "mobilab/scenario.hpp"

namespace mobilab {

// ns-2 movement script: initial "$node_(i) set X_/Y_/Z_" lines, then one
// "$ns_ at <t> \"$node_(i) setdest <x> <y> <speed>\"" per movement segment.
// Times and coordinates use fixed 6-decimal precision; speeds get more
// decimals when needed. Pauses produce no line.
std::string export_ns2_movements(const Scenario& scenario);

// Reads a script in the above form. Movement toward a destination stops at a
// later setdest for the same node. Traces are extended with a pause to
// `duration`. Throws ParseError naming line and column.
Scenario import_ns2_movements(std::string_view text, double duration, const Area& area);

// BonnMotion movement file: one line per node of "t x y" triples.
std::string export_bonnmotion(const Scenario& scenario);

// Throws ParseError for malformed triples, time regressions and points
// outside `area`.
Scenario import_bonnmotion(std::string_view text, double duration, const Area& area);

}  // namespace mobilab
