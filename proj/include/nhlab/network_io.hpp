#pragma once

// Network files: a JSON document of the form
//
//   {
//     "sites": 4,
//     "hoppings": [[0, 1, 1.0], [1, 2, 1.0]],
//     "potentials": [[0, -0.5]],
//     "leads": {"A": {"site": 0, "g": 1.0}, "B": {"site": 2, "g": 1.0}, "J": 1.0}
//   }
//
// Site indices are 0-based. "hoppings", "potentials" and "J" are optional (empty,
// empty, 1). Unknown keys are rejected at every level.

#include <filesystem>
#include <string>
#include <string_view>

#include "nhlab/netgraph.hpp"

namespace nhlab {

/// Throws Error{InvalidValue} for malformed documents and the netgraph validation
/// errors for well-formed documents describing an invalid system.
ScatteringSystem parse_network(std::string_view text);

ScatteringSystem load_network(const std::filesystem::path& path);

/// Inverse of parse_network; numbers are written in shortest round-trip form.
std::string serialize_network(const ScatteringSystem& system);

/// "%.17g": enough significant digits to reproduce any double exactly.
std::string format_real(double value);

}  // namespace nhlab
