#pragma once

#include <string>

#include "iit/macroing.hpp"

namespace iit {

// Text documents for macro groupings:
//
//   macro <name> tau=<k>
//   unit <id> constituents=<id,id,...> [apportionment=<id,...>]
//             (readout=<id> | map=<bits>)
//
// readout=<id> is the projection onto one constituent; map=<bits> gives the
// full state map, row index little-endian over the constituent list. Loading
// validates disjointness and map totality against the model.
MacroSystem parse_macro_doc(const CausalModel& model, const std::string& text,
                            const BigState& micro_state);
MacroSystem load_macro_file(const CausalModel& model, const std::string& path,
                            const BigState& micro_state);
std::string serialize_macro_doc(const MacroSystem& ms, const std::string& name);

}  // namespace iit
