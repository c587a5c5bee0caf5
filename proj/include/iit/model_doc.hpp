#pragma once

#include <string>

#include "iit/model.hpp"

namespace iit {

// Plain-text model documents, one unit per line:
//
//   model <name>
//   unit <id> <GATE> <in1,in2,...> [<table bits>]
//
// Input references are unit ids, '!'-prefixed when negated. Truth tables are
// bit strings of length 2^k; row index is little-endian over the input list
// (input 0 = least significant). '#' starts a comment. serialize() emits the
// canonical form; parse(serialize(m)) round-trips byte-stably.
CausalModel parse_model_doc(const std::string& text);
CausalModel load_model_file(const std::string& path);
std::string serialize_model_doc(const CausalModel& model);
void save_model_file(const CausalModel& model, const std::string& path);

}  // namespace iit
