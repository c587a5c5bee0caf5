#pragma once

#include <string>

#include "iit/complexes.hpp"
#include "iit/computer.hpp"
#include "iit/macroing.hpp"
#include "iit/motifs.hpp"
#include "iit/unfold.hpp"

// Machine-readable result documents. JSON with a stable schema version and
// sorted keys keeps runs byte-comparable; phi values are printed at six
// decimals with the comparison tolerance embedded in the document.
namespace iit::report {

constexpr int kSchemaVersion = 1;

std::string phi_result_json(const CausalModel& model, const std::vector<uint32_t>& members,
                            State member_state, const SystemPhiResult& r);
std::string complexes_json(const CausalModel& model, const BigState& u, const ComplexSet& cs);
std::string ces_json(const CauseEffectStructure& ces);
std::string equivalence_json(const EquivalenceReport& rep, const std::string& target_name,
                             State t0);
std::string bounds_json(const BoundReport& rep);
std::string macro_audit_json(const std::vector<MacroAuditRow>& rows);

// Graph description of a cause-effect structure for figure pipelines:
// nodes are distinctions, 2-relations render as edges, 3-relations as
// triangles, higher orders are listed as hyperedge comments.
std::string ces_dot(const CauseEffectStructure& ces);

// Update-indexed bit-string rows.
std::string trace_csv(const ComputerCircuit& c, const std::vector<BigState>& trace);

void write_file(const std::string& path, const std::string& content);

}  // namespace iit::report
