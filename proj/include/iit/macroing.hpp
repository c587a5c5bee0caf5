#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iit/complexes.hpp"
#include "iit/computer.hpp"
#include "iit/unfold.hpp"

namespace iit {

// A macro unit: a group of micro constituents, an optional exclusive
// apportionment of background mediators, an update grain, and a state map
// from constituent micro states to the unit's binary state.
struct MacroUnit {
    std::string id;
    std::vector<uint32_t> constituents;     // micro indices, ascending
    std::vector<uint32_t> apportionment;    // background micro indices
    std::vector<uint8_t> state_map;         // 2^|constituents| entries
};

struct MacroSystem {
    const CausalModel* model = nullptr;
    std::vector<MacroUnit> units;
    uint32_t tau = 1;
    BigState background;  // full micro state; non-constituent units stay frozen
};

class OverlapError : public std::runtime_error {
  public:
    explicit OverlapError(const std::string& m) : std::runtime_error(m) {}
};
class IncompleteStateMap : public std::runtime_error {
  public:
    explicit IncompleteStateMap(const std::string& m) : std::runtime_error(m) {}
};
class StateSpaceTooLarge : public std::runtime_error {
  public:
    explicit StateSpaceTooLarge(const std::string& m) : std::runtime_error(m) {}
};

// Validates disjointness of constituents and apportionments and state-map
// totality.
MacroSystem define_macro(const CausalModel& model, std::vector<MacroUnit> units, uint32_t tau,
                         const BigState& micro_state);

// Explicit macro TPM: rows indexed by macro state, built by averaging over
// the constituent micro states consistent with each macro state, evolving
// tau micro updates with the background frozen, and mapping back. Rows are
// distributions; micro-state multiplicity injects uncertainty.
std::vector<std::vector<double>> macro_tpm(const MacroSystem& ms, uint32_t cap_units = 16);

// True when every row of the joint TPM factorizes over macro units (within
// eps); the phi machinery runs on the factorized form.
bool macro_tpm_factorizes(const std::vector<std::vector<double>>& tpm, uint32_t n_units,
                          double eps = 1e-9);

struct MacroUnitFlags {
    std::string id;
    bool integrated = false;                 // phi_s of constituents > 0
    bool maximally_irreducible_within = false;
    bool non_overlapping = true;
    double phi = 0;
    double best_subset_phi = 0;
};

struct MacroValidityReport {
    std::vector<MacroUnitFlags> units;
    bool verdict = true;
};

// Applies the postulates to each candidate macro unit: its constituents must
// form an integrated subsystem that no proper subset beats.
MacroValidityReport validate_macro(const MacroSystem& ms, const EngineConfig& cfg = default_config());

struct CesAudit {
    bool nont = false;
    int nont_witness = -1;                  // distinction index
    std::vector<uint8_t> iso;               // per target unit
    std::vector<int> iso_witness;           // distinction index per target
    bool phi_zero = false;
};

// NONT: some distinction's purview escapes the designated target units.
// ISO(i): target unit i never appears in a multi-unit cause purview, or never
// in a multi-unit effect purview; it cannot bind with other target units.
CesAudit audit_ces(const CauseEffectStructure& ces, const std::vector<uint32_t>& target_units);

// The function-relevant macroing family of a generated computer: each program
// line with its instruction-register unit, the multiplexer block read out at
// its output, and each data register read out at its SIM unit.
std::vector<MacroUnit> computer_macro_units(const ComputerCircuit& c);

struct MacroAuditRow {
    std::string candidate;
    double phi = 0;
    bool phi_zero = false;
    bool nont = false;
    bool iso_any = false;
    bool invalid_unit = false;  // unit candidate fails integration or
                                // within-maximality
    std::string witness;
    bool tripped() const { return phi_zero || nont || iso_any || invalid_unit; }
};

// Evaluates the function-relevant macro candidates of a computer at a state:
// every candidate must trip at least one of {phi_s = 0, NONT, ISO}.
std::vector<MacroAuditRow> audit_computer_macroing(const ComputerCircuit& c, const BigState& u,
                                                   const EngineConfig& cfg = default_config());

}  // namespace iit
