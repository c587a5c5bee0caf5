#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "iit/bits.hpp"

namespace iit {

enum class Gate : uint8_t { Copy, And, Or, Xor, GeneralizedOr, TruthTable };

std::string gate_name(Gate g);
std::optional<Gate> gate_from_name(const std::string& name);

struct InputRef {
    uint32_t unit = 0;
    bool negated = false;
    bool operator==(const InputRef& o) const { return unit == o.unit && negated == o.negated; }
};

struct UnitSpec {
    std::string id;
    Gate gate = Gate::Copy;
    std::vector<InputRef> inputs;
    // TruthTable only: bit r = output when the inputs (input 0 = LSB) spell r.
    std::vector<uint8_t> table;
};

class ModelError : public std::runtime_error {
  public:
    enum class Kind { UnknownUnitReference, ArityMismatch, TableSizeMismatch, EmptyModel, DuplicateUnitId };
    ModelError(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind(kind) {}
    Kind kind;
};

// A deterministic synchronously-updating Boolean network. Unit order is the
// canonical bit order for state encodings (bit i = unit i; strings render
// unit 0 leftmost).
class CausalModel {
  public:
    CausalModel(std::string name, std::vector<UnitSpec> units);

    const std::string& name() const { return name_; }
    uint32_t size() const { return static_cast<uint32_t>(units_.size()); }
    const std::vector<UnitSpec>& units() const { return units_; }
    const UnitSpec& unit(uint32_t i) const { return units_[i]; }
    std::optional<uint32_t> index_of(const std::string& id) const;

    bool eval_unit(uint32_t i, const BigState& s) const;
    BigState step(const BigState& s) const;

    // Small-model fast path (size <= 20).
    bool small() const { return size() <= 20; }
    State step_small(State s) const;
    bool eval_unit_small(uint32_t i, State s) const;

    // Exact dependence: a_ij = 1 iff some context makes unit j's output flip
    // with unit i's state. Syntactically listed but functionally vacuous
    // inputs are excluded. Row i = sources, column j = targets.
    const std::vector<uint32_t>& connectivity() const;  // bitmask rows (size <= 32 models)
    std::vector<std::vector<uint8_t>> connectivity_matrix() const;  // any size
    bool depends_on(uint32_t target, uint32_t source) const;

    // Forward closure under step. horizon == 0 means "until fixpoint".
    std::vector<BigState> reachable_states(const std::vector<BigState>& initial,
                                           uint64_t horizon) const;
    std::vector<State> reachable_states_small(const std::vector<State>& initial,
                                              uint64_t horizon) const;

  private:
    void validate() const;
    std::string name_;
    std::vector<UnitSpec> units_;
    mutable std::vector<uint32_t> small_conn_;          // lazily computed, size <= 32
    mutable std::vector<std::vector<uint32_t>> deps_;   // semantic input lists, any size
    const std::vector<std::vector<uint32_t>>& semantic_inputs() const;
};

// Parse a state literal: bit string ("0101") or case-encoded unit names
// ("pQrS", matching unit ids case-insensitively in model order).
State parse_state(const CausalModel& model, const std::string& text);
std::string render_state(const CausalModel& model, State s);       // bit string
std::string render_state_named(const CausalModel& model, State s); // pQrS form

}  // namespace iit
