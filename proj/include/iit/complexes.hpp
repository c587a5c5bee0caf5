#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "iit/phi_system.hpp"
#include "iit/unfold.hpp"

namespace iit {

struct Complex {
    std::vector<uint32_t> units;  // global indices, ascending
    State state = 0;              // member state
    SystemPhiResult system;
};

struct ComplexSet {
    std::vector<Complex> complexes;          // in discovery order
    uint64_t candidates_evaluated = 0;
};

// Candidate supplier: either every subset of the remaining units (exhaustive,
// bounded by cap) or an explicit candidate list (catalog-driven pruning for
// the generated computers).
using CandidateFilter = std::function<std::vector<std::vector<uint32_t>>(
    const std::vector<uint32_t>& remaining_units)>;

// Non-overlapping maximally irreducible systems by exclusion recursion:
// winners claim their units, the search repeats over the remainder.
// Candidates are ranked by phi (ties: smaller unit-index list wins).
ComplexSet find_complexes(const CausalModel& model, const BigState& u,
                          const CandidateFilter& filter = nullptr,
                          const EngineConfig& cfg = default_config());

ComplexSet find_complexes_small(const CausalModel& model, State u,
                                const EngineConfig& cfg = default_config());

// Unfold one complex of a set.
CauseEffectStructure unfold_complex(const CausalModel& model, const BigState& u,
                                    const Complex& c, const EngineConfig& cfg = default_config());

}  // namespace iit
