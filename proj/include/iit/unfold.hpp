#pragma once

#include <optional>
#include <vector>

#include "iit/phi_system.hpp"
#include "iit/subsystem.hpp"

namespace iit {

// One side of a distinction: the maximally irreducible purview, its selected
// state (bits within the purview mask), and the irreducibility reached there.
struct Mice {
    uint32_t purview = 0;
    State state = 0;
    double phi = 0;
};

struct Distinction {
    uint32_t mechanism = 0;
    State mech_state = 0;
    Mice cause, effect;
    double phi = 0;  // min of the two sides
    uint32_t purview_union() const { return cause.purview | effect.purview; }
};

// How one distinction participates in a relation.
struct RelationFace {
    uint32_t distinction = 0;  // index into the CES distinction list
    bool uses_cause = false;
    bool uses_effect = false;
};

struct Relation {
    std::vector<uint32_t> members;  // distinction indices, ascending
    uint32_t overlap = 0;           // congruent overlap units
    State overlap_state = 0;        // congruent bits over the overlap
    std::vector<RelationFace> faces;
    double phi = 0;
};

struct CauseEffectStructure {
    std::vector<uint32_t> units;  // global unit indices of the complex
    std::vector<std::string> unit_ids;
    State state = 0;
    SystemPhiResult system;
    std::vector<Distinction> distinctions;
    std::vector<Relation> relations;
    double sum_phi_d = 0, sum_phi_r = 0;
    double big_phi = 0;
};

class RelationScanTooLarge : public std::runtime_error {
  public:
    explicit RelationScanTooLarge(const std::string& m) : std::runtime_error(m) {}
};

// Irreducibility of one mechanism/purview pairing (min over disintegrating
// partitions of the pointwise intrinsic difference at the specified state).
struct PurviewValue {
    double phi = 0;
    State state = 0;
};
PurviewValue evaluate_purview(const Subsystem& sub, uint32_t mechanism, uint32_t purview,
                              bool effect_side, const EngineConfig& cfg = default_config());

// The maximally irreducible cause/effect over all purviews; nullopt when
// every purview is reducible.
std::optional<Mice> maximal_purview(const Subsystem& sub, uint32_t mechanism, bool effect_side,
                                    const EngineConfig& cfg = default_config());

std::optional<Distinction> distinction(const Subsystem& sub, uint32_t mechanism,
                                       const EngineConfig& cfg = default_config());

// All distinctions of the complex, congruence-filtered against the system's
// cause/effect states when cfg.congruence_filter is set.
std::vector<Distinction> all_distinctions(const Subsystem& sub, const SystemPhiResult& system,
                                          const EngineConfig& cfg = default_config());

// The relation bound by a set of distinctions, if their purviews share a
// congruent overlap.
std::optional<Relation> relation(const std::vector<Distinction>& ds,
                                 const std::vector<uint32_t>& subset);

CauseEffectStructure unfold(const Subsystem& sub, const SystemPhiResult& system,
                            const EngineConfig& cfg = default_config());

// Unit-relabeling isomorphism check; reports the witness mapping or the
// first obstruction.
struct CesEquivalenceReport {
    bool isomorphic = false;
    std::string obstruction;             // empty when isomorphic
    std::vector<uint32_t> witness;       // unit mapping a -> b
};
CesEquivalenceReport ces_equivalent(const CauseEffectStructure& a, const CauseEffectStructure& b,
                                    double tol = 1e-6);

}  // namespace iit
