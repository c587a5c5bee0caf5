#pragma once

#include <optional>
#include <string>

#include "iit/engine_config.hpp"
#include "iit/partitions.hpp"
#include "iit/subsystem.hpp"

namespace iit {

struct IntrinsicInfo {
    double ii_c = 0, ii_e = 0;
    State cause_state = 0, effect_state = 0;
    bool has_cause = true;
};

// Intrinsic cause/effect information of the whole subsystem over itself,
// with the maximizing states (ties -> lexicographically smallest).
IntrinsicInfo intrinsic_information(const Subsystem& sub,
                                    const EngineConfig& cfg = default_config());

struct SystemPhiResult {
    double phi = 0;
    double ii_c = 0, ii_e = 0;
    State cause_state = 0, effect_state = 0;
    std::optional<DirectedPartition> mip;
    bool structural_zero = false;
    std::string note;  // certificate or degeneracy description
};

class AnalysisTooLarge : public std::runtime_error {
  public:
    explicit AnalysisTooLarge(const std::string& m) : std::runtime_error(m) {}
};

// Zero-loss cut certificates: a weakly connected member digraph (conditioned
// on the background state) or an externally determined member. Works on
// models of any size; never enumerates partitions.
struct StructuralCut {
    DirectedPartition partition;  // over member indices
    std::string reason;
};
std::optional<StructuralCut> structural_reducibility(const CausalModel& model,
                                                     const std::vector<uint32_t>& members,
                                                     const BigState& u);
// Subsystem overload (also checks cause-side external determination).
std::optional<StructuralCut> structural_reducibility(const Subsystem& sub);

// System integrated information: minimum partition loss over the directional
// partition family, with structural certificates short-circuiting the
// enumeration. Throws AnalysisTooLarge past cfg.exact_cap when no
// certificate applies.
SystemPhiResult phi_system(const Subsystem& sub, const EngineConfig& cfg = default_config());

// Partition loss for one explicit partition (used by property tests).
double partition_loss(const Subsystem& sub, const IntrinsicInfo& info,
                      const DirectedPartition& p, const EngineConfig& cfg = default_config());

}  // namespace iit
