#pragma once

#include <cstdint>

namespace iit {

// Numerical and formalism knobs for the causal analysis engine. The
// formalism switches exist so the two readings the framework papers leave
// open can be A/B-tested; defaults are the combination that reproduces the
// published reference values (see tests/test_reference_values.cpp).
struct EngineConfig {
    double eps = 1e-10;          // phi values below this collapse to 0
    uint32_t exact_cap = 8;      // exhaustive partition search cap (units)
    uint64_t partition_cap = uint64_t(1) << 22;
    uint64_t relation_scan_cap = uint64_t(1) << 22;

    // Unconstrained effect probability: product of per-unit marginals
    // (factorized) or the average over all rows of the joint (mixture).
    enum class UnconstrainedEffect : uint8_t { Factorized, Mixture };
    UnconstrainedEffect unconstrained_effect = UnconstrainedEffect::Factorized;

    // Cause-side partition loss: intrinsic difference between the intact and
    // partitioned cause repertoires, or between the raw likelihoods.
    enum class CausePhi : uint8_t { RepertoireId, LikelihoodRatio };
    CausePhi cause_phi = CausePhi::RepertoireId;

    // System partition family: one-directional bipartition cuts only, or
    // every directional multi-part partition (tags <-, ->, <->).
    enum class PartitionFamily : uint8_t { OneWay, Directional };
    PartitionFamily partition_family = PartitionFamily::Directional;

    // Select the minimum partition by loss normalized with the number of
    // severed potential connections (the reported phi stays unnormalized).
    bool normalize_system_mip = true;
    bool normalize_mechanism_mip = false;

    // Only distinctions congruent with the system cause/effect states enter
    // the cause-effect structure.
    bool congruence_filter = true;

    uint32_t threads = 0;  // 0 = hardware concurrency
};

inline EngineConfig& default_config() {
    static EngineConfig cfg;
    return cfg;
}

}  // namespace iit
