#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iit/bits.hpp"
#include "iit/model.hpp"

namespace iit {

// Conditional probability of one member unit, over (a subset of) the member
// state space. p_on is indexed by extract_bits(row, input_mask).
struct Cpt {
    uint32_t input_mask = 0;
    std::vector<double> p_on;
};

// A candidate system: member units of a causal model, conditioned on the
// state of everything else. Effect side freezes the background in its
// current state; cause side marginalizes each unit's background inputs over
// the posterior of the previous universe state given the current one.
// Immutable once built; all evaluation methods are const and thread-safe.
class Subsystem {
  public:
    static Subsystem condition(const CausalModel& model, std::vector<uint32_t> members,
                               const BigState& u);
    static Subsystem condition_small(const CausalModel& model, uint32_t member_mask, State u);

    // Assemble a subsystem directly from per-unit conditional tables (used
    // for macro-grain systems whose TPM is built outside any causal model).
    static Subsystem from_cpts(State state, std::vector<Cpt> effect, std::vector<Cpt> cause,
                               std::vector<std::string> ids);

    uint32_t size() const { return n_; }
    State state() const { return state_; }
    const std::vector<uint32_t>& members() const { return members_; }
    const std::string& unit_id(uint32_t member) const { return ids_[member]; }
    bool has_cause() const { return has_cause_; }
    bool deterministic_effect() const { return deterministic_effect_; }

    const Cpt& effect_cpt(uint32_t member) const { return effect_[member]; }
    const Cpt& cause_cpt(uint32_t member) const { return cause_[member]; }

    // P(member == on | inputs ∩ fixed_mask from fixed_state, inputs ∩ marg_mask
    // averaged uniformly). Inputs must be covered by fixed_mask | marg_mask.
    static double cpt_prob(const Cpt& cpt, bool on, State fixed_state, uint32_t fixed_mask,
                           uint32_t marg_mask);

    // Same probability for every assignment of the units in space_mask
    // (compact little-endian order over space_mask); remaining inputs fixed
    // or averaged as above.
    static void cpt_vector(const Cpt& cpt, bool on, uint32_t space_mask, State fixed_state,
                           uint32_t fixed_mask, uint32_t marg_mask, double* out);

    // One-step image of a member row under the effect CPTs (deterministic
    // models only).
    State step_members(State row) const;

  private:
    uint32_t n_ = 0;
    State state_ = 0;
    std::vector<uint32_t> members_;
    std::vector<std::string> ids_;
    std::vector<Cpt> effect_;
    std::vector<Cpt> cause_;
    bool has_cause_ = true;
    bool deterministic_effect_ = true;
};

class SubsystemTooLarge : public std::runtime_error {
  public:
    explicit SubsystemTooLarge(const std::string& m) : std::runtime_error(m) {}
};

// Explicit row-stochastic matrix over member states; rows sum to 1.
// Deterministic models produce one-hot rows.
std::vector<std::vector<double>> materialize_effect_tpm(const Subsystem& sub,
                                                        uint32_t cap_units = 20);
std::vector<std::vector<double>> materialize_cause_tpm(const Subsystem& sub,
                                                       uint32_t cap_units = 20);

}  // namespace iit
