#include "iit/subsystem.hpp"

#include <algorithm>
#include <stdexcept>

#include "iit/preimage.hpp"

namespace iit {

namespace {
// Position of a member index within the sorted sys_inputs list.
uint32_t input_position(const std::vector<uint32_t>& sys_inputs, uint32_t member) {
    auto it = std::lower_bound(sys_inputs.begin(), sys_inputs.end(), member);
    return static_cast<uint32_t>(it - sys_inputs.begin());
}
}  // namespace

Subsystem Subsystem::condition_small(const CausalModel& model, uint32_t member_mask, State u) {
    std::vector<uint32_t> members;
    for (uint32_t i = 0; i < model.size(); ++i)
        if ((member_mask >> i) & 1u) members.push_back(i);
    BigState big(model.size());
    for (uint32_t i = 0; i < model.size(); ++i) big.set(i, (u >> i) & 1u);
    return condition(model, std::move(members), big);
}

Subsystem Subsystem::condition(const CausalModel& model, std::vector<uint32_t> members,
                               const BigState& u) {
    if (members.empty()) throw std::invalid_argument("subsystem needs at least one member");
    std::sort(members.begin(), members.end());
    if (members.size() > 20) throw SubsystemTooLarge("subsystem above 20 members");

    Subsystem sub;
    sub.n_ = static_cast<uint32_t>(members.size());
    sub.members_ = members;
    for (uint32_t m : members) sub.ids_.push_back(model.unit(m).id);
    for (uint32_t i = 0; i < sub.n_; ++i)
        if (u.get(members[i])) sub.state_ |= (1u << i);

    auto member_index = [&](uint32_t global) -> int {
        auto it = std::lower_bound(members.begin(), members.end(), global);
        if (it != members.end() && *it == global) return static_cast<int>(it - members.begin());
        return -1;
    };

    sub.effect_.resize(sub.n_);
    sub.cause_.resize(sub.n_);
    for (uint32_t i = 0; i < sub.n_; ++i) {
        const UnitSpec& unit = model.unit(members[i]);
        std::vector<uint32_t> sys_inputs;   // member indices
        std::vector<uint32_t> bg_inputs;    // global indices
        std::vector<uint32_t> sources;
        for (const auto& in : unit.inputs)
            if (std::find(sources.begin(), sources.end(), in.unit) == sources.end())
                sources.push_back(in.unit);
        for (uint32_t src : sources) {
            int mi = member_index(src);
            if (mi >= 0) sys_inputs.push_back(static_cast<uint32_t>(mi));
            else bg_inputs.push_back(src);
        }
        std::sort(sys_inputs.begin(), sys_inputs.end());
        std::sort(bg_inputs.begin(), bg_inputs.end());

        uint32_t imask = 0;
        for (uint32_t s : sys_inputs) imask |= (1u << s);

        auto gate_out = [&](uint32_t sys_assign, uint32_t bg_assign_bits,
                            const std::vector<uint32_t>& bg_list, bool bg_from_u) {
            auto bit_at = [&](uint32_t g) -> bool {
                int mi = member_index(g);
                if (mi >= 0)
                    return ((sys_assign >> input_position(sys_inputs, uint32_t(mi))) & 1u) != 0;
                if (bg_from_u) return u.get(g);
                for (size_t b = 0; b < bg_list.size(); ++b)
                    if (bg_list[b] == g) return ((bg_assign_bits >> b) & 1u) != 0;
                return u.get(g);
            };
            switch (unit.gate) {
                case Gate::Copy: return bool(bit_at(unit.inputs[0].unit) ^ unit.inputs[0].negated);
                case Gate::And: {
                    for (const auto& in : unit.inputs)
                        if (!(bit_at(in.unit) ^ in.negated)) return false;
                    return true;
                }
                case Gate::Or:
                case Gate::GeneralizedOr: {
                    for (const auto& in : unit.inputs)
                        if (bit_at(in.unit) ^ in.negated) return true;
                    return false;
                }
                case Gate::Xor: {
                    bool v = false;
                    for (const auto& in : unit.inputs) v ^= bit_at(in.unit) ^ in.negated;
                    return v;
                }
                case Gate::TruthTable: {
                    uint32_t row = 0;
                    for (uint32_t b = 0; b < unit.inputs.size(); ++b)
                        if (bit_at(unit.inputs[b].unit) ^ unit.inputs[b].negated) row |= (1u << b);
                    return unit.table[row] != 0;
                }
            }
            return false;
        };

        // Effect side: background frozen at its current state.
        Cpt& ecpt = sub.effect_[i];
        ecpt.input_mask = imask;
        ecpt.p_on.assign(size_t(1) << sys_inputs.size(), 0.0);
        for (uint32_t a = 0; a < (1u << sys_inputs.size()); ++a)
            ecpt.p_on[a] = gate_out(a, 0, {}, true) ? 1.0 : 0.0;

        // Cause side: background inputs averaged over the preimage posterior.
        Cpt& ccpt = sub.cause_[i];
        ccpt.input_mask = imask;
        ccpt.p_on.assign(size_t(1) << sys_inputs.size(), 0.0);
        PreimagePosterior post;
        if (!bg_inputs.empty()) post = preimage_posterior(model, u, bg_inputs);
        if (post.empty) {
            sub.has_cause_ = false;
        } else {
            for (uint32_t a = 0; a < (1u << sys_inputs.size()); ++a) {
                double p = 0;
                if (bg_inputs.empty()) {
                    p = gate_out(a, 0, {}, true) ? 1.0 : 0.0;
                } else {
                    for (uint32_t k = 0; k < (1u << bg_inputs.size()); ++k)
                        if (post.prob[k] > 0)
                            p += post.prob[k] * (gate_out(a, k, bg_inputs, false) ? 1.0 : 0.0);
                }
                ccpt.p_on[a] = p;
            }
        }
    }

    // A whole-universe preimage check: if the current state has no previous
    // state at all, the cause side is undefined for every unit.
    if (sub.has_cause_) {
        PreimagePosterior whole = preimage_posterior(model, u, {});
        if (whole.empty) sub.has_cause_ = false;
    }
    for (const auto& c : sub.effect_)
        for (double p : c.p_on)
            if (p != 0.0 && p != 1.0) sub.deterministic_effect_ = false;
    return sub;
}

Subsystem Subsystem::from_cpts(State state, std::vector<Cpt> effect, std::vector<Cpt> cause,
                               std::vector<std::string> ids) {
    Subsystem sub;
    sub.n_ = static_cast<uint32_t>(effect.size());
    sub.state_ = state;
    for (uint32_t i = 0; i < sub.n_; ++i) sub.members_.push_back(i);
    sub.ids_ = std::move(ids);
    sub.effect_ = std::move(effect);
    sub.cause_ = std::move(cause);
    for (const auto& c : sub.effect_)
        for (double p : c.p_on)
            if (p != 0.0 && p != 1.0) sub.deterministic_effect_ = false;
    return sub;
}

double Subsystem::cpt_prob(const Cpt& cpt, bool on, State fixed_state, uint32_t fixed_mask,
                           uint32_t marg_mask) {
    uint32_t marg = cpt.input_mask & marg_mask & ~fixed_mask;
    uint32_t fixed_bits = extract_bits(fixed_state & cpt.input_mask & fixed_mask, cpt.input_mask);
    uint32_t marg_bits = extract_bits(marg, cpt.input_mask);
    double acc = 0;
    uint32_t count = 0;
    // Iterate subsets of marg_bits overlaid on the fixed assignment.
    uint32_t sub = 0;
    do {
        acc += cpt.p_on[fixed_bits | sub];
        ++count;
        sub = (sub - marg_bits) & marg_bits;
    } while (sub != 0);
    double p1 = acc / count;
    return on ? p1 : 1.0 - p1;
}

void Subsystem::cpt_vector(const Cpt& cpt, bool on, uint32_t space_mask, State fixed_state,
                           uint32_t fixed_mask, uint32_t marg_mask, double* out) {
    uint32_t nspace = popcount32(space_mask);
    for (uint32_t a = 0; a < (1u << nspace); ++a) {
        State s = deposit_bits(a, space_mask) | (fixed_state & fixed_mask & ~space_mask);
        out[a] = cpt_prob(cpt, on, s, space_mask | (fixed_mask & ~space_mask), marg_mask);
    }
}

State Subsystem::step_members(State row) const {
    State out = 0;
    for (uint32_t i = 0; i < n_; ++i) {
        double p = cpt_prob(effect_[i], true, row, ~0u, 0);
        if (p > 0.5) out |= (1u << i);
    }
    return out;
}

static std::vector<std::vector<double>> materialize(const Subsystem& sub, bool effect,
                                                    uint32_t cap_units) {
    if (sub.size() > cap_units)
        throw SubsystemTooLarge("materialization above cap of " + std::to_string(cap_units) +
                                " units");
    size_t rows = size_t(1) << sub.size();
    std::vector<std::vector<double>> tpm(rows, std::vector<double>(rows, 0.0));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < rows; ++c) {
            double p = 1.0;
            for (uint32_t i = 0; i < sub.size() && p > 0; ++i) {
                const Cpt& cpt = effect ? sub.effect_cpt(i) : sub.cause_cpt(i);
                p *= Subsystem::cpt_prob(cpt, (c >> i) & 1u, static_cast<State>(r), ~0u, 0);
            }
            tpm[r][c] = p;
        }
    }
    return tpm;
}

std::vector<std::vector<double>> materialize_effect_tpm(const Subsystem& sub, uint32_t cap_units) {
    return materialize(sub, true, cap_units);
}

std::vector<std::vector<double>> materialize_cause_tpm(const Subsystem& sub, uint32_t cap_units) {
    if (!sub.has_cause()) throw std::runtime_error("state has no previous state; cause TPM undefined");
    return materialize(sub, false, cap_units);
}

}  // namespace iit
