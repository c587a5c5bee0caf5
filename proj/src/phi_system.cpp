#include "iit/phi_system.hpp"

#include <algorithm>
#include <cmath>

#include "iit/kernels.hpp"

namespace iit {

namespace {

// Joint distribution over member states as a product of per-unit Bernoulli
// factors p(bit_i = 1); out[row] = prod_i (bit ? p1[i] : 1-p1[i]).
void tensor_rows(const std::vector<double>& p1, std::vector<double>& out) {
    uint32_t n = static_cast<uint32_t>(p1.size());
    out.assign(size_t(1) << n, 1.0);
    for (uint32_t i = 0; i < n; ++i) {
        size_t block = size_t(1) << i;
        for (size_t s = 0; s < out.size(); ++s) out[s] *= ((s >> i) & 1u) ? p1[i] : 1.0 - p1[i];
        (void)block;
    }
}

// Likelihood vector over previous member states: L[row] = prod_j P(unit j in
// its current state | previous members = row), optionally with severed
// sources noised.
void cause_likelihood(const Subsystem& sub, const std::vector<uint32_t>* cut,
                      std::vector<double>& out) {
    uint32_t n = sub.size();
    out.assign(size_t(1) << n, 1.0);
    std::vector<double> factor(out.size());
    for (uint32_t j = 0; j < n; ++j) {
        const Cpt& cpt = sub.cause_cpt(j);
        uint32_t severed = 0;
        if (cut)
            for (uint32_t src = 0; src < n; ++src)
                if (((*cut)[src] >> j) & 1u) severed |= (1u << src);
        bool on = (sub.state() >> j) & 1u;
        for (size_t row = 0; row < out.size(); ++row)
            factor[row] = Subsystem::cpt_prob(cpt, on, static_cast<State>(row), ~severed, severed);
        kernels::active().mul_inplace(out.data(), factor.data(), out.size());
    }
}

// Effect row at the current state: per-unit ON-probabilities, optionally with
// severed sources noised.
std::vector<double> effect_on_probs(const Subsystem& sub, const std::vector<uint32_t>* cut) {
    uint32_t n = sub.size();
    std::vector<double> p1(n);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t severed = 0;
        if (cut)
            for (uint32_t src = 0; src < n; ++src)
                if (((*cut)[src] >> i) & 1u) severed |= (1u << src);
        p1[i] = Subsystem::cpt_prob(sub.effect_cpt(i), true, sub.state(), ~severed, severed);
    }
    return p1;
}

struct SystemVectors {
    std::vector<double> effect_row;      // p_e(s_bar | s)
    std::vector<double> effect_unc;      // unconstrained effect distribution
    std::vector<double> cause_rep;       // normalized posterior over previous states
    std::vector<double> cause_like;      // raw likelihoods T_c(s | s_bar)
    bool cause_ok = true;
};

SystemVectors system_vectors(const Subsystem& sub, const EngineConfig& cfg) {
    SystemVectors v;
    uint32_t n = sub.size();
    tensor_rows(effect_on_probs(sub, nullptr), v.effect_row);

    if (cfg.unconstrained_effect == EngineConfig::UnconstrainedEffect::Factorized) {
        std::vector<double> marg(n);
        for (uint32_t i = 0; i < n; ++i)
            marg[i] = Subsystem::cpt_prob(sub.effect_cpt(i), true, 0, 0, ~0u);
        tensor_rows(marg, v.effect_unc);
    } else {
        v.effect_unc.assign(size_t(1) << n, 0.0);
        std::vector<double> row;
        std::vector<double> p1(n);
        for (size_t s = 0; s < v.effect_unc.size(); ++s) {
            for (uint32_t i = 0; i < n; ++i)
                p1[i] = Subsystem::cpt_prob(sub.effect_cpt(i), true, static_cast<State>(s), ~0u, 0);
            tensor_rows(p1, row);
            for (size_t t = 0; t < row.size(); ++t) v.effect_unc[t] += row[t];
        }
        double inv = 1.0 / double(v.effect_unc.size());
        for (auto& x : v.effect_unc) x *= inv;
    }

    if (!sub.has_cause()) {
        v.cause_ok = false;
        return v;
    }
    cause_likelihood(sub, nullptr, v.cause_like);
    double total = kernels::active().sum(v.cause_like.data(), v.cause_like.size());
    if (total <= 0) {
        v.cause_ok = false;
        return v;
    }
    v.cause_rep = v.cause_like;
    for (auto& x : v.cause_rep) x /= total;
    return v;
}

// argmax with lexicographically-smallest tie-break; values within eps tie.
std::pair<State, double> argmax_state(const std::vector<double>& xs, double eps) {
    State best = 0;
    double best_v = xs[0];
    for (size_t s = 1; s < xs.size(); ++s)
        if (xs[s] > best_v + eps) {
            best = static_cast<State>(s);
            best_v = xs[s];
        }
    return {best, best_v};
}

}  // namespace

IntrinsicInfo intrinsic_information(const Subsystem& sub, const EngineConfig& cfg) {
    IntrinsicInfo info;
    SystemVectors v = system_vectors(sub, cfg);
    uint32_t n = sub.size();
    size_t space = size_t(1) << n;

    std::vector<double> terms(space, 0.0);
    for (size_t s = 0; s < space; ++s)
        if (v.effect_row[s] > 0)
            terms[s] = v.effect_row[s] * std::log2(v.effect_row[s] / v.effect_unc[s]);
    auto [es, ev] = argmax_state(terms, cfg.eps);
    info.effect_state = es;
    info.ii_e = std::max(0.0, ev);

    if (!v.cause_ok) {
        info.has_cause = false;
        return info;
    }
    double uniform = 1.0 / double(space);
    for (size_t s = 0; s < space; ++s)
        terms[s] = v.cause_rep[s] > 0 ? v.cause_rep[s] * std::log2(v.cause_rep[s] / uniform) : 0.0;
    auto [cs, cv] = argmax_state(terms, cfg.eps);
    info.cause_state = cs;
    info.ii_c = std::max(0.0, cv);
    return info;
}

double partition_loss(const Subsystem& sub, const IntrinsicInfo& info, const DirectedPartition& p,
                      const EngineConfig& cfg) {
    // Effect side: pointwise intrinsic difference at the selected effect state
    // between the intact and partitioned repertoires.
    auto p1 = effect_on_probs(sub, nullptr);
    auto p1cut = effect_on_probs(sub, &p.cut);
    double pe = 1.0, pe_cut = 1.0;
    for (uint32_t i = 0; i < sub.size(); ++i) {
        bool bit = (info.effect_state >> i) & 1u;
        pe *= bit ? p1[i] : 1.0 - p1[i];
        pe_cut *= bit ? p1cut[i] : 1.0 - p1cut[i];
    }
    double phi_e = 0;
    if (pe > 0) phi_e = pe_cut > 0 ? pe * std::log2(pe / pe_cut) : 1e30;
    phi_e = std::max(0.0, phi_e);

    // Cause side.
    std::vector<double> like, like_cut;
    cause_likelihood(sub, nullptr, like);
    cause_likelihood(sub, &p.cut, like_cut);
    double total = kernels::active().sum(like.data(), like.size());
    double total_cut = kernels::active().sum(like_cut.data(), like_cut.size());
    double phi_c = 0;
    if (total > 0 && like[info.cause_state] > 0) {
        double sel = like[info.cause_state] / total;
        double ratio;
        if (cfg.cause_phi == EngineConfig::CausePhi::LikelihoodRatio) {
            ratio = like_cut[info.cause_state] > 0 ? like[info.cause_state] / like_cut[info.cause_state]
                                                   : 0;
        } else {
            double rep_cut =
                total_cut > 0 ? like_cut[info.cause_state] / total_cut : 0;
            ratio = rep_cut > 0 ? sel / rep_cut : 0;
        }
        phi_c = ratio > 0 ? sel * std::log2(ratio) : 1e30;
    }
    phi_c = std::max(0.0, phi_c);
    return std::min(phi_c, phi_e);
}

std::optional<StructuralCut> structural_reducibility(const CausalModel& model,
                                                     const std::vector<uint32_t>& members,
                                                     const BigState& u) {
    uint32_t n = static_cast<uint32_t>(members.size());
    if (n == 0) return std::nullopt;

    // Contextual effect digraph: member j -> member i iff j can change i's
    // next state with the background held at u.
    std::vector<std::vector<uint32_t>> in_sets(n), succ(n);
    std::vector<uint8_t> effect_const(n, 1);
    std::vector<int> member_of(model.size(), -1);
    for (uint32_t i = 0; i < n; ++i) member_of[members[i]] = static_cast<int>(i);

    for (uint32_t i = 0; i < n; ++i) {
        const UnitSpec& unit = model.unit(members[i]);
        std::vector<uint32_t> sys_src;  // member indices with contextual influence
        std::vector<uint32_t> sources;
        for (const auto& in : unit.inputs)
            if (std::find(sources.begin(), sources.end(), in.unit) == sources.end())
                sources.push_back(in.unit);
        switch (unit.gate) {
            case Gate::Copy: {
                if (member_of[unit.inputs[0].unit] >= 0)
                    sys_src.push_back(uint32_t(member_of[unit.inputs[0].unit]));
                break;
            }
            case Gate::And:
            case Gate::Or:
            case Gate::GeneralizedOr:
            case Gate::Xor: {
                bool is_and = unit.gate == Gate::And;
                bool is_xor = unit.gate == Gate::Xor;
                bool killed = false;
                if (!is_xor) {
                    // A background literal at the absorbing value fixes the gate.
                    for (const auto& in : unit.inputs) {
                        if (member_of[in.unit] >= 0) continue;
                        bool lit = u.get(in.unit) ^ in.negated;
                        if (is_and ? !lit : lit) killed = true;
                    }
                    // Opposite-polarity literals of one source fix it too.
                    for (uint32_t s : sources) {
                        bool pos = false, neg = false;
                        for (const auto& in : unit.inputs)
                            if (in.unit == s) (in.negated ? neg : pos) = true;
                        if (pos && neg) killed = true;
                    }
                }
                if (!killed) {
                    for (uint32_t s : sources) {
                        if (member_of[s] < 0) continue;
                        if (is_xor) {
                            size_t cnt = 0;
                            for (const auto& in : unit.inputs)
                                if (in.unit == s) ++cnt;
                            if (cnt % 2 == 0) continue;
                        }
                        sys_src.push_back(uint32_t(member_of[s]));
                    }
                }
                break;
            }
            case Gate::TruthTable: {
                // Exhaust member-input assignments with the background fixed.
                std::vector<uint32_t> mem_src;
                for (uint32_t s : sources)
                    if (member_of[s] >= 0) mem_src.push_back(s);
                if (mem_src.size() > 20)
                    throw AnalysisTooLarge(unit.id + ": contextual dependence fan-in above 20");
                auto out_for = [&](uint32_t assign) {
                    uint32_t row = 0;
                    for (uint32_t b = 0; b < unit.inputs.size(); ++b) {
                        uint32_t src = unit.inputs[b].unit;
                        bool v;
                        auto it = std::find(mem_src.begin(), mem_src.end(), src);
                        if (it != mem_src.end())
                            v = (assign >> (it - mem_src.begin())) & 1u;
                        else
                            v = u.get(src);
                        if (v ^ unit.inputs[b].negated) row |= (1u << b);
                    }
                    return unit.table[row] != 0;
                };
                for (size_t b = 0; b < mem_src.size(); ++b) {
                    bool matters = false;
                    for (uint32_t a = 0; a < (1u << mem_src.size()) && !matters; ++a)
                        if (out_for(a) != out_for(a ^ (1u << b))) matters = true;
                    if (matters) sys_src.push_back(uint32_t(member_of[mem_src[b]]));
                }
                break;
            }
        }
        std::sort(sys_src.begin(), sys_src.end());
        sys_src.erase(std::unique(sys_src.begin(), sys_src.end()), sys_src.end());
        in_sets[i] = sys_src;
        if (!sys_src.empty()) effect_const[i] = 0;
        for (uint32_t s : sys_src) succ[s].push_back(i);
    }

    // (b) effect side external determination: next state fixed by background.
    for (uint32_t i = 0; i < n; ++i) {
        if (effect_const[i]) {
            DirectedPartition p;
            uint32_t fmask = 1u << i;
            uint32_t rest = 0;
            for (uint32_t j = 0; j < n; ++j)
                if (j != i) rest |= (1u << j);
            if (rest == 0) {
                p.parts = {fmask};
                p.tags = {PartTag::Both};
            } else {
                p.parts = {fmask, rest};
                p.tags = {PartTag::In, PartTag::Out};
            }
            p.cut = cut_matrix(n, p.parts, p.tags);
            return StructuralCut{std::move(p),
                                 "unit " + model.unit(members[i]).id +
                                     " externally determined (effect side)"};
        }
    }

    // (a) strong connectivity of the contextual digraph (Tarjan).
    if (n > 1) {
        std::vector<int> index(n, -1), low(n, 0), onstack(n, 0);
        std::vector<uint32_t> stack;
        int counter = 0;
        int scc_count = 0;
        std::vector<int> scc_of(n, -1);
        std::function<void(uint32_t)> strongconnect = [&](uint32_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            onstack[v] = 1;
            for (uint32_t w : succ[v]) {
                if (w == v) continue;
                if (index[w] < 0) {
                    strongconnect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (onstack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (low[v] == index[v]) {
                while (true) {
                    uint32_t w = stack.back();
                    stack.pop_back();
                    onstack[w] = 0;
                    scc_of[w] = scc_count;
                    if (w == v) break;
                }
                ++scc_count;
            }
        };
        for (uint32_t v = 0; v < n; ++v)
            if (index[v] < 0) strongconnect(v);

        if (scc_count > 1) {
            // A source component (no incoming edges from outside) can have its
            // inputs severed for free.
            std::vector<uint8_t> has_incoming(scc_count, 0);
            for (uint32_t i = 0; i < n; ++i)
                for (uint32_t w : succ[i])
                    if (scc_of[i] != scc_of[w]) has_incoming[scc_of[w]] = 1;
            int src = -1;
            for (int c = 0; c < scc_count && src < 0; ++c)
                if (!has_incoming[c]) src = c;
            uint32_t fmask = 0;
            for (uint32_t i = 0; i < n; ++i)
                if (scc_of[i] == src) fmask |= (1u << i);
            uint32_t rest = 0;
            for (uint32_t i = 0; i < n; ++i)
                if (!((fmask >> i) & 1u)) rest |= (1u << i);
            DirectedPartition p;
            p.parts = {fmask, rest};
            p.tags = {PartTag::In, PartTag::Out};
            p.cut = cut_matrix(n, p.parts, p.tags);
            return StructuralCut{std::move(p), "member digraph not strongly connected"};
        }
    } else {
        // A monad must actually depend on itself.
        if (in_sets[0].empty()) {
            DirectedPartition p;
            p.parts = {1u};
            p.tags = {PartTag::Both};
            p.cut = cut_matrix(1, p.parts, p.tags);
            return StructuralCut{std::move(p), "single unit with no self-connection"};
        }
    }
    return std::nullopt;
}

std::optional<StructuralCut> structural_reducibility(const Subsystem& sub) {
    // Effect-side constancy and contextual connectivity from the CPTs, plus
    // cause-side external determination.
    uint32_t n = sub.size();
    std::vector<std::vector<uint32_t>> succ(n);
    std::vector<uint8_t> effect_const(n, 1), cause_const(n, 1);

    for (uint32_t i = 0; i < n; ++i) {
        const Cpt& e = sub.effect_cpt(i);
        for (uint32_t src = 0; src < n; ++src) {
            if (!((e.input_mask >> src) & 1u)) continue;
            // Does p_on vary along src?
            bool varies = false;
            uint32_t idxbit = 0;
            {
                uint32_t m = e.input_mask, b = 0;
                for (; m; m &= m - 1, ++b)
                    if ((m & -m) == (1u << src)) { idxbit = b; break; }
            }
            for (uint32_t a = 0; a < e.p_on.size() && !varies; ++a)
                if (e.p_on[a] != e.p_on[a ^ (1u << idxbit)]) varies = true;
            if (varies) {
                succ[src].push_back(i);
                effect_const[i] = 0;
            }
        }
        if (e.input_mask == 0) effect_const[i] = 1;

        const Cpt& c = sub.cause_cpt(i);
        if (!sub.has_cause()) {
            cause_const[i] = 0;  // handled upstream as "no cause"
        } else {
            bool on = (sub.state() >> i) & 1u;
            double ref = Subsystem::cpt_prob(c, on, 0, ~0u, 0);
            for (uint32_t a = 1; a < (1u << popcount32(c.input_mask)); ++a) {
                State row = deposit_bits(a, c.input_mask);
                if (std::abs(Subsystem::cpt_prob(c, on, row, ~0u, 0) - ref) > 1e-15) {
                    cause_const[i] = 0;
                    break;
                }
            }
        }
    }

    auto one_vs_rest = [&](uint32_t i, const std::string& why) {
        DirectedPartition p;
        uint32_t fmask = 1u << i;
        uint32_t rest = 0;
        for (uint32_t j = 0; j < n; ++j)
            if (j != i) rest |= (1u << j);
        if (rest == 0) {
            p.parts = {fmask};
            p.tags = {PartTag::Both};
        } else {
            p.parts = {fmask, rest};
            p.tags = {PartTag::In, PartTag::Out};
        }
        p.cut = cut_matrix(n, p.parts, p.tags);
        return StructuralCut{std::move(p), why};
    };

    for (uint32_t i = 0; i < n; ++i)
        if (effect_const[i])
            return one_vs_rest(i, "unit " + sub.unit_id(i) + " externally determined (effect side)");
    for (uint32_t i = 0; i < n; ++i)
        if (cause_const[i])
            return one_vs_rest(i, "unit " + sub.unit_id(i) + " externally determined (cause side)");

    // Strong connectivity over succ.
    if (n == 1) {
        if (succ[0].empty())
            return one_vs_rest(0, "single unit with no self-connection");
        return std::nullopt;
    }
    std::vector<int> index(n, -1), low(n, 0), onstack(n, 0), scc_of(n, -1);
    std::vector<uint32_t> stack;
    int counter = 0, scc_count = 0;
    std::function<void(uint32_t)> strongconnect = [&](uint32_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onstack[v] = 1;
        for (uint32_t w : succ[v]) {
            if (w == v) continue;
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (onstack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                uint32_t w = stack.back();
                stack.pop_back();
                onstack[w] = 0;
                scc_of[w] = scc_count;
                if (w == v) break;
            }
            ++scc_count;
        }
    };
    for (uint32_t v = 0; v < n; ++v)
        if (index[v] < 0) strongconnect(v);
    if (scc_count > 1) {
        std::vector<uint8_t> has_incoming(scc_count, 0);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t w : succ[i])
                if (scc_of[i] != scc_of[w]) has_incoming[scc_of[w]] = 1;
        int src = -1;
        for (int c = 0; c < scc_count && src < 0; ++c)
            if (!has_incoming[c]) src = c;
        uint32_t fmask = 0, rest = 0;
        for (uint32_t i = 0; i < n; ++i)
            (scc_of[i] == src ? fmask : rest) |= (1u << i);
        DirectedPartition p;
        p.parts = {fmask, rest};
        p.tags = {PartTag::In, PartTag::Out};
        p.cut = cut_matrix(n, p.parts, p.tags);
        return StructuralCut{std::move(p), "member digraph not strongly connected"};
    }
    return std::nullopt;
}

SystemPhiResult phi_system(const Subsystem& sub, const EngineConfig& cfg) {
    SystemPhiResult r;
    IntrinsicInfo info = intrinsic_information(sub, cfg);
    r.ii_c = info.ii_c;
    r.ii_e = info.ii_e;
    r.cause_state = info.cause_state;
    r.effect_state = info.effect_state;

    if (!info.has_cause) {
        r.phi = 0;
        r.structural_zero = true;
        r.note = "state unreachable: no previous state exists";
        return r;
    }

    if (auto cert = structural_reducibility(sub)) {
        r.phi = 0;
        r.structural_zero = true;
        r.mip = cert->partition;
        r.note = cert->reason;
        return r;
    }

    if (info.ii_c <= cfg.eps || info.ii_e <= cfg.eps) {
        r.phi = 0;
        r.note = "no intrinsic information";
        return r;
    }

    if (sub.size() > cfg.exact_cap)
        throw AnalysisTooLarge("system of " + std::to_string(sub.size()) +
                               " units exceeds exact-analysis cap " + std::to_string(cfg.exact_cap) +
                               " and no structural certificate applies");

    auto partitions = enumerate_partitions(sub.size(), cfg);
    double best_key = 0, best_phi = 0;
    bool first = true;
    for (const auto& p : partitions) {
        double loss = partition_loss(sub, info, p, cfg);
        double key = loss;
        if (cfg.normalize_system_mip) key /= double(cut_pair_count(p.cut));
        bool take = first || key < best_key - 1e-12 ||
                    (std::abs(key - best_key) <= 1e-12 && loss < best_phi - 1e-12);
        if (take) {
            first = false;
            best_key = key;
            best_phi = loss;
            r.mip = p;
        }
        if (best_phi <= cfg.eps && best_key <= 0) break;
    }
    r.phi = best_phi <= cfg.eps ? 0.0 : best_phi;
    return r;
}

}  // namespace iit
