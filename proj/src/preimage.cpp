#include "iit/preimage.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>

namespace iit {

namespace {

constexpr size_t kDenseArityCap = 16;

struct DenseFactor {
    std::vector<uint32_t> vars;  // global unit indices, ascending
    std::vector<double> table;   // 2^|vars|, little-endian over vars
};

// [gate(literals) == out] for AND/OR/XOR gates too wide to tabulate.
// Vars that end up private to the factor are folded in closed form.
struct WideFactor {
    Gate kind = Gate::And;
    bool out = false;
    std::vector<uint32_t> vars;
    std::vector<uint8_t> negated;
    std::vector<double> w0, w1;  // absorbed single-var weights
};

double private_weight_and_or(const WideFactor& f, const std::vector<size_t>& priv, bool all_match,
                             bool is_and) {
    // is_and: weight of private assignments where all private literals are
    // true (all_match) or the total weight (otherwise handled by caller).
    double prod_match = 1.0, prod_total = 1.0;
    for (size_t i : priv) {
        double wt = f.negated[i] ? f.w0[i] : f.w1[i];
        double wf = f.negated[i] ? f.w1[i] : f.w0[i];
        prod_match *= is_and ? wt : wf;  // OR: "match" = all literals false
        prod_total *= wt + wf;
    }
    return all_match ? prod_match : prod_total;
}

}  // namespace

PreimagePosterior preimage_posterior_bruteforce(const CausalModel& model, const BigState& u_now,
                                                const std::vector<uint32_t>& query) {
    if (model.size() > 24) throw std::runtime_error("bruteforce preimage limited to 24 units");
    uint32_t n = model.size();
    PreimagePosterior out;
    out.query = query;
    out.prob.assign(size_t(1) << query.size(), 0.0);
    State now = 0;
    for (uint32_t i = 0; i < n; ++i)
        if (u_now.get(i)) now |= (1u << i);
    double total = 0;
    for (uint64_t prev = 0; prev < (uint64_t(1) << n); ++prev) {
        if (model.step_small(static_cast<State>(prev)) != now) continue;
        uint32_t idx = 0;
        for (size_t b = 0; b < query.size(); ++b)
            if ((prev >> query[b]) & 1u) idx |= (1u << b);
        out.prob[idx] += 1.0;
        total += 1.0;
    }
    if (total == 0) {
        out.empty = true;
        return out;
    }
    for (auto& p : out.prob) p /= total;
    return out;
}

PreimagePosterior preimage_posterior(const CausalModel& model, const BigState& u_now,
                                     const std::vector<uint32_t>& query) {
    PreimagePosterior result;
    result.query = query;

    std::vector<std::unique_ptr<DenseFactor>> dense;
    std::vector<std::unique_ptr<WideFactor>> wide;
    double scalar = 1.0;  // product of fully-collapsed factors (0 or positive)

    // Build one constraint factor per unit over its deduped sources.
    for (uint32_t j = 0; j < model.size(); ++j) {
        const UnitSpec& u = model.unit(j);
        std::vector<uint32_t> sources;
        for (const auto& in : u.inputs)
            if (std::find(sources.begin(), sources.end(), in.unit) == sources.end())
                sources.push_back(in.unit);
        std::sort(sources.begin(), sources.end());
        bool want = u_now.get(j);

        if (sources.size() <= kDenseArityCap) {
            auto f = std::make_unique<DenseFactor>();
            f->vars = sources;
            f->table.assign(size_t(1) << sources.size(), 0.0);
            for (uint32_t a = 0; a < (1u << sources.size()); ++a) {
                auto bit_at = [&](uint32_t unit) {
                    for (size_t b = 0; b < sources.size(); ++b)
                        if (sources[b] == unit) return ((a >> b) & 1u) != 0u;
                    return false;
                };
                bool v = false;
                switch (u.gate) {
                    case Gate::Copy: v = bit_at(u.inputs[0].unit) ^ u.inputs[0].negated; break;
                    case Gate::And: {
                        v = true;
                        for (const auto& in : u.inputs) v = v && (bit_at(in.unit) ^ in.negated);
                        break;
                    }
                    case Gate::Or:
                    case Gate::GeneralizedOr: {
                        v = false;
                        for (const auto& in : u.inputs) v = v || (bit_at(in.unit) ^ in.negated);
                        break;
                    }
                    case Gate::Xor: {
                        v = false;
                        for (const auto& in : u.inputs) v ^= bit_at(in.unit) ^ in.negated;
                        break;
                    }
                    case Gate::TruthTable: {
                        uint32_t row = 0;
                        for (uint32_t b = 0; b < u.inputs.size(); ++b)
                            if (bit_at(u.inputs[b].unit) ^ u.inputs[b].negated) row |= (1u << b);
                        v = u.table[row] != 0;
                        break;
                    }
                }
                if (v == want) f->table[a] = 1.0;
            }
            if (sources.empty()) {
                scalar *= f->table[0];
                continue;
            }
            dense.push_back(std::move(f));
        } else {
            if (u.gate == Gate::TruthTable)
                throw std::runtime_error(u.id + ": truth table too wide for preimage analysis");
            auto f = std::make_unique<WideFactor>();
            f->kind = (u.gate == Gate::GeneralizedOr) ? Gate::Or : u.gate;
            f->out = want;
            // Wide path keeps one literal per source; repeated sources are not
            // supported here (generated circuits never repeat them).
            for (const auto& in : u.inputs) {
                if (std::find(f->vars.begin(), f->vars.end(), in.unit) != f->vars.end())
                    throw std::runtime_error(u.id + ": repeated source in wide gate");
                f->vars.push_back(in.unit);
                f->negated.push_back(in.negated);
                f->w0.push_back(1.0);
                f->w1.push_back(1.0);
            }
            wide.push_back(std::move(f));
        }
    }

    if (scalar == 0.0) {
        result.empty = true;
        result.prob.assign(size_t(1) << query.size(), 0.0);
        return result;
    }

    // Incidence: variable -> how many factors mention it (query vars pinned).
    std::map<uint32_t, int> uses;
    for (const auto& f : dense)
        for (uint32_t v : f->vars) uses[v]++;
    for (const auto& f : wide)
        for (uint32_t v : f->vars) uses[v]++;
    for (uint32_t v : query) uses[v] += 1000000;  // never eliminate

    // Reduce wide factors: absorb single-variable dense constraints into
    // per-variable weights, fold the now-private variables in closed form,
    // and tabulate over whatever variables remain shared.
    for (auto& f : wide) {
        // Absorb dense factors that touch exactly one of f's variables and
        // nothing else.
        for (size_t i = 0; i < f->vars.size(); ++i) {
            uint32_t v = f->vars[i];
            if (std::find(query.begin(), query.end(), v) != query.end()) continue;
            while (uses[v] == 2) {
                auto it = std::find_if(dense.begin(), dense.end(), [&](const auto& d) {
                    return d->vars.size() == 1 && d->vars[0] == v;
                });
                if (it == dense.end()) break;
                f->w0[i] *= (*it)->table[0];
                f->w1[i] *= (*it)->table[1];
                dense.erase(it);
                uses[v]--;
            }
        }
        std::vector<size_t> priv, shared;
        for (size_t i = 0; i < f->vars.size(); ++i) {
            if (uses[f->vars[i]] == 1) priv.push_back(i);
            else shared.push_back(i);
        }
        if (shared.size() > kDenseArityCap)
            throw std::runtime_error("wide gate shares too many sources");

        auto weight_given_shared = [&](uint32_t shared_assign) -> double {
            if (f->kind == Gate::Xor) {
                double prod_sum = 1.0, prod_diff = 1.0;
                bool parity = f->out;
                for (size_t i : priv) {
                    prod_sum *= f->w0[i] + f->w1[i];
                    prod_diff *= f->w0[i] - f->w1[i];
                    parity ^= f->negated[i];
                }
                for (size_t b = 0; b < shared.size(); ++b) {
                    size_t i = shared[b];
                    bool lit = (((shared_assign >> b) & 1u) != 0) ^ f->negated[i];
                    parity ^= lit;
                }
                // parity now holds the required parity of the private raw vars
                return 0.5 * (prod_sum + (parity ? -1.0 : 1.0) * prod_diff);
            }
            bool is_and = f->kind == Gate::And;
            bool shared_absorbing = false;
            for (size_t b = 0; b < shared.size(); ++b) {
                size_t i = shared[b];
                bool lit = (((shared_assign >> b) & 1u) != 0) ^ f->negated[i];
                if (is_and ? !lit : lit) shared_absorbing = true;
            }
            double total = private_weight_and_or(*f, priv, false, is_and);
            double match = private_weight_and_or(*f, priv, true, is_and);
            if (is_and) {
                if (shared_absorbing) return f->out ? 0.0 : total;
                return f->out ? match : total - match;
            }
            if (shared_absorbing) return f->out ? total : 0.0;
            return f->out ? total - match : match;
        };

        if (shared.empty()) {
            scalar *= weight_given_shared(0);
            for (uint32_t v : f->vars) {
                if (--uses[v] == 0) uses.erase(v);
            }
            continue;
        }
        auto d = std::make_unique<DenseFactor>();
        for (size_t i : shared) d->vars.push_back(f->vars[i]);
        // Keep vars ascending for the dense machinery.
        std::vector<size_t> order(shared.size());
        for (size_t b = 0; b < order.size(); ++b) order[b] = b;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return d->vars[a] < d->vars[b]; });
        std::sort(d->vars.begin(), d->vars.end());
        d->table.assign(size_t(1) << shared.size(), 0.0);
        for (uint32_t a = 0; a < d->table.size(); ++a) {
            // a indexes the sorted var order; remap to the factor's order.
            uint32_t sa = 0;
            for (size_t b = 0; b < order.size(); ++b)
                if ((a >> b) & 1u) sa |= (1u << order[b]);
            d->table[a] = weight_given_shared(sa);
        }
        for (size_t i : priv) {
            if (--uses[f->vars[i]] == 0) uses.erase(f->vars[i]);
        }
        dense.push_back(std::move(d));
    }
    wide.clear();

    if (scalar == 0.0) {
        result.empty = true;
        result.prob.assign(size_t(1) << query.size(), 0.0);
        return result;
    }

    // Variable elimination over the dense factors, min-degree greedy.
    auto join_and_eliminate = [&](uint32_t v) {
        std::vector<uint32_t> joined_vars;
        std::vector<std::unique_ptr<DenseFactor>> touching;
        for (auto it = dense.begin(); it != dense.end();) {
            if (std::find((*it)->vars.begin(), (*it)->vars.end(), v) != (*it)->vars.end()) {
                for (uint32_t w : (*it)->vars)
                    if (std::find(joined_vars.begin(), joined_vars.end(), w) == joined_vars.end())
                        joined_vars.push_back(w);
                touching.push_back(std::move(*it));
                it = dense.erase(it);
            } else {
                ++it;
            }
        }
        std::sort(joined_vars.begin(), joined_vars.end());
        if (joined_vars.size() > 22)
            throw std::runtime_error("preimage elimination exceeded width cap");
        size_t nj = joined_vars.size();
        std::vector<double> joint(size_t(1) << nj, 1.0);
        for (const auto& f : touching) {
            std::vector<uint32_t> pos(f->vars.size());
            for (size_t b = 0; b < f->vars.size(); ++b)
                pos[b] = static_cast<uint32_t>(
                    std::lower_bound(joined_vars.begin(), joined_vars.end(), f->vars[b]) -
                    joined_vars.begin());
            for (size_t a = 0; a < joint.size(); ++a) {
                uint32_t fa = 0;
                for (size_t b = 0; b < pos.size(); ++b)
                    if ((a >> pos[b]) & 1u) fa |= (1u << b);
                joint[a] *= f->table[fa];
            }
        }
        size_t vpos = std::lower_bound(joined_vars.begin(), joined_vars.end(), v) -
                      joined_vars.begin();
        auto out = std::make_unique<DenseFactor>();
        out->vars = joined_vars;
        out->vars.erase(out->vars.begin() + vpos);
        out->table.assign(size_t(1) << (nj - 1), 0.0);
        for (size_t a = 0; a < joint.size(); ++a) {
            size_t lo = a & ((size_t(1) << vpos) - 1);
            size_t hi = (a >> (vpos + 1)) << vpos;
            out->table[hi | lo] += joint[a];
        }
        // Recompute incidence for the touched variables exactly.
        for (uint32_t w : joined_vars) {
            if (w == v) { uses.erase(v); continue; }
            int c = 0;
            for (const auto& f : dense)
                if (std::find(f->vars.begin(), f->vars.end(), w) != f->vars.end()) ++c;
            c += 1;  // the new factor
            bool is_query = std::find(query.begin(), query.end(), w) != query.end();
            uses[w] = c + (is_query ? 1000000 : 0);
        }
        if (out->vars.empty()) scalar *= out->table[0];
        else dense.push_back(std::move(out));
    };

    while (true) {
        // Pick the non-query variable with the fewest incident factors.
        uint32_t best = 0;
        int best_uses = -1;
        for (const auto& [v, c] : uses) {
            if (c >= 1000000) continue;
            if (best_uses < 0 || c < best_uses) { best = v; best_uses = c; }
        }
        if (best_uses < 0) break;
        join_and_eliminate(best);
        if (scalar == 0.0) break;
    }

    result.prob.assign(size_t(1) << query.size(), 0.0);
    if (scalar == 0.0) {
        result.empty = true;
        return result;
    }

    // Join what remains (factors over query vars only).
    std::vector<double> joint(size_t(1) << query.size(), scalar);
    for (const auto& f : dense) {
        std::vector<uint32_t> pos(f->vars.size());
        for (size_t b = 0; b < f->vars.size(); ++b) {
            auto it = std::find(query.begin(), query.end(), f->vars[b]);
            if (it == query.end())
                throw std::runtime_error("internal: leftover non-query variable");
            pos[b] = static_cast<uint32_t>(it - query.begin());
        }
        for (size_t a = 0; a < joint.size(); ++a) {
            uint32_t fa = 0;
            for (size_t b = 0; b < pos.size(); ++b)
                if ((a >> pos[b]) & 1u) fa |= (1u << b);
            joint[a] *= f->table[fa];
        }
    }
    double total = 0;
    for (double x : joint) total += x;
    if (total == 0) {
        result.empty = true;
        return result;
    }
    for (auto& x : joint) x /= total;
    result.prob = std::move(joint);
    return result;
}

}  // namespace iit
