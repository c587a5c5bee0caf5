#include "iit/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "iit/kernels.hpp"

namespace iit {

namespace {

uint32_t cpt_dependence_mask(const Cpt& cpt) {
    uint32_t dep = 0;
    uint32_t nbits = popcount32(cpt.input_mask);
    for (uint32_t b = 0; b < nbits; ++b) {
        for (uint32_t a = 0; a < cpt.p_on.size(); ++a) {
            if (cpt.p_on[a] != cpt.p_on[a ^ (1u << b)]) {
                dep |= deposit_bits(1u << b, cpt.input_mask);
                break;
            }
        }
    }
    return dep;
}

std::vector<uint32_t> mask_bits(uint32_t mask) {
    std::vector<uint32_t> out;
    for (uint32_t m = mask; m; m &= m - 1) out.push_back(static_cast<uint32_t>(__builtin_ctz(m)));
    return out;
}

// Joint repertoires. The marginalized units are shared across purview units,
// so correlations injected by common inputs are kept (the factorized form
// loses them and misses the published reference values).
struct MechWorkspace {
    const Subsystem* sub;
    uint32_t n;
    std::vector<uint32_t> effect_dep, cause_dep;
    std::vector<double> scratch;

    explicit MechWorkspace(const Subsystem& s) : sub(&s), n(s.size()) {
        effect_dep.resize(n);
        cause_dep.resize(n);
        for (uint32_t i = 0; i < n; ++i) {
            effect_dep[i] = cpt_dependence_mask(s.effect_cpt(i));
            cause_dep[i] = cpt_dependence_mask(s.cause_cpt(i));
        }
    }

    // pi_e(z | m): average over assignments of S\M of the joint distribution
    // of the purview units' next states.
    void effect_rep(uint32_t mech, uint32_t purview, std::vector<double>& out) const {
        auto zb = mask_bits(purview);
        out.assign(size_t(1) << zb.size(), 0.0);
        uint32_t marg = ((1u << n) - 1) & ~mech;
        uint32_t nm = popcount32(marg);
        std::vector<double> p1(zb.size());
        double w = 1.0 / double(size_t(1) << nm);
        for (uint32_t a = 0; a < (1u << nm); ++a) {
            State row = (sub->state() & mech) | deposit_bits(a, marg);
            for (size_t b = 0; b < zb.size(); ++b)
                p1[b] = Subsystem::cpt_prob(sub->effect_cpt(zb[b]), true, row, ~0u, 0);
            // accumulate the product distribution for this completion
            for (size_t z = 0; z < out.size(); ++z) {
                double p = w;
                for (size_t b = 0; b < zb.size() && p > 0; ++b)
                    p *= ((z >> b) & 1u) ? p1[b] : 1.0 - p1[b];
                out[z] += p;
            }
        }
    }

    // pi_c(z | m): posterior over previous purview states given the mechanism
    // units' current states, uniform prior over previous member states.
    // Returns false when the mechanism state has no possible cause.
    bool cause_rep(uint32_t mech, uint32_t purview, std::vector<double>& out) const {
        auto zb = mask_bits(purview);
        out.assign(size_t(1) << zb.size(), 0.0);
        double total = 0;
        for (State prev = 0; prev < (1u << n); ++prev) {
            double lik = 1.0;
            for (uint32_t mm = mech; mm && lik > 0; mm &= mm - 1) {
                uint32_t j = static_cast<uint32_t>(__builtin_ctz(mm));
                lik *= Subsystem::cpt_prob(sub->cause_cpt(j), (sub->state() >> j) & 1u, prev, ~0u, 0);
            }
            if (lik <= 0) continue;
            out[extract_bits(prev, purview)] += lik;
            total += lik;
        }
        if (total <= 0) return false;
        for (auto& x : out) x /= total;
        return true;
    }
};

// Pair partitions of (mechanism, purview) into >= 2 blocks; elements are the
// mechanism units and purview units as separate items.
void for_each_pair_partition(
    const std::vector<uint32_t>& mbits, const std::vector<uint32_t>& zbits,
    const std::function<void(const std::vector<std::pair<uint32_t, uint32_t>>&)>& fn) {
    uint32_t k = static_cast<uint32_t>(mbits.size() + zbits.size());
    if (k < 2) return;
    std::vector<uint32_t> assign(k, 0);
    std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t i, uint32_t maxb) {
        if (i == k) {
            if (maxb == 0) return;
            std::vector<std::pair<uint32_t, uint32_t>> parts(maxb + 1, {0u, 0u});
            for (uint32_t e = 0; e < k; ++e) {
                if (e < mbits.size()) parts[assign[e]].first |= (1u << mbits[e]);
                else parts[assign[e]].second |= (1u << zbits[e - mbits.size()]);
            }
            fn(parts);
            return;
        }
        for (uint32_t b = 0; b <= maxb + 1 && b < k; ++b) {
            assign[i] = b;
            rec(i + 1, std::max(maxb, b));
        }
    };
    rec(1, 0);
}

// Partitioned repertoire: product over parts of each part's joint repertoire
// (cause parts are normalized; an empty mechanism part is unconstrained).
bool partitioned_rep(const MechWorkspace& ws, uint32_t purview,
                     const std::vector<std::pair<uint32_t, uint32_t>>& parts, bool effect_side,
                     std::vector<double>& out) {
    auto zb = mask_bits(purview);
    out.assign(size_t(1) << zb.size(), 1.0);
    std::vector<double> part_vec;
    for (const auto& [mm, zz] : parts) {
        if (zz == 0) continue;
        auto pb = mask_bits(zz);
        if (effect_side) {
            ws.effect_rep(mm, zz, part_vec);
        } else {
            if (mm == 0) {
                part_vec.assign(size_t(1) << pb.size(), 1.0 / double(size_t(1) << pb.size()));
            } else if (!ws.cause_rep(mm, zz, part_vec)) {
                return false;
            }
        }
        for (size_t a = 0; a < out.size(); ++a) {
            State z = deposit_bits(static_cast<uint32_t>(a), purview);
            out[a] *= part_vec[extract_bits(z, zz)];
        }
    }
    return true;
}

// Lossless-split certificate for joint repertoires: group mechanism and
// purview units by (a) contextual edges between them and (b) shared
// marginalized inputs; a disconnected grouping factorizes the repertoire
// exactly, so the pairing is reducible.
bool free_split_exists(const MechWorkspace& ws, uint32_t mech, uint32_t purview,
                       bool effect_side) {
    auto mb = mask_bits(mech);
    auto zb = mask_bits(purview);
    uint32_t k = static_cast<uint32_t>(mb.size() + zb.size());
    if (k < 2) return false;
    std::vector<uint32_t> parent(k);
    for (uint32_t i = 0; i < k; ++i) parent[i] = i;
    std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](uint32_t a, uint32_t b) { parent[find(a)] = find(b); };

    if (effect_side) {
        for (size_t a = 0; a < mb.size(); ++a)
            for (size_t b = 0; b < zb.size(); ++b)
                if ((ws.effect_dep[zb[b]] >> mb[a]) & 1u) unite(uint32_t(a), uint32_t(mb.size() + b));
        // purview units sharing a marginalized (non-mechanism) input
        for (size_t b1 = 0; b1 < zb.size(); ++b1)
            for (size_t b2 = b1 + 1; b2 < zb.size(); ++b2) {
                uint32_t shared = ws.effect_dep[zb[b1]] & ws.effect_dep[zb[b2]] & ~mech;
                if (shared) unite(uint32_t(mb.size() + b1), uint32_t(mb.size() + b2));
            }
    } else {
        for (size_t a = 0; a < mb.size(); ++a)
            for (size_t b = 0; b < zb.size(); ++b)
                if ((ws.cause_dep[mb[a]] >> zb[b]) & 1u) unite(uint32_t(a), uint32_t(mb.size() + b));
        // mechanism units sharing a marginalized (non-purview) prior input
        for (size_t a1 = 0; a1 < mb.size(); ++a1)
            for (size_t a2 = a1 + 1; a2 < mb.size(); ++a2) {
                uint32_t shared = ws.cause_dep[mb[a1]] & ws.cause_dep[mb[a2]] & ~purview;
                if (shared) unite(uint32_t(a1), uint32_t(a2));
            }
    }
    uint32_t root = find(0);
    for (uint32_t i = 1; i < k; ++i)
        if (find(i) != root) return true;
    return false;
}

uint32_t severed_pairs(const std::vector<std::pair<uint32_t, uint32_t>>& parts, uint32_t mech,
                       uint32_t purview) {
    uint32_t sev = 0;
    for (uint32_t a : mask_bits(mech))
        for (uint32_t b : mask_bits(purview)) {
            bool same = false;
            for (const auto& [mm, zz] : parts)
                if (((mm >> a) & 1u) && ((zz >> b) & 1u)) same = true;
            if (!same) ++sev;
        }
    return sev;
}

PurviewValue evaluate_purview_ws(const MechWorkspace& ws, const Subsystem& sub, uint32_t mechanism,
                                 uint32_t purview, bool effect_side, State system_state,
                                 const EngineConfig& cfg) {
    PurviewValue pv;
    pv.state = system_state & purview;
    auto mb = mask_bits(mechanism);
    auto zb = mask_bits(purview);
    if (free_split_exists(ws, mechanism, purview, effect_side)) return pv;
    std::vector<double> rep, unc, cut;

    if (effect_side) {
        ws.effect_rep(mechanism, purview, rep);
        ws.effect_rep(0, purview, unc);
    } else {
        if (!sub.has_cause()) return pv;
        if (!ws.cause_rep(mechanism, purview, rep)) return pv;
        unc.assign(rep.size(), 1.0 / double(rep.size()));
    }

    // The specified state is the system's cause/effect state restricted to
    // the purview; a distinction enters the structure only where its
    // constraint is congruent with the system's.
    uint32_t zs = extract_bits(system_state, purview);
    if (rep[zs] <= 0) return pv;
    double ii = rep[zs] * std::log2(rep[zs] / std::max(unc[zs], 1e-300));
    if (ii <= cfg.eps) return pv;

    double best_key = 1e30, best_raw = 1e30;
    bool aborted = false;
    for_each_pair_partition(mb, zb, [&](const std::vector<std::pair<uint32_t, uint32_t>>& parts) {
        if (aborted) return;
        std::vector<double> cutrep;
        double q = 0;
        if (partitioned_rep(ws, purview, parts, effect_side, cutrep)) q = cutrep[zs];
        double p = rep[zs];
        double raw = (q > 0) ? std::max(0.0, p * std::log2(p / q)) : 1e30;
        double key = raw;
        if (cfg.normalize_mechanism_mip) {
            uint32_t sev = severed_pairs(parts, mechanism, purview);
            key = sev ? raw / sev : raw;
        }
        if (key < best_key - 1e-15 ||
            (std::abs(key - best_key) <= 1e-15 && raw < best_raw - 1e-15)) {
            best_key = key;
            best_raw = raw;
        }
        if (best_raw <= cfg.eps) aborted = true;
    });
    pv.phi = best_raw <= cfg.eps ? 0.0 : best_raw;
    return pv;
}

std::optional<Mice> maximal_purview_ws(const MechWorkspace& ws, const Subsystem& sub,
                                       uint32_t mechanism, bool effect_side, State system_state,
                                       const EngineConfig& cfg) {
    uint32_t full = (1u << sub.size()) - 1;
    Mice best;
    bool found = false;
    auto lex_less = [](uint32_t a, uint32_t b) {
        while (a && b) {
            uint32_t la = a & -a, lb = b & -b;
            if (la != lb) return la < lb;
            a &= a - 1;
            b &= b - 1;
        }
        return a == 0 && b != 0;
    };
    for (uint32_t purview = 1; purview <= full; ++purview) {
        auto pv = evaluate_purview_ws(ws, sub, mechanism, purview, effect_side, system_state, cfg);
        if (pv.phi <= cfg.eps) continue;
        bool better = false;
        if (!found) better = true;
        else if (pv.phi > best.phi + cfg.eps) better = true;
        else if (pv.phi >= best.phi - cfg.eps) {
            uint32_t pc_new = popcount32(purview), pc_old = popcount32(best.purview);
            if (pc_new > pc_old) better = true;
            else if (pc_new == pc_old && lex_less(purview, best.purview)) better = true;
        }
        if (better) {
            best.purview = purview;
            best.state = pv.state;
            best.phi = pv.phi;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

}  // namespace

PurviewValue evaluate_purview(const Subsystem& sub, uint32_t mechanism, uint32_t purview,
                              bool effect_side, const EngineConfig& cfg) {
    auto info = intrinsic_information(sub, cfg);
    MechWorkspace ws(sub);
    return evaluate_purview_ws(ws, sub, mechanism, purview, effect_side,
                               effect_side ? info.effect_state : info.cause_state, cfg);
}

std::optional<Mice> maximal_purview(const Subsystem& sub, uint32_t mechanism, bool effect_side,
                                    const EngineConfig& cfg) {
    auto info = intrinsic_information(sub, cfg);
    MechWorkspace ws(sub);
    return maximal_purview_ws(ws, sub, mechanism, effect_side,
                              effect_side ? info.effect_state : info.cause_state, cfg);
}

std::optional<Distinction> distinction(const Subsystem& sub, uint32_t mechanism,
                                       const EngineConfig& cfg) {
    auto info = intrinsic_information(sub, cfg);
    MechWorkspace ws(sub);
    if (mechanism == 0) return std::nullopt;
    auto cause = maximal_purview_ws(ws, sub, mechanism, false, info.cause_state, cfg);
    if (!cause) return std::nullopt;
    auto effect = maximal_purview_ws(ws, sub, mechanism, true, info.effect_state, cfg);
    if (!effect) return std::nullopt;
    Distinction d;
    d.mechanism = mechanism;
    d.mech_state = sub.state() & mechanism;
    d.cause = *cause;
    d.effect = *effect;
    d.phi = std::min(cause->phi, effect->phi);
    if (d.phi <= cfg.eps) return std::nullopt;
    return d;
}

std::vector<Distinction> all_distinctions(const Subsystem& sub, const SystemPhiResult& system,
                                          const EngineConfig& cfg) {
    std::vector<Distinction> out;
    MechWorkspace ws(sub);
    uint32_t full = (1u << sub.size()) - 1;
    for (uint32_t m = 1; m <= full; ++m) {
        auto cause = maximal_purview_ws(ws, sub, m, false, system.cause_state, cfg);
        if (!cause) continue;
        auto effect = maximal_purview_ws(ws, sub, m, true, system.effect_state, cfg);
        if (!effect) continue;
        Distinction d;
        d.mechanism = m;
        d.mech_state = sub.state() & m;
        d.cause = *cause;
        d.effect = *effect;
        d.phi = std::min(cause->phi, effect->phi);
        if (d.phi <= cfg.eps) continue;
        out.push_back(d);
    }
    return out;
}

namespace {
// Tuple cardinality of a purview with its state: one (unit, bit) pair per
// purview unit; the union across both purviews of a distinction counts a
// shared unit twice when the two sides disagree on its state.
uint32_t tuple_union_size(const Distinction& d) {
    uint32_t count = 0;
    uint32_t both = d.cause.purview & d.effect.purview;
    count += popcount32(d.cause.purview) + popcount32(d.effect.purview);
    for (uint32_t m = both; m; m &= m - 1) {
        uint32_t x = static_cast<uint32_t>(__builtin_ctz(m));
        if (((d.cause.state >> x) & 1u) == ((d.effect.state >> x) & 1u)) --count;
    }
    return count;
}
}  // namespace

std::optional<Relation> relation(const std::vector<Distinction>& ds,
                                 const std::vector<uint32_t>& subset) {
    if (subset.empty()) return std::nullopt;
    Relation r;
    r.members = subset;
    uint32_t candidate_units = ~0u;
    for (uint32_t idx : subset) candidate_units &= ds[idx].purview_union();
    if (subset.size() == 1) {
        const auto& d = ds[subset[0]];
        candidate_units = d.cause.purview & d.effect.purview;
    }
    if (candidate_units == 0) return std::nullopt;

    uint32_t tuple_overlap = 0;  // counts (unit, bit) pairs in the face-overlap union
    for (uint32_t m = candidate_units; m; m &= m - 1) {
        uint32_t x = static_cast<uint32_t>(__builtin_ctz(m));
        uint32_t xbit = 1u << x;
        bool can0 = true, can1 = true;
        if (subset.size() == 1) {
            const auto& d = ds[subset[0]];
            bool cb = (d.cause.state >> x) & 1u;
            bool eb = (d.effect.state >> x) & 1u;
            if (cb != eb) { can0 = can1 = false; }
            else { can0 = !cb; can1 = cb; }
        } else {
            for (uint32_t idx : subset) {
                const auto& d = ds[idx];
                bool v0 = false, v1 = false;
                if ((d.cause.purview >> x) & 1u)
                    (((d.cause.state >> x) & 1u) ? v1 : v0) = true;
                if ((d.effect.purview >> x) & 1u)
                    (((d.effect.state >> x) & 1u) ? v1 : v0) = true;
                can0 = can0 && v0;
                can1 = can1 && v1;
            }
        }
        if (can0 || can1) {
            r.overlap |= xbit;
            tuple_overlap += (can0 ? 1u : 0u) + (can1 ? 1u : 0u);
            if (!can0 && can1) r.overlap_state |= xbit;  // prefer 0 on double hits
        }
    }
    if (r.overlap == 0) return std::nullopt;

    double min_term = 1e30;
    for (uint32_t idx : subset) {
        const auto& d = ds[idx];
        double term = d.phi / double(tuple_union_size(d));
        min_term = std::min(min_term, term);
        RelationFace f;
        f.distinction = idx;
        f.uses_cause = (d.cause.purview & r.overlap) != 0;
        f.uses_effect = (d.effect.purview & r.overlap) != 0;
        r.faces.push_back(f);
    }
    r.phi = double(tuple_overlap) * min_term;
    return r;
}

CauseEffectStructure unfold(const Subsystem& sub, const SystemPhiResult& system,
                            const EngineConfig& cfg) {
    CauseEffectStructure ces;
    ces.units = sub.members();
    for (uint32_t i = 0; i < sub.size(); ++i) ces.unit_ids.push_back(sub.unit_id(i));
    ces.state = sub.state();
    ces.system = system;
    ces.distinctions = all_distinctions(sub, system, cfg);

    size_t nd = ces.distinctions.size();
    if (nd > 0) {
        if ((uint64_t(1) << nd) > cfg.relation_scan_cap)
            throw RelationScanTooLarge("relation scan over 2^" + std::to_string(nd) +
                                       " candidate subsets exceeds the cap");
        std::vector<uint32_t> subset;
        for (uint64_t mask = 1; mask < (uint64_t(1) << nd); ++mask) {
            subset.clear();
            for (uint32_t i = 0; i < nd; ++i)
                if ((mask >> i) & 1u) subset.push_back(i);
            auto rel = relation(ces.distinctions, subset);
            if (rel) ces.relations.push_back(*rel);
        }
    }
    for (const auto& d : ces.distinctions) ces.sum_phi_d += d.phi;
    for (const auto& r : ces.relations) ces.sum_phi_r += r.phi;
    ces.big_phi = ces.sum_phi_d + ces.sum_phi_r;
    return ces;
}

namespace {

uint32_t remap_mask(uint32_t mask, const std::vector<uint32_t>& perm) {
    uint32_t out = 0;
    for (uint32_t i = 0; i < perm.size(); ++i)
        if ((mask >> i) & 1u) out |= (1u << perm[i]);
    return out;
}

struct DistKey {
    uint32_t mech, mstate, cpur, cstate, epur, estate;
    long long phic, phie;
    bool operator<(const DistKey& o) const {
        return std::tie(mech, mstate, cpur, cstate, epur, estate, phic, phie) <
               std::tie(o.mech, o.mstate, o.cpur, o.cstate, o.epur, o.estate, o.phic, o.phie);
    }
    bool operator==(const DistKey& o) const {
        return std::tie(mech, mstate, cpur, cstate, epur, estate, phic, phie) ==
               std::tie(o.mech, o.mstate, o.cpur, o.cstate, o.epur, o.estate, o.phic, o.phie);
    }
};

std::vector<DistKey> dist_keys(const CauseEffectStructure& c, const std::vector<uint32_t>* perm,
                               double tol) {
    std::vector<DistKey> keys;
    for (const auto& d : c.distinctions) {
        DistKey k;
        k.mech = perm ? remap_mask(d.mechanism, *perm) : d.mechanism;
        k.mstate = perm ? remap_mask(d.mech_state, *perm) : d.mech_state;
        k.cpur = perm ? remap_mask(d.cause.purview, *perm) : d.cause.purview;
        k.cstate = perm ? remap_mask(d.cause.state, *perm) : d.cause.state;
        k.epur = perm ? remap_mask(d.effect.purview, *perm) : d.effect.purview;
        k.estate = perm ? remap_mask(d.effect.state, *perm) : d.effect.state;
        k.phic = llround(d.cause.phi / tol);
        k.phie = llround(d.effect.phi / tol);
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

CesEquivalenceReport ces_equivalent(const CauseEffectStructure& a, const CauseEffectStructure& b,
                                    double tol) {
    CesEquivalenceReport rep;
    if (a.units.size() != b.units.size()) {
        rep.obstruction = "unit counts differ";
        return rep;
    }
    if (a.distinctions.size() != b.distinctions.size()) {
        rep.obstruction = "distinction counts differ (" + std::to_string(a.distinctions.size()) +
                          " vs " + std::to_string(b.distinctions.size()) + ")";
        return rep;
    }
    if (a.relations.size() != b.relations.size()) {
        rep.obstruction = "relation counts differ (" + std::to_string(a.relations.size()) +
                          " vs " + std::to_string(b.relations.size()) + ")";
        return rep;
    }
    std::map<uint32_t, int> ha, hb;
    for (const auto& d : a.distinctions) ha[popcount32(d.mechanism)]++;
    for (const auto& d : b.distinctions) hb[popcount32(d.mechanism)]++;
    if (ha != hb) {
        rep.obstruction = "mechanism order histograms differ";
        return rep;
    }
    auto phis = [&](const CauseEffectStructure& c) {
        std::vector<long long> v;
        for (const auto& d : c.distinctions) v.push_back(llround(d.phi / tol));
        for (const auto& r : c.relations) v.push_back(llround(r.phi / tol));
        std::sort(v.begin(), v.end());
        return v;
    };
    if (phis(a) != phis(b)) {
        rep.obstruction = "phi multisets differ";
        return rep;
    }
    if (std::abs(a.big_phi - b.big_phi) > tol * std::max(1.0, std::abs(b.big_phi))) {
        rep.obstruction = "big phi differs";
        return rep;
    }

    uint32_t n = static_cast<uint32_t>(a.units.size());
    std::vector<uint32_t> perm(n);
    for (uint32_t i = 0; i < n; ++i) perm[i] = i;
    auto target = dist_keys(b, nullptr, tol);
    do {
        if (dist_keys(a, &perm, tol) == target) {
            rep.isomorphic = true;
            rep.witness = perm;
            return rep;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    rep.obstruction = "no unit relabeling matches the distinction sets";
    return rep;
}

}  // namespace iit
