#include "iit/complexes.hpp"

#include <algorithm>

namespace iit {

namespace {

// Candidate order: subset size descending, then lexicographic on the index
// list. The largest maximum claims units first.
bool candidate_order(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
}

std::vector<std::vector<uint32_t>> all_subsets(const std::vector<uint32_t>& units) {
    std::vector<std::vector<uint32_t>> out;
    size_t n = units.size();
    if (n > 20) throw AnalysisTooLarge("exhaustive candidate enumeration above 20 units");
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<uint32_t> s;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1u) s.push_back(units[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

ComplexSet find_complexes(const CausalModel& model, const BigState& u, const CandidateFilter& filter,
                          const EngineConfig& cfg) {
    ComplexSet result;
    std::vector<uint32_t> remaining;
    for (uint32_t i = 0; i < model.size(); ++i) remaining.push_back(i);

    while (!remaining.empty()) {
        auto candidates = filter ? filter(remaining) : all_subsets(remaining);
        std::sort(candidates.begin(), candidates.end(), candidate_order);

        bool found = false;
        double best_phi = 0;
        Complex best;
        for (const auto& cand : candidates) {
            if (cand.empty()) continue;
            // Skip candidates that touch claimed units.
            bool ok = true;
            for (uint32_t g : cand)
                ok = ok && std::binary_search(remaining.begin(), remaining.end(), g);
            if (!ok) continue;

            ++result.candidates_evaluated;
            SystemPhiResult r;
            if (auto cert = structural_reducibility(model, cand, u)) {
                r.phi = 0;
                r.structural_zero = true;
                r.note = cert->reason;
            } else {
                auto sub = Subsystem::condition(model, cand, u);
                r = phi_system(sub, cfg);
            }
            if (r.phi <= cfg.eps) continue;
            // Strictly greater phi wins; near-ties keep the earlier candidate
            // in the size-descending order (the largest maximum claims units
            // first, matching the published state-cycle complexes).
            if (!found || r.phi > best_phi + cfg.eps) {
                found = true;
                best_phi = r.phi;
                best.units = cand;
                best.system = r;
            }
        }
        if (!found) break;
        State s = 0;
        for (size_t i = 0; i < best.units.size(); ++i)
            if (u.get(best.units[i])) s |= (1u << i);
        best.state = s;
        result.complexes.push_back(best);
        std::vector<uint32_t> next;
        for (uint32_t g : remaining)
            if (!std::binary_search(best.units.begin(), best.units.end(), g)) next.push_back(g);
        remaining = std::move(next);
    }
    return result;
}

ComplexSet find_complexes_small(const CausalModel& model, State u, const EngineConfig& cfg) {
    BigState b(model.size());
    for (uint32_t i = 0; i < model.size(); ++i) b.set(i, (u >> i) & 1u);
    return find_complexes(model, b, nullptr, cfg);
}

CauseEffectStructure unfold_complex(const CausalModel& model, const BigState& u, const Complex& c,
                                    const EngineConfig& cfg) {
    auto sub = Subsystem::condition(model, c.units, u);
    return unfold(sub, c.system, cfg);
}

}  // namespace iit
