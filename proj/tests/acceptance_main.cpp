// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned here. Criteria that depend on data
// files shipped with the reference analyses report a skip with the reason
// when the file is absent.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

#include "iit/complexes.hpp"
#include "iit/computer.hpp"
#include "iit/macroing.hpp"
#include "iit/model_doc.hpp"
#include "iit/motifs.hpp"
#include "iit/preimage.hpp"
#include "iit/unfold.hpp"
#include "iit/zoo.hpp"

using namespace iit;

namespace {

int failures = 0;

void line(int criterion, bool pass, const std::string& detail) {
    printf("CRITERION %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    fflush(stdout);
    if (!pass) ++failures;
}

void subline(const std::string& detail) { printf("              - %s\n", detail.c_str()); }

BigState big_of(const CausalModel& m, State s) {
    BigState b(m.size());
    for (uint32_t i = 0; i < m.size(); ++i) b.set(i, (s >> i) & 1u);
    return b;
}

double candidate_phi(const CausalModel& m, uint32_t mask, State u) {
    auto sub = Subsystem::condition_small(m, mask, u);
    return phi_system(sub).phi;
}

CausalModel random_target(uint32_t n, std::mt19937& rng) {
    std::vector<UnitSpec> units;
    for (uint32_t j = 0; j < n; ++j) {
        UnitSpec u;
        u.id = "T" + std::to_string(j);
        u.gate = Gate::TruthTable;
        for (uint32_t i = 0; i < n; ++i) u.inputs.push_back({i, false});
        for (uint32_t r = 0; r < (1u << n); ++r) u.table.push_back(rng() & 1u);
        units.push_back(std::move(u));
    }
    return CausalModel("random" + std::to_string(n), std::move(units));
}

CausalModel copy_ring_model(uint32_t n) {
    std::vector<UnitSpec> units;
    for (uint32_t j = 0; j < n; ++j) {
        UnitSpec u;
        u.id = "N" + std::to_string(j);
        u.gate = Gate::Copy;
        u.inputs = {{(j + 1) % n, false}};
        units.push_back(std::move(u));
    }
    return CausalModel("ring" + std::to_string(n), std::move(units));
}

CausalModel imperfect_ring_model(uint32_t total) {
    uint32_t base = total - 1;
    std::vector<UnitSpec> units;
    for (uint32_t j = 0; j < base; ++j) {
        UnitSpec u;
        u.id = "N" + std::to_string(j);
        u.gate = Gate::Copy;
        u.inputs = {{(j + 1) % base, false}};
        units.push_back(std::move(u));
    }
    UnitSpec extra;
    extra.id = "N" + std::to_string(base);
    extra.gate = Gate::Copy;
    extra.inputs = {{base - 2, false}};
    units.push_back(std::move(extra));
    units[0].gate = Gate::Or;
    units[0].inputs = {{1, false}, {base, false}};
    return CausalModel("imp" + std::to_string(total), std::move(units));
}

std::string ces_signature(const CauseEffectStructure& ces) {
    // Relabeling-invariant summary: distinction order histogram, phi
    // multisets, relation degree histogram.
    std::vector<long long> d_phis, r_phis;
    std::map<uint32_t, int> orders, degrees;
    for (const auto& d : ces.distinctions) {
        d_phis.push_back(llround(d.phi * 1e6));
        orders[popcount32(d.mechanism)]++;
    }
    for (const auto& r : ces.relations) {
        r_phis.push_back(llround(r.phi * 1e6));
        degrees[uint32_t(r.members.size())]++;
    }
    std::sort(d_phis.begin(), d_phis.end());
    std::sort(r_phis.begin(), r_phis.end());
    std::string out = "D[";
    for (auto [k, v] : orders) out += std::to_string(k) + ":" + std::to_string(v) + ",";
    out += "]phi_d[";
    for (auto x : d_phis) out += std::to_string(x) + ",";
    out += "]R[";
    for (auto [k, v] : degrees) out += std::to_string(k) + ":" + std::to_string(v) + ",";
    out += "]phi_r[";
    for (auto x : r_phis) out += std::to_string(x) + ",";
    out += "]";
    return out;
}

}  // namespace

int main() {
    auto t_start = std::chrono::steady_clock::now();
    auto pqrs = load_zoo("pqrs", "data");
    State s_pqrs = parse_state(pqrs, "0101");

    // ----- 1: the headline unfolding -----
    {
        auto t0 = std::chrono::steady_clock::now();
        auto cs = find_complexes_small(pqrs, s_pqrs);
        bool one_complex = cs.complexes.size() == 1 && cs.complexes[0].units.size() == 4;
        double phi = cs.complexes.empty() ? 0 : cs.complexes[0].system.phi;
        bool phi_ok = std::abs(phi - 1.51) <= 0.01;
        CauseEffectStructure ces;
        if (one_complex) ces = unfold_complex(pqrs, big_of(pqrs, s_pqrs), cs.complexes[0]);
        const std::set<std::string> published = {"p",  "Q",   "S",   "pQ",  "pS",  "Qr", "QS",
                                                 "rS", "pQr", "pQS", "prS", "QrS", "pQrS"};
        std::set<std::string> got;
        for (const auto& d : ces.distinctions) {
            std::string name;
            for (uint32_t i = 0; i < 4; ++i)
                if ((d.mechanism >> i) & 1u) {
                    char c = "pqrs"[i];
                    name += ((d.mech_state >> i) & 1u) ? std::toupper(c) : c;
                }
            got.insert(name);
        }
        bool dist_ok = got == published;
        bool rel_ok = ces.relations.size() == 8184;
        bool bigphi_ok = std::abs(ces.big_phi - 391.25) <= 0.5;
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool runtime_ok = secs <= 300.0;
        line(1, one_complex && phi_ok && dist_ok && rel_ok && bigphi_ok && runtime_ok,
             "pQrS unfolding");
        subline("single 4-unit complex: " + std::string(one_complex ? "yes" : "NO"));
        subline("phi_s = " + std::to_string(phi) + " (target 1.51 +- 0.01): " +
                (phi_ok ? "ok" : "FAIL"));
        subline("distinctions = " + std::to_string(ces.distinctions.size()) +
                " (target: the 13 listed): " + (dist_ok ? "ok" : "FAIL"));
        subline("relations = " + std::to_string(ces.relations.size()) + " (target 8184): " +
                (rel_ok ? "ok" : "FAIL"));
        subline("big phi = " + std::to_string(ces.big_phi) + " (target 391.25 +- 0.5): " +
                (bigphi_ok ? "ok" : "FAIL"));
        subline("runtime " + std::to_string(secs) + " s (cap 300 s)");
    }

    // ----- 2: candidate values -----
    {
        double qrs = candidate_phi(pqrs, 0b1110, s_pqrs);
        double p = candidate_phi(pqrs, 0b0001, s_pqrs);
        double z1 = candidate_phi(pqrs, 0b0111, s_pqrs);
        double z2 = candidate_phi(pqrs, 0b1011, s_pqrs);
        double z3 = candidate_phi(pqrs, 0b1101, s_pqrs);
        double z4 = candidate_phi(pqrs, 0b0011, s_pqrs);
        double z5 = candidate_phi(pqrs, 0b0101, s_pqrs);
        bool ok = std::abs(qrs - 0.42) <= 0.01 && std::abs(p - 1.00) <= 0.01 && z1 < 1e-10 &&
                  z2 < 1e-10 && z3 < 1e-10 && z4 < 1e-10 && z5 < 1e-10;
        line(2, ok,
             "candidate systems: QrS=" + std::to_string(qrs) + " p=" + std::to_string(p) +
                 " reducible max=" + std::to_string(std::max({z1, z2, z3, z4, z5})));
    }

    // ----- 3: the state cycle -----
    {
        const char* cycle[] = {"1000", "0001", "1011", "1111", "1100",
                               "0011", "1101", "0101", "1110"};
        bool cycle_ok = true;
        for (int i = 0; i < 9; ++i)
            cycle_ok = cycle_ok && pqrs.step_small(parse_state(pqrs, cycle[i])) ==
                                       parse_state(pqrs, cycle[(i + 1) % 9]);
        bool fixed_ok = pqrs.step_small(0) == 0;
        auto cs = find_complexes_small(pqrs, parse_state(pqrs, "1110"));
        bool qs_only = cs.complexes.size() == 1 && cs.complexes[0].units ==
                                                       std::vector<uint32_t>{1, 3};
        std::string got = "complexes at PQRs:";
        for (auto& c : cs.complexes) {
            got += " {";
            for (auto g : c.units) got += pqrs.unit(g).id;
            got += "}";
        }
        line(3, cycle_ok && fixed_ok && qs_only, "state cycle");
        subline(std::string("nine-state cycle reproduced: ") + (cycle_ok ? "ok" : "FAIL"));
        subline(std::string("0000 fixed point: ") + (fixed_ok ? "ok" : "FAIL"));
        subline("only Qs forms a complex at PQRs: " + std::string(qs_only ? "ok" : "FAIL (") +
                (qs_only ? "" : got + ")"));
    }

    // ----- 4: the rule-110 target -----
    {
        auto wxyz = load_zoo("rule110(4)", "data");
        State u = parse_state(wxyz, "1101");
        auto cs = find_complexes_small(wxyz, u);
        bool two = cs.complexes.size() == 2;
        double wz = -1, y = -1;
        size_t wz_d = 0, wz_r = 0, y_d = 0, y_r = 0;
        for (auto& c : cs.complexes) {
            std::string ids;
            for (auto g : c.units) ids += wxyz.unit(g).id;
            auto ces = unfold_complex(wxyz, big_of(wxyz, u), c);
            if (ids == "WZ") {
                wz = c.system.phi;
                wz_d = ces.distinctions.size();
                wz_r = ces.relations.size();
            }
            if (ids == "Y") {
                y = c.system.phi;
                y_d = ces.distinctions.size();
                y_r = ces.relations.size();
            }
        }
        bool ok = two && std::abs(wz - 0.47) <= 0.01 && std::abs(y - 0.28) <= 0.01 && wz_d == 3 &&
                  wz_r == 7 && y_d == 1 && y_r == 1;
        std::string got = "complexes:";
        for (auto& c : cs.complexes) {
            got += " {";
            for (auto g : c.units) got += wxyz.unit(g).id;
            got += "}=" + std::to_string(c.system.phi);
        }
        line(4, ok, "WXyZ fragmentation");
        subline(got + "  (target {WZ}=0.47, {y}=0.28, sizes 3d/7r and 1d/1r)");
    }

    // ----- 5: weak computer micro analysis -----
    {
        auto wcc = generate_computer(2, ComputerVariant::Weak);
        auto s0 = program_computer(wcc, pqrs, s_pqrs);
        auto trace = simulate(wcc, s0, 3);
        std::vector<uint32_t> all;
        for (uint32_t i = 0; i < wcc.model.size(); ++i) all.push_back(i);
        auto cert = structural_reducibility(wcc.model, all, trace[6]);
        bool whole_zero = cert.has_value();
        bool counts_ok = true, ces_ok = true;
        for (int t : {6, 14, 22}) {
            auto cs = find_computer_complexes(wcc, trace[t], t);
            counts_ok = counts_ok && cs.complexes.size() == 24;
            if (t == 6) {
                for (auto& c : cs.complexes) {
                    auto ces = unfold_complex(wcc.model, trace[t], c);
                    for (auto& d : ces.distinctions)
                        ces_ok = ces_ok && popcount32(d.mechanism) == 1;
                    ces_ok = ces_ok && ces.distinctions.size() <= 4 && ces.relations.size() <= 4 &&
                             ces.big_phi <= 6.0 + 1e-9;
                }
            }
        }
        line(5, whole_zero && counts_ok && ces_ok, "weak computer micro analysis");
        subline(std::string("whole-system structural certificate: ") +
                (whole_zero ? cert->reason : "MISSING"));
        subline(std::string("24 complexes in each tested state: ") + (counts_ok ? "ok" : "FAIL"));
        subline(std::string("first-order CESs within bounds: ") + (ces_ok ? "ok" : "FAIL"));
    }

    // ----- 6: functional equivalence -----
    {
        bool ok = true;
        for (auto variant : {ComputerVariant::Weak, ComputerVariant::Strong}) {
            auto c = generate_computer(2, variant);
            for (State t0 = 0; t0 < 16 && ok; ++t0)
                ok = check_equivalence(c, pqrs, t0, 27).pass;
        }
        std::mt19937 rng(606);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            auto target = random_target(4, rng);
            auto c = generate_computer(2, trial % 2 ? ComputerVariant::Strong
                                                    : ComputerVariant::Weak);
            ok = check_equivalence(c, target, rng() & 15u, 10).pass;
        }
        auto wcc = generate_computer(2, ComputerVariant::Weak);
        auto rows = clock_schedule(wcc, program_computer(wcc, pqrs, 0), 15);
        int expect[16][5] = {{1,0,0,0,0},{0,1,0,0,0},{1,1,0,0,0},{0,0,1,0,0},{1,0,0,1,0},
                             {0,1,0,1,0},{1,1,0,1,0},{0,0,1,1,1},{1,0,0,0,0},{0,1,0,0,0},
                             {1,1,0,0,0},{0,0,1,0,0},{1,0,0,1,0},{0,1,0,1,0},{1,1,0,1,0},
                             {0,0,1,1,1}};
        bool clock_ok = true;
        for (int t = 0; t <= 15; ++t)
            for (int col = 0; col < 5; ++col) clock_ok = clock_ok && rows[t][col] == expect[t][col];
        line(6, ok && clock_ok,
             std::string("equivalence sweeps (stride 8) and clock schedule: ") +
                 (ok ? "sweeps ok" : "sweeps FAIL") + ", " + (clock_ok ? "clock ok" : "clock FAIL"));
    }

    // ----- 7: dissociation -----
    {
        auto r110 = load_zoo("rule110(4)", "data");
        auto run_sig = [&](const CausalModel& target, State t0) {
            auto c = generate_computer(2, ComputerVariant::Weak);
            auto trace = simulate(c, program_computer(c, target, t0), 1);
            auto cs = find_computer_complexes(c, trace[6], 6);
            std::multiset<std::string> sigs;
            for (auto& cx : cs.complexes)
                sigs.insert(ces_signature(unfold_complex(c.model, trace[6], cx)));
            return sigs;
        };
        auto a = run_sig(pqrs, parse_state(pqrs, "0101"));
        auto b = run_sig(r110, parse_state(r110, "1101"));
        bool ok = a == b;
        size_t common = 0;
        for (const auto& s : a) common += b.count(s) > 0;
        line(7, ok, "dissociation: catalog CES multisets for the two programs");
        subline(std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                " structures; identical signatures for " + std::to_string(common) + " of 24");
    }

    // ----- 8: property suites -----
    {
        std::mt19937 rng(808);
        bool ring_ok = true;
        for (uint32_t n = 4; n <= 8 && ring_ok; ++n) {
            auto ring = copy_ring_model(n);
            std::vector<uint32_t> members;
            for (uint32_t i = 0; i < n; ++i) members.push_back(i);
            for (int s = 0; s < 100 && ring_ok; ++s) {
                State st = (s == 0) ? 0 : (s == 1) ? ((1u << n) - 1) : State(rng() & ((1u << n) - 1));
                auto sub = Subsystem::condition(ring, members, big_of(ring, st));
                auto r = phi_system(sub);
                auto ces = unfold(sub, r);
                ring_ok = ces.big_phi <= 1.5 * n + 1e-9 && ces.relations.size() <= n;
                if (n > 4)
                    for (auto& rel : ces.relations) ring_ok = ring_ok && rel.phi <= 0.5 + 1e-9;
            }
        }
        bool monad_ok = true;
        for (int fn = 0; fn < 4 && monad_ok; ++fn) {
            UnitSpec u;
            u.id = "A";
            u.gate = Gate::TruthTable;
            u.inputs = {{0, false}};
            u.table = {uint8_t(fn & 1), uint8_t((fn >> 1) & 1)};
            CausalModel m("unary", {u});
            for (State s = 0; s < 2 && monad_ok; ++s) {
                auto sub = Subsystem::condition(m, {0}, big_of(m, s));
                auto r = phi_system(sub);
                auto ces = unfold(sub, r);
                monad_ok = ces.distinctions.size() <= 1 && ces.relations.size() <= 1 &&
                           ces.big_phi <= 2.0 + 1e-9;
            }
        }
        bool imp_ok = true;
        for (uint32_t total = 5; total <= 9 && imp_ok; ++total) {
            auto imp = imperfect_ring_model(total);
            std::vector<uint32_t> members;
            for (uint32_t i = 0; i < total; ++i) members.push_back(i);
            for (int s = 0; s < 40 && imp_ok; ++s) {
                State st = (s == 0) ? 0 : (s == 1) ? ((1u << total) - 1)
                                                   : State(rng() & ((1u << total) - 1));
                auto sub = Subsystem::condition(imp, members, big_of(imp, st));
                auto r = phi_system(sub);
                auto ces = unfold(sub, r);
                imp_ok = ces.big_phi <= (9.0 * total + 64.0) / 6.0 + 1e-9;
            }
        }
        // reducibility theorems, exhaustively on 1000 instances each
        bool weak_ok = true;
        int done = 0;
        while (done < 1000) {
            uint32_t n = 2 + rng() % 4;
            std::vector<UnitSpec> units;
            for (uint32_t j = 0; j < n; ++j) {
                UnitSpec u;
                u.id = "U" + std::to_string(j);
                u.gate = Gate::TruthTable;
                uint32_t fanin = 1 + rng() % std::min(3u, n);
                std::set<uint32_t> srcs;
                while (srcs.size() < fanin) srcs.insert(rng() % n);
                for (uint32_t s : srcs) u.inputs.push_back({s, false});
                for (uint32_t r = 0; r < (1u << fanin); ++r) u.table.push_back(rng() & 1u);
                units.push_back(std::move(u));
            }
            CausalModel m("w", std::move(units));
            std::vector<uint32_t> members;
            for (uint32_t i = 0; i < n; ++i) members.push_back(i);
            State st = rng() & ((1u << n) - 1);
            auto cert = structural_reducibility(m, members, big_of(m, st));
            if (!cert || cert->reason.find("strongly connected") == std::string::npos) continue;
            auto sub = Subsystem::condition(m, members, big_of(m, st));
            if (!sub.has_cause()) continue;
            auto info = intrinsic_information(sub);
            double worst = 0;
            if (info.has_cause && info.ii_c > 1e-10 && info.ii_e > 1e-10) {
                worst = 1e30;
                for (const auto& p : enumerate_partitions(sub.size(), default_config()))
                    worst = std::min(worst, partition_loss(sub, info, p));
            }
            weak_ok = weak_ok && worst <= 1e-10;
            ++done;
        }
        bool exdet_ok = true;
        done = 0;
        while (done < 1000) {
            uint32_t n = 3 + rng() % 3;
            std::vector<UnitSpec> units;
            for (uint32_t j = 0; j < n; ++j) {
                UnitSpec u;
                u.id = "U" + std::to_string(j);
                u.gate = Gate::TruthTable;
                uint32_t fanin = 1 + rng() % 3;
                std::set<uint32_t> srcs;
                while (srcs.size() < fanin) srcs.insert(rng() % n);
                for (uint32_t s : srcs) u.inputs.push_back({s, false});
                for (uint32_t r = 0; r < (1u << fanin); ++r) u.table.push_back(rng() & 1u);
                units.push_back(std::move(u));
            }
            CausalModel m("x", std::move(units));
            uint32_t out = rng() % n;
            std::vector<uint32_t> members;
            for (uint32_t i = 0; i < n; ++i)
                if (i != out) members.push_back(i);
            State st = rng() & ((1u << n) - 1);
            auto sub = Subsystem::condition(m, members, big_of(m, st));
            auto cert = structural_reducibility(sub);
            if (!cert || cert->reason.find("externally determined") == std::string::npos) continue;
            if (!sub.has_cause()) continue;
            auto info = intrinsic_information(sub);
            double worst = 0;
            if (info.has_cause && info.ii_c > 1e-10 && info.ii_e > 1e-10) {
                worst = 1e30;
                for (const auto& p : enumerate_partitions(sub.size(), default_config()))
                    worst = std::min(worst, partition_loss(sub, info, p));
            }
            exdet_ok = exdet_ok && worst <= 1e-10;
            ++done;
        }
        line(8, ring_ok && monad_ok && imp_ok && weak_ok && exdet_ok, "property suites");
        subline(std::string("ring bound 3n/2, n in [4,8], 100 states: ") + (ring_ok ? "ok" : "FAIL"));
        subline(std::string("monad bound, exhaustive unary units: ") + (monad_ok ? "ok" : "FAIL"));
        subline(std::string("imperfect ring bound (9n+64)/6, n in [5,9]: ") + (imp_ok ? "ok" : "FAIL"));
        subline(std::string("weak-connectivity reducibility x1000: ") + (weak_ok ? "ok" : "FAIL"));
        subline(std::string("external-determination reducibility x1000: ") + (exdet_ok ? "ok" : "FAIL"));
    }

    // ----- 9: conditioning oracle -----
    {
        std::mt19937 rng(909);
        bool ok = true;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            auto m = random_target(5, rng);
            State u = rng() & 31u;
            std::vector<State> preimage;
            for (State prev = 0; prev < 32; ++prev)
                if (m.step_small(prev) == u) preimage.push_back(prev);
            for (uint32_t mask = 1; mask < 32 && ok; ++mask) {
                std::vector<uint32_t> members;
                for (uint32_t i = 0; i < 5; ++i)
                    if ((mask >> i) & 1u) members.push_back(i);
                auto sub = Subsystem::condition(m, members, big_of(m, u));
                if (preimage.empty()) {
                    ok = !sub.has_cause();
                    continue;
                }
                uint32_t nm = uint32_t(members.size());
                for (State row = 0; row < (1u << nm) && ok; ++row) {
                    for (uint32_t j = 0; j < nm && ok; ++j) {
                        // brute force: posterior over background priors from the
                        // materialized joint TPM, then the unit's conditional
                        double acc = 0;
                        for (State prev : preimage) {
                            State patched = prev;
                            for (uint32_t b = 0; b < nm; ++b) {
                                patched &= ~(1u << members[b]);
                                if ((row >> b) & 1u) patched |= (1u << members[b]);
                            }
                            acc += (m.step_small(patched) >> members[j]) & 1u;
                        }
                        double brute = acc / double(preimage.size());
                        double implicit = Subsystem::cpt_prob(sub.cause_cpt(j), true, row, ~0u, 0);
                        ok = std::abs(brute - implicit) <= 1e-12;
                    }
                }
                // effect side: materialized rows are one-hot at step
                auto tpm = materialize_effect_tpm(sub);
                for (State row = 0; row < (1u << nm) && ok; ++row) {
                    double sum = 0;
                    for (double p : tpm[row]) sum += p;
                    ok = std::abs(sum - 1.0) <= 1e-12;
                }
            }
        }
        line(9, ok, "implicit conditioning equals brute-force marginalization (100 models x all subsystems)");
    }

    // ----- 10: macro audit -----
    {
        bool ok = true;
        std::string detail;
        for (auto variant : {ComputerVariant::Weak, ComputerVariant::Strong}) {
            auto c = generate_computer(2, variant);
            auto trace = simulate(c, program_computer(c, pqrs, s_pqrs), 1);
            auto rows = audit_computer_macroing(c, trace[6]);
            for (const auto& row : rows) {
                if (!row.tripped()) {
                    ok = false;
                    detail += " untripped:" + row.candidate;
                }
            }
        }
        line(10, ok, "function-relevant macroing trips {phi=0, NONT, ISO} everywhere" + detail);
        try {
            load_zoo("fig4b", "data");
            subline("fig4b conformance: data present (unexpected)");
        } catch (const std::exception& e) {
            subline(std::string("fig4b conformance: SKIPPED - ") + e.what());
        }
    }

    // ----- 11: scaling smoke test -----
    {
        auto c = generate_computer(3, ComputerVariant::Weak);
        bool units_ok = c.model.size() == 2603;
        std::mt19937 rng(1111);
        auto target = random_target(8, rng);
        auto rep = check_equivalence(c, target, State(rng() & 255u), 1);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<uint32_t> all;
        for (uint32_t i = 0; i < c.model.size(); ++i) all.push_back(i);
        BigState s0 = program_computer(c, target, 0);
        auto cert = structural_reducibility(c.model, all, s0);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        line(11, units_ok && rep.pass && cert.has_value() && secs < 10.0,
             "k=3: " + std::to_string(c.model.size()) + " units, iteration " +
                 (rep.pass ? "ok" : "FAIL") + ", certificate in " + std::to_string(secs) + " s");
    }

    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    printf("acceptance finished in %.1f s with %d failing criteria\n", total, failures);
    return failures;
}
