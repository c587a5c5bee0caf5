#include <CLI11.hpp>
#include <iostream>
#include <random>

#include "iit/complexes.hpp"
#include "iit/computer.hpp"
#include "iit/kernels.hpp"
#include "iit/macroing.hpp"
#include "iit/model_doc.hpp"
#include "iit/motifs.hpp"
#include "iit/report.hpp"
#include "iit/zoo.hpp"

using namespace iit;

namespace {

struct CommonOpts {
    std::string model = "pqrs";
    std::string state;
    std::string data_dir = "data";
    std::string out;
    uint32_t cap = 8;
    uint64_t seed = 20240808;
    double tol = 1e-6;
    uint32_t jobs = 0;
    std::string kernel;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_state = true) {
    cmd->add_option("--model,-m", o.model, "zoo name (pqrs, rule110(n), wcc(k), scc(k), fig4b) or a model file path");
    if (with_state) cmd->add_option("--state,-s", o.state, "state literal, e.g. 0101 or pQrS");
    cmd->add_option("--data", o.data_dir, "data directory for zoo models");
    cmd->add_option("--out,-o", o.out, "write the report here instead of stdout");
    cmd->add_option("--cap", o.cap, "exact-analysis cap in units");
    cmd->add_option("--seed", o.seed, "random seed for sweeps");
    cmd->add_option("--tol", o.tol, "comparison tolerance");
    cmd->add_option("--jobs,-j", o.jobs, "parallel width (0 = hardware)");
    cmd->add_option("--kernel", o.kernel, "force a kernel variant (scalar, avx2, neon)");
}

CausalModel load_any(const CommonOpts& o) {
    if (o.model.find('/') != std::string::npos || o.model.rfind(".model") != std::string::npos)
        return load_model_file(o.model);
    return load_zoo(o.model, o.data_dir);
}

void emit(const CommonOpts& o, const std::string& doc) {
    if (o.out.empty()) std::cout << doc << "\n";
    else report::write_file(o.out, doc);
}

EngineConfig config_of(const CommonOpts& o) {
    EngineConfig cfg;
    cfg.exact_cap = o.cap;
    cfg.threads = o.jobs;
    if (!o.kernel.empty() && !kernels::select(o.kernel))
        throw std::runtime_error("kernel variant unavailable: " + o.kernel);
    return cfg;
}

BigState big_of(const CausalModel& m, State s) {
    BigState b(m.size());
    for (uint32_t i = 0; i < m.size(); ++i) b.set(i, (s >> i) & 1u);
    return b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal analysis workbench: complexes, cause-effect structures and the stored-program computer"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* analyze = app.add_subcommand("analyze", "system integrated information of a candidate system");
    std::string members_arg;
    add_common(analyze, o);
    analyze->add_option("--members", members_arg, "comma-separated unit ids (default: all units)");
    analyze->callback([&] {
        auto m = load_any(o);
        auto cfg = config_of(o);
        State u = parse_state(m, o.state);
        std::vector<uint32_t> members;
        if (members_arg.empty()) {
            for (uint32_t i = 0; i < m.size(); ++i) members.push_back(i);
        } else {
            std::stringstream ss(members_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                auto idx = m.index_of(tok);
                if (!idx) throw std::runtime_error("unknown unit " + tok);
                members.push_back(*idx);
            }
        }
        SystemPhiResult r;
        auto ub = big_of(m, u);
        if (auto cert = structural_reducibility(m, members, ub)) {
            r.phi = 0;
            r.structural_zero = true;
            r.note = cert->reason;
        } else {
            auto sub = Subsystem::condition(m, members, ub);
            r = phi_system(sub, cfg);
        }
        State mstate = 0;
        for (size_t i = 0; i < members.size(); ++i)
            if ((u >> members[i]) & 1u) mstate |= (1u << i);
        emit(o, report::phi_result_json(m, members, mstate, r));
    });

    auto* complexes_cmd = app.add_subcommand("complexes", "non-overlapping maximally irreducible systems");
    add_common(complexes_cmd, o);
    complexes_cmd->callback([&] {
        auto m = load_any(o);
        auto cfg = config_of(o);
        State u = parse_state(m, o.state);
        auto cs = find_complexes_small(m, u, cfg);
        emit(o, report::complexes_json(m, big_of(m, u), cs));
    });

    auto* unfold_cmd = app.add_subcommand("unfold", "cause-effect structure of the main complex");
    std::string graph_out;
    add_common(unfold_cmd, o);
    unfold_cmd->add_option("--graph", graph_out, "also write a DOT graph here");
    unfold_cmd->callback([&] {
        auto m = load_any(o);
        auto cfg = config_of(o);
        State u = parse_state(m, o.state);
        auto cs = find_complexes_small(m, u, cfg);
        if (cs.complexes.empty()) throw std::runtime_error("no complex at this state");
        auto ces = unfold_complex(m, big_of(m, u), cs.complexes[0], cfg);
        emit(o, report::ces_json(ces));
        if (!graph_out.empty()) report::write_file(graph_out, report::ces_dot(ces));
    });

    auto* gen = app.add_subcommand("generate", "generate a stored-program computer as a model document");
    uint32_t k = 2;
    std::string variant = "weak";
    add_common(gen, o, false);
    gen->add_option("--k", k, "computer order (simulates 2^k units)");
    gen->add_option("--variant", variant, "weak or strong");
    gen->callback([&] {
        auto c = generate_computer(k, variant == "strong" ? ComputerVariant::Strong
                                                          : ComputerVariant::Weak);
        std::string doc = serialize_model_doc(c.model);
        if (o.out.empty()) std::cout << doc;
        else report::write_file(o.out, doc);
    });

    auto* sim = app.add_subcommand("simulate", "program a computer and export its trace");
    std::string target_name = "pqrs";
    std::string t0_arg = "0000";
    uint32_t iterations = 1;
    add_common(sim, o, false);
    sim->add_option("--k", k, "computer order");
    sim->add_option("--variant", variant, "weak or strong");
    sim->add_option("--target", target_name, "zoo name of the simulated system");
    sim->add_option("--t0", t0_arg, "initial target state");
    sim->add_option("--iterations", iterations, "simulation iterations (2n updates each)");
    sim->callback([&] {
        auto c = generate_computer(k, variant == "strong" ? ComputerVariant::Strong
                                                          : ComputerVariant::Weak);
        auto target = load_zoo(target_name, o.data_dir);
        State t0 = parse_state(target, t0_arg);
        auto s0 = program_computer(c, target, t0);
        auto trace = simulate(c, s0, iterations);
        std::string doc = report::trace_csv(c, trace);
        if (o.out.empty()) std::cout << doc;
        else report::write_file(o.out, doc);
    });

    auto* eq = app.add_subcommand("equivalence", "check functional equivalence modulo 2n updates");
    bool fuzz = false;
    bool all_states = false;
    add_common(eq, o, false);
    eq->add_option("--k", k, "computer order");
    eq->add_option("--variant", variant, "weak, strong or both");
    eq->add_option("--target", target_name, "zoo name of the simulated system");
    eq->add_option("--t0", t0_arg, "initial target state");
    eq->add_flag("--all-states", all_states, "sweep every initial target state");
    eq->add_option("--iterations", iterations, "target transitions to verify");
    eq->add_flag("--fuzz", fuzz, "randomize the processing units first");
    eq->callback([&] {
        auto target = load_zoo(target_name, o.data_dir);
        bool ok = true;
        std::string last;
        for (const char* v : {"weak", "strong"}) {
            if (variant != "both" && variant != v) continue;
            auto c = generate_computer(k, std::string(v) == "strong" ? ComputerVariant::Strong
                                                                     : ComputerVariant::Weak);
            std::vector<State> starts;
            if (all_states) {
                for (State s = 0; s < (1u << c.n); ++s) starts.push_back(s);
            } else {
                starts.push_back(parse_state(target, t0_arg));
            }
            for (State t0 : starts) {
                auto rep = check_equivalence(c, target, t0, iterations,
                                             fuzz ? std::optional<uint64_t>(o.seed) : std::nullopt);
                ok = ok && rep.pass;
                last = report::equivalence_json(rep, target.name(), t0);
            }
        }
        emit(o, last);
        if (!ok) throw std::runtime_error("equivalence failed");
    });

    auto* bounds_cmd = app.add_subcommand("bounds", "motif big-phi bounds on random rings");
    std::string motif = "ring";
    uint32_t n_lo = 4, n_hi = 8, states = 20;
    add_common(bounds_cmd, o, false);
    bounds_cmd->add_option("--motif", motif, "ring or imperfect_ring");
    bounds_cmd->add_option("--n-lo", n_lo, "smallest ring size");
    bounds_cmd->add_option("--n-hi", n_hi, "largest ring size");
    bounds_cmd->add_option("--states", states, "states per size (fixed homogeneous plus random)");
    bounds_cmd->callback([&] {
        std::mt19937_64 rng(o.seed);
        auto cfg = config_of(o);
        std::ostringstream csv;
        csv << "motif,n,state,big_phi,bound,pass\n";
        bool all = true;
        for (uint32_t n = n_lo; n <= n_hi; ++n) {
            std::vector<UnitSpec> units;
            for (uint32_t j = 0; j < n; ++j) {
                UnitSpec uspec;
                uspec.id = "N" + std::to_string(j);
                uspec.gate = Gate::Copy;
                uspec.inputs = {{(j + 1) % n, false}};
                units.push_back(uspec);
            }
            double bound = ring_phi_bound(n);
            if (motif == "imperfect_ring") {
                UnitSpec extra;
                extra.id = "N" + std::to_string(n);
                extra.gate = Gate::Copy;
                extra.inputs = {{n - 2, false}};
                units.push_back(extra);
                units[0].gate = Gate::Or;
                units[0].inputs = {{1, false}, {n, false}};
                bound = imperfect_ring_phi_bound(n + 1);
            }
            CausalModel ring(motif + std::to_string(n), std::move(units));
            for (uint32_t s = 0; s < states; ++s) {
                State st = (s == 0) ? 0
                           : (s == 1) ? ((ring.size() >= 32) ? ~0u : ((1u << ring.size()) - 1))
                                      : State(rng() & ((1u << ring.size()) - 1));
                std::vector<uint32_t> members;
                for (uint32_t i = 0; i < ring.size(); ++i) members.push_back(i);
                auto sub = Subsystem::condition(ring, members, big_of(ring, st));
                auto r = phi_system(sub, cfg);
                auto ces = unfold(sub, r, cfg);
                bool pass = ces.big_phi <= bound + 1e-9;
                all = all && pass;
                csv << motif << "," << ring.size() << "," << render_state(ring, st) << ","
                    << ces.big_phi << "," << bound << "," << (pass ? 1 : 0) << "\n";
            }
        }
        std::string doc = csv.str();
        if (o.out.empty()) std::cout << doc;
        else report::write_file(o.out, doc);
        if (!all) throw std::runtime_error("a bound was violated");
    });

    auto* audit = app.add_subcommand("audit", "macro-grain audit of a generated computer");
    uint32_t at_update = 6;
    add_common(audit, o, false);
    audit->add_option("--k", k, "computer order");
    audit->add_option("--variant", variant, "weak or strong");
    audit->add_option("--target", target_name, "simulated system");
    audit->add_option("--t0", t0_arg, "initial target state");
    audit->add_option("--update", at_update, "computer update at which to audit");
    audit->callback([&] {
        auto c = generate_computer(k, variant == "strong" ? ComputerVariant::Strong
                                                          : ComputerVariant::Weak);
        auto target = load_zoo(target_name, o.data_dir);
        auto s0 = program_computer(c, target, parse_state(target, t0_arg));
        auto trace = simulate(c, s0, at_update / c.stride() + 1);
        auto rows = audit_computer_macroing(c, trace[at_update], config_of(o));
        emit(o, report::macro_audit_json(rows));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
