#include "iit/computer.hpp"

#include <random>

namespace iit {

ComputerCircuit generate_computer(uint32_t k, ComputerVariant variant) {
    if (k < 2 || k > 4) throw std::invalid_argument("computer order k must be in [2, 4]");
    uint32_t n = 1u << k;
    uint32_t lines = 1u << n;

    // Fixed layout: program, instruction register, multiplexer, MO, clock,
    // buffer, data registers.
    uint32_t off_prog = 0;
    uint32_t off_ir = off_prog + lines * n;
    uint32_t off_mux = off_ir + lines;
    uint32_t off_mo = off_mux + lines;
    uint32_t off_clock = off_mo + 1;              // C0, then CXj, CAj pairs
    uint32_t off_buf = off_clock + 1 + 2 * k;
    uint32_t off_reg = off_buf + (2 * n - 5);     // R_SIM, R_AND, R_XOR per register
    uint32_t total = off_reg + 3 * n;

    auto prog = [&](uint32_t i, uint32_t j) { return off_prog + i * n + j; };
    auto ir = [&](uint32_t i) { return off_ir + i; };
    auto mux = [&](uint32_t i) { return off_mux + i; };
    uint32_t mo = off_mo, c0 = off_clock;
    auto cx = [&](uint32_t j) { return off_clock + 1 + 2 * j; };
    auto ca = [&](uint32_t j) { return off_clock + 2 + 2 * j; };
    auto buf = [&](uint32_t b) { return off_buf + b; };  // b = 0 is B_1
    auto r_sim = [&](uint32_t i) { return off_reg + 3 * i; };
    auto r_and = [&](uint32_t i) { return off_reg + 3 * i + 1; };
    auto r_xor = [&](uint32_t i) { return off_reg + 3 * i + 2; };

    std::vector<UnitSpec> units(total);

    // Program rings rotate leftward: position j takes position j+1's state,
    // the last position takes the first's. In the strong variant position
    // n-1 becomes an OR with a feedback input from the line's instruction
    // register unit.
    for (uint32_t i = 0; i < lines; ++i) {
        for (uint32_t j = 0; j < n; ++j) {
            UnitSpec& u = units[prog(i, j)];
            u.id = "P" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            uint32_t src = prog(i, (j + 1) % n);
            if (variant == ComputerVariant::Strong && j == n - 2) {
                u.gate = Gate::Or;
                u.inputs = {{src, false}, {ir(i), false}};
            } else {
                u.gate = Gate::Copy;
                u.inputs = {{src, false}};
            }
        }
        // Instruction register reads the ring's first position, gated by the
        // negated last divider stage.
        UnitSpec& iru = units[ir(i)];
        iru.id = "IR" + std::to_string(i + 1);
        iru.gate = Gate::And;
        iru.inputs = {{prog(i, 0), false}, {cx(k - 1), true}};
        // Multiplexer unit i is enabled when the register outputs spell i
        // (little-endian) and then takes its instruction register's value.
        UnitSpec& m = units[mux(i)];
        m.id = "M" + std::to_string(i + 1);
        m.gate = Gate::And;
        m.inputs.push_back({ir(i), false});
        for (uint32_t b = 0; b < n; ++b) m.inputs.push_back({r_sim(b), ((i >> b) & 1u) == 0});
    }

    {
        UnitSpec& u = units[mo];
        u.id = "MO";
        u.gate = Gate::GeneralizedOr;
        for (uint32_t i = 0; i < lines; ++i) u.inputs.push_back({mux(i), false});
    }

    // Timekeeping chain. The core oscillator toggles through a negated
    // self-input; each divider is a toggle stage CXj = XOR(CXj, prev) plus a
    // pulse unit CAj that rises for the last update of its period. The pulse
    // unit needs its own state to match the published schedule, so it is a
    // table over (C0, CAj, CX1..CXj): all CX stages high and C0 differing
    // from CAj.
    {
        UnitSpec& u = units[c0];
        u.id = "C0";
        if (variant == ComputerVariant::Weak) {
            u.gate = Gate::Copy;
            u.inputs = {{c0, true}};
        } else {
            // Feedback from every register's AND unit; the gate keeps the
            // toggle behaviour because those units are quiet except at the
            // iteration boundary.
            u.gate = Gate::And;
            u.inputs = {{c0, true}};
            for (uint32_t i = 0; i < n; ++i) u.inputs.push_back({r_and(i), true});
        }
    }
    for (uint32_t j = 0; j < k; ++j) {
        UnitSpec& x = units[cx(j)];
        x.id = "CX" + std::to_string(j + 1);
        x.gate = Gate::Xor;
        x.inputs = {{cx(j), false}, {j == 0 ? c0 : ca(j - 1), false}};

        UnitSpec& a = units[ca(j)];
        a.id = "CA" + std::to_string(j + 1);
        a.gate = Gate::TruthTable;
        a.inputs.push_back({c0, false});
        a.inputs.push_back({ca(j), false});
        for (uint32_t s = 0; s <= j; ++s) a.inputs.push_back({cx(s), false});
        a.table.resize(size_t(1) << a.inputs.size());
        for (uint32_t row = 0; row < a.table.size(); ++row) {
            bool c0v = row & 1u, cav = (row >> 1) & 1u;
            bool all_cx = true;
            for (uint32_t s = 0; s <= j; ++s) all_cx = all_cx && ((row >> (2 + s)) & 1u);
            a.table[row] = (all_cx && (c0v ^ cav)) ? 1 : 0;
        }
    }

    // Buffer chain from the multiplexer output toward the leftmost register.
    uint32_t blen = 2 * n - 5;
    for (uint32_t b = 0; b < blen; ++b) {
        UnitSpec& u = units[buf(b)];
        u.id = "B" + std::to_string(b + 1);
        u.gate = Gate::Copy;
        u.inputs = {{b + 1 < blen ? buf(b + 1) : mo, false}};
    }

    // Data registers: compare the held value with the arriving one, gate the
    // change signal with the divider pulse, toggle the output.
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t carrier = (i + 1 < n) ? buf(i) : mo;
        UnitSpec& x = units[r_xor(i)];
        x.id = "R" + std::to_string(i + 1) + "_XOR";
        x.gate = Gate::Xor;
        x.inputs = {{r_sim(i), false}, {carrier, false}};
        UnitSpec& a = units[r_and(i)];
        a.id = "R" + std::to_string(i + 1) + "_AND";
        a.gate = Gate::And;
        a.inputs = {{r_xor(i), false}, {ca(k - 1), false}};
        UnitSpec& s = units[r_sim(i)];
        s.id = "R" + std::to_string(i + 1) + "_SIM";
        s.gate = Gate::Xor;
        s.inputs = {{r_sim(i), false}, {r_and(i), false}};
    }

    ComputerCircuit c{CausalModel((variant == ComputerVariant::Weak ? "wcc(" : "scc(") +
                                      std::to_string(k) + ")",
                                  std::move(units))};
    c.k = k;
    c.n = n;
    c.variant = variant;
    for (uint32_t i = 0; i < lines; ++i) {
        std::vector<uint32_t> line;
        for (uint32_t j = 0; j < n; ++j) line.push_back(prog(i, j));
        c.program.push_back(std::move(line));
        c.ir.push_back(ir(i));
        c.mux.push_back(mux(i));
    }
    c.mo = mo;
    c.c0 = c0;
    for (uint32_t j = 0; j < k; ++j) {
        c.cx.push_back(cx(j));
        c.ca.push_back(ca(j));
    }
    for (uint32_t b = 0; b < blen; ++b) c.buffer.push_back(buf(b));
    for (uint32_t i = 0; i < n; ++i) {
        c.r_sim.push_back(r_sim(i));
        c.r_and.push_back(r_and(i));
        c.r_xor.push_back(r_xor(i));
    }
    return c;
}

BigState program_computer(const ComputerCircuit& c, const CausalModel& target, State t0) {
    if (target.size() != c.n)
        throw SizeMismatch("target has " + std::to_string(target.size()) + " units, computer simulates " +
                           std::to_string(c.n));
    BigState s(c.model.size());
    // Line i holds the successor of the i-th pre-transition state; the
    // leftmost ring unit carries the first target unit's next state.
    for (uint32_t i = 0; i < (1u << c.n); ++i) {
        State succ = target.step_small(static_cast<State>(i));
        for (uint32_t j = 0; j < c.n; ++j) s.set(c.program[i][j], (succ >> j) & 1u);
    }
    for (uint32_t j = 0; j < c.n; ++j) s.set(c.r_sim[j], (t0 >> j) & 1u);
    s.set(c.c0, true);  // schedule phase: oscillator high, dividers low
    return s;
}

bool is_valid_initial_state(const ComputerCircuit& c, const BigState& s) {
    if (s.width != c.model.size()) return false;
    if (!s.get(c.c0)) return false;
    for (uint32_t j = 0; j < c.k; ++j)
        if (s.get(c.cx[j]) || s.get(c.ca[j])) return false;
    for (uint32_t i = 0; i < (1u << c.n); ++i)
        if (s.get(c.ir[i]) || s.get(c.mux[i])) return false;
    if (s.get(c.mo)) return false;
    for (uint32_t b : c.buffer)
        if (s.get(b)) return false;
    for (uint32_t i = 0; i < c.n; ++i)
        if (s.get(c.r_and[i]) || s.get(c.r_xor[i])) return false;
    return true;  // program and register outputs are the free coordinates
}

std::vector<BigState> simulate(const ComputerCircuit& c, const BigState& s0, uint64_t iterations) {
    std::vector<BigState> trace;
    trace.reserve(iterations * c.stride() + 1);
    trace.push_back(s0);
    BigState s = s0;
    for (uint64_t t = 0; t < iterations * c.stride(); ++t) {
        s = c.model.step(s);
        if (c.variant == ComputerVariant::Strong) {
            // The injected feedback must duplicate the bit arriving from the
            // ring, or the modification would not be function-preserving.
            for (uint32_t i = 0; i < (1u << c.n); ++i)
                if (s.get(c.ir[i]) && !s.get(c.program[i][c.n - 1]))
                    throw std::runtime_error("strong variant: feedback bit diverged on line " +
                                             std::to_string(i + 1));
        }
        trace.push_back(s);
    }
    return trace;
}

std::vector<std::vector<uint8_t>> clock_schedule(const ComputerCircuit& c, const BigState& s0,
                                                 uint32_t updates) {
    std::vector<std::vector<uint8_t>> rows;
    BigState s = s0;
    for (uint32_t t = 0; t <= updates; ++t) {
        std::vector<uint8_t> row;
        row.push_back(s.get(c.c0));
        for (uint32_t j = 0; j < c.k; ++j) {
            row.push_back(s.get(c.cx[j]));
            row.push_back(s.get(c.ca[j]));
        }
        rows.push_back(row);
        s = c.model.step(s);
    }
    return rows;
}

State read_registers(const ComputerCircuit& c, const BigState& s) {
    State out = 0;
    for (uint32_t i = 0; i < c.n; ++i)
        if (s.get(c.r_sim[i])) out |= (1u << i);
    return out;
}

EquivalenceReport check_equivalence(const ComputerCircuit& c, const CausalModel& target, State t0,
                                    uint32_t iterations, std::optional<uint64_t> fuzz_seed) {
    EquivalenceReport rep;
    rep.stride = c.stride();
    BigState s0 = program_computer(c, target, t0);
    uint32_t first_checked_iteration = 0;
    if (fuzz_seed) {
        std::mt19937_64 rng(*fuzz_seed);
        for (uint32_t i = 0; i < (1u << c.n); ++i) s0.set(c.mux[i], rng() & 1u);
        s0.set(c.mo, rng() & 1u);
        for (uint32_t b : c.buffer) s0.set(b, rng() & 1u);
        first_checked_iteration = 1;  // settle for one iteration window
    }
    auto trace = simulate(c, s0, iterations);

    std::vector<State> target_states(iterations + 1);
    target_states[0] = t0;
    for (uint32_t i = 1; i <= iterations; ++i)
        target_states[i] = target.step_small(target_states[i - 1]);

    rep.iteration_ok.assign(iterations, 1);
    rep.pass = true;
    for (uint64_t t = 1; t < trace.size(); ++t) {
        uint32_t i = static_cast<uint32_t>((t - 1) / rep.stride);
        if (i < first_checked_iteration) continue;
        if (read_registers(c, trace[t]) != target_states[i]) {
            rep.iteration_ok[i] = 0;
            rep.pass = false;
            if (rep.first_divergence < 0) rep.first_divergence = static_cast<int64_t>(t);
        }
    }
    return rep;
}

}  // namespace iit
