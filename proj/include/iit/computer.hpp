#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iit/model.hpp"

namespace iit {

enum class ComputerVariant : uint8_t { Weak, Strong };

// A generated stored-program computer that simulates any deterministic
// Boolean system of n = 2^k units, with its named component index.
struct ComputerCircuit {
    explicit ComputerCircuit(CausalModel m) : model(std::move(m)) {}
    CausalModel model;
    uint32_t k = 2, n = 4;
    ComputerVariant variant = ComputerVariant::Weak;

    std::vector<std::vector<uint32_t>> program;  // [line][position], 2^n lines of n units
    std::vector<uint32_t> ir;                    // instruction register, per line
    std::vector<uint32_t> mux;                   // multiplexer AND units, per line
    uint32_t mo = 0;                             // multiplexer output (generalized OR)
    uint32_t c0 = 0;                             // core oscillator
    std::vector<uint32_t> cx, ca;                // frequency dividers, stage j
    std::vector<uint32_t> buffer;                // B_1 .. B_{2n-5}; B_1 feeds R_1^XOR
    std::vector<uint32_t> r_sim, r_and, r_xor;   // data registers, left to right

    uint32_t stride() const { return 2 * n; }    // updates per simulation iteration
};

ComputerCircuit generate_computer(uint32_t k, ComputerVariant variant);

class SizeMismatch : public std::runtime_error {
  public:
    explicit SizeMismatch(const std::string& m) : std::runtime_error(m) {}
};

// A valid initial state: program rings encode the target's transition rules,
// register outputs encode t0, clock at its schedule phase, everything else
// off.
BigState program_computer(const ComputerCircuit& c, const CausalModel& target, State t0);

bool is_valid_initial_state(const ComputerCircuit& c, const BigState& s);

// Trace of iterations*2n updates (plus the initial state). For the strong
// variant, verifies at every update that the instruction-register feedback
// into the program rings duplicates the arriving bit.
std::vector<BigState> simulate(const ComputerCircuit& c, const BigState& s0, uint64_t iterations);

// The clock schedule over one full period, row t = (C0, CX1, CA1, ..., CXk, CAk).
std::vector<std::vector<uint8_t>> clock_schedule(const ComputerCircuit& c, const BigState& s0,
                                                 uint32_t updates);

struct EquivalenceReport {
    uint32_t stride = 0;               // C = 2n
    bool pass = false;
    std::vector<uint8_t> iteration_ok; // per simulated target transition
    int64_t first_divergence = -1;     // computer update index, -1 if none
};

// Functional equivalence modulo 2n updates: the target's state at iteration i
// must equal the register outputs at every computer update in (iC, (i+1)C].
// With fuzz_seed set, the processing units (multiplexer, its output and the
// buffer) start in random states and checking starts after the first
// iteration window.
EquivalenceReport check_equivalence(const ComputerCircuit& c, const CausalModel& target, State t0,
                                    uint32_t iterations,
                                    std::optional<uint64_t> fuzz_seed = std::nullopt);

State read_registers(const ComputerCircuit& c, const BigState& s);

}  // namespace iit
