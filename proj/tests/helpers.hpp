#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "iit/model.hpp"

// Small model builders shared by the test suites.
namespace testutil {

using namespace iit;

inline UnitSpec copy_unit(std::string id, uint32_t src, bool neg = false) {
    UnitSpec u;
    u.id = std::move(id);
    u.gate = Gate::Copy;
    u.inputs = {{src, neg}};
    return u;
}

inline CausalModel copy_ring(uint32_t n) {
    // Unit j reads unit j+1 (mod n): contents rotate toward lower indices.
    std::vector<UnitSpec> units;
    for (uint32_t j = 0; j < n; ++j)
        units.push_back(copy_unit("N" + std::to_string(j), (j + 1) % n));
    return CausalModel("ring" + std::to_string(n), std::move(units));
}

inline CausalModel self_copy(bool negated = false) {
    return CausalModel("monad", {copy_unit("A", 0, negated)});
}

// Random deterministic model: every unit a truth table over a random input
// set of size 1..max_fanin.
inline CausalModel random_model(uint32_t n, std::mt19937& rng, uint32_t max_fanin = 3) {
    std::vector<UnitSpec> units;
    std::uniform_int_distribution<uint32_t> pick(0, n - 1);
    for (uint32_t j = 0; j < n; ++j) {
        UnitSpec u;
        u.id = "U" + std::to_string(j);
        u.gate = Gate::TruthTable;
        uint32_t fanin = 1 + rng() % std::min(max_fanin, n);
        std::vector<uint32_t> srcs;
        while (srcs.size() < fanin) {
            uint32_t s = pick(rng);
            bool dup = false;
            for (uint32_t t : srcs) dup = dup || t == s;
            if (!dup) srcs.push_back(s);
        }
        for (uint32_t s : srcs) u.inputs.push_back({s, false});
        for (uint32_t r = 0; r < (1u << fanin); ++r) u.table.push_back(rng() & 1u);
        units.push_back(std::move(u));
    }
    return CausalModel("rand" + std::to_string(n), std::move(units));
}

}  // namespace testutil
