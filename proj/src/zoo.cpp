#include "iit/zoo.hpp"

#include <filesystem>

#include "iit/computer.hpp"
#include "iit/model_doc.hpp"

namespace iit {

CausalModel rule110_ring(uint32_t n) {
    if (n < 3) throw std::invalid_argument("rule 110 ring needs at least 3 cells");
    static const char* names4[4] = {"W", "X", "Y", "Z"};
    std::vector<UnitSpec> units;
    for (uint32_t i = 0; i < n; ++i) {
        UnitSpec u;
        u.id = (n == 4) ? names4[i] : "C" + std::to_string(i);
        u.gate = Gate::TruthTable;
        uint32_t left = (i + 1) % n, right = (i + n - 1) % n;
        u.inputs = {{left, false}, {i, false}, {right, false}};
        // Row index is little-endian over (left, self, right); rule 110
        // indexes patterns as the binary number (left, self, right).
        u.table.resize(8);
        for (uint32_t row = 0; row < 8; ++row) {
            uint32_t l = row & 1u, c = (row >> 1) & 1u, r = (row >> 2) & 1u;
            u.table[row] = (110u >> ((l << 2) | (c << 1) | r)) & 1u;
        }
        units.push_back(std::move(u));
    }
    return CausalModel("rule110(" + std::to_string(n) + ")", std::move(units));
}

namespace {

void check_rule110(const CausalModel& m) {
    // Local table spot checks via the standard rule-110 pattern table on a
    // homogeneous neighborhood plus one perturbed cell.
    uint32_t n = m.size();
    State all_on = (n == 32) ? ~0u : ((1u << n) - 1);
    if (m.step_small(0) != 0) throw ConformanceFailure("rule 110: 000 pattern must stay off");
    if (m.step_small(all_on) != 0) throw ConformanceFailure("rule 110: 111 pattern must die");
    // Single on cell: the cell itself sees 010->1 and exactly one neighbor
    // picks the cell up (the asymmetry of the rule: 001->1 but 100->0).
    State one = 1u << 1;
    State next = m.step_small(one);
    bool keeps_self = (next >> 1) & 1u;
    uint32_t spread = popcount32(next);
    if (!keeps_self || spread != 2)
        throw ConformanceFailure("rule 110: single cell evolution wrong");
}

void check_pqrs(const CausalModel& m) {
    if (m.size() != 4) throw ConformanceFailure("pqrs: expected 4 units");
    // The published nine-state cycle and the fixed point.
    const char* cycle[] = {"1000", "0001", "1011", "1111", "1100",
                           "0011", "1101", "0101", "1110"};
    for (int i = 0; i < 9; ++i) {
        State s = parse_state(m, cycle[i]);
        State t = parse_state(m, cycle[(i + 1) % 9]);
        if (m.step_small(s) != t)
            throw ConformanceFailure("pqrs: cycle transition " + std::string(cycle[i]) +
                                     " failed");
    }
    if (m.step_small(0) != 0) throw ConformanceFailure("pqrs: 0000 must be a fixed point");
}

}  // namespace

CausalModel load_zoo(const std::string& name, const std::string& data_dir) {
    if (name == "pqrs") {
        auto path = std::filesystem::path(data_dir) / "pqrs.model";
        auto m = load_model_file(path.string());
        check_pqrs(m);
        return m;
    }
    if (name.rfind("rule110", 0) == 0) {
        uint32_t n = 4;
        auto open = name.find('(');
        if (open != std::string::npos) n = std::stoul(name.substr(open + 1));
        auto m = rule110_ring(n);
        check_rule110(m);
        return m;
    }
    if (name.rfind("wcc", 0) == 0 || name.rfind("scc", 0) == 0) {
        uint32_t k = 2;
        auto open = name.find('(');
        if (open != std::string::npos) k = std::stoul(name.substr(open + 1));
        auto variant = name[0] == 'w' ? ComputerVariant::Weak : ComputerVariant::Strong;
        return generate_computer(k, variant).model;
    }
    if (name == "fig4b") {
        auto path = std::filesystem::path(data_dir) / "fig4b.model";
        if (!std::filesystem::exists(path))
            throw UnknownModel("fig4b model data file is absent: " + path.string());
        return load_model_file(path.string());
    }
    throw UnknownModel("unknown zoo model: " + name);
}

}  // namespace iit
