#include <doctest.h>

#include "helpers.hpp"
#include "iit/motifs.hpp"
#include "iit/unfold.hpp"
#include "iit/zoo.hpp"

using namespace iit;
using namespace testutil;

TEST_CASE("motif classification") {
    auto ring = copy_ring(4);
    CHECK(classify(ring, {0, 1, 2, 3}).kind == MotifKind::Ring);

    auto monad = self_copy();
    CHECK(classify(monad, {0}).kind == MotifKind::Monad);

    // imperfect ring: 4-ring plus a unit bridging across it
    std::vector<UnitSpec> units;
    for (uint32_t j = 0; j < 4; ++j) units.push_back(copy_unit("N" + std::to_string(j), (j + 1) % 4));
    UnitSpec extra = copy_unit("N4", 2);  // reads n-2
    units.push_back(extra);
    UnitSpec& first = units[0];
    first.gate = Gate::Or;
    first.inputs = {{1, false}, {4, false}};
    CausalModel imp("imp", std::move(units));
    auto m = classify(imp, {0, 1, 2, 3, 4});
    CHECK(m.kind == MotifKind::ImperfectRing);
    CHECK(m.size == 5);

    std::mt19937 rng(10);
    auto rnd = random_model(4, rng);
    auto cls = classify(rnd, {0, 1, 2, 3});
    CHECK((cls.kind == MotifKind::Other || cls.kind == MotifKind::Ring));
}

TEST_CASE("bounds: ring, imperfect ring and monad formulas") {
    CHECK(ring_phi_bound(4) == doctest::Approx(6.0));
    CHECK(imperfect_ring_phi_bound(5) == doctest::Approx((9.0 * 5 + 64) / 6));
    CHECK(monad_phi_bound() == doctest::Approx(2.0));
}

TEST_CASE("weak computer catalog realizes 24 complexes at the register-update phase") {
    auto wcc = generate_computer(2, ComputerVariant::Weak);
    auto pqrs = load_zoo("pqrs", "data");
    auto s0 = program_computer(wcc, pqrs, parse_state(pqrs, "0101"));
    auto trace = simulate(wcc, s0, 1);
    auto cs = find_computer_complexes(wcc, trace[6], 6);
    CHECK(cs.complexes.size() == 24);
    int rings = 0, monads = 0;
    for (const auto& c : cs.complexes) {
        auto motif = classify(wcc.model, c.units);
        if (motif.kind == MotifKind::Ring) ++rings;
        if (motif.kind == MotifKind::Monad) ++monads;
    }
    CHECK(rings == 16);
    CHECK(monads == 8);
}

TEST_CASE("catalog soundness: no strongly connected subset beyond the catalog is a complex") {
    auto wcc = generate_computer(2, ComputerVariant::Weak);
    auto pqrs = load_zoo("pqrs", "data");
    auto s0 = program_computer(wcc, pqrs, parse_state(pqrs, "0101"));
    auto trace = simulate(wcc, s0, 1);
    const auto& u = trace[6];
    auto subsets = strongly_connected_subsets(wcc.model, u, 4);
    auto cat = candidate_catalog(wcc, u, 6);
    std::set<std::vector<uint32_t>> catalog_sets;
    for (const auto& e : cat.entries) catalog_sets.insert(e.units);
    // Everything strongly connected but outside the catalog must be reducible
    // (the register SIM->XOR->AND cycles are the only such subsets here).
    size_t outside = 0;
    for (const auto& s : subsets) {
        if (catalog_sets.count(s)) continue;
        ++outside;
        INFO("subset of size " << s.size());
        double phi = 0;
        if (!structural_reducibility(wcc.model, s, u)) {
            auto sub = Subsystem::condition(wcc.model, s, u);
            phi = phi_system(sub).phi;
        }
        CHECK(phi == 0.0);
    }
    CHECK(subsets.size() == cat.entries.size() + outside);
    CHECK(outside == 4);  // one three-unit cycle per data register
}

TEST_CASE("bound report covers every realized complex") {
    auto wcc = generate_computer(2, ComputerVariant::Weak);
    auto pqrs = load_zoo("pqrs", "data");
    auto s0 = program_computer(wcc, pqrs, parse_state(pqrs, "0101"));
    auto trace = simulate(wcc, s0, 1);
    auto cs = find_computer_complexes(wcc, trace[6], 6);
    std::vector<CauseEffectStructure> structures;
    for (const auto& c : cs.complexes)
        structures.push_back(unfold_complex(wcc.model, trace[6], c));
    auto rep = verify_bounds(wcc, trace[6], cs.complexes, structures);
    CHECK(rep.all_pass);
    CHECK(rep.rows.size() == 24);
}

TEST_CASE("strong variant catalog admits the line variants and the special triple") {
    auto scc = generate_computer(2, ComputerVariant::Strong);
    BigState dummy(scc.model.size());
    auto cat5 = candidate_catalog(scc, dummy, 5);   // update 5 = 2n - 3
    auto cat6 = candidate_catalog(scc, dummy, 6);
    bool has_triple5 = false, has_triple6 = false;
    for (const auto& e : cat5.entries) has_triple5 = has_triple5 || e.component.rfind("clock-register", 0) == 0;
    for (const auto& e : cat6.entries) has_triple6 = has_triple6 || e.component.rfind("clock-register", 0) == 0;
    CHECK(has_triple5);
    CHECK_FALSE(has_triple6);
}
