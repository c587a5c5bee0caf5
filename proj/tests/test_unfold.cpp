#include <doctest.h>

#include "helpers.hpp"
#include "iit/complexes.hpp"
#include "iit/unfold.hpp"
#include "iit/zoo.hpp"

using namespace iit;
using namespace testutil;

namespace {
BigState big_of(const CausalModel& m, State s) {
    BigState b(m.size());
    for (uint32_t i = 0; i < m.size(); ++i) b.set(i, (s >> i) & 1u);
    return b;
}
CauseEffectStructure unfold_full(const CausalModel& m, State u) {
    std::vector<uint32_t> members;
    for (uint32_t i = 0; i < m.size(); ++i) members.push_back(i);
    auto sub = Subsystem::condition(m, members, big_of(m, u));
    auto r = phi_system(sub);
    return unfold(sub, r);
}
}  // namespace

TEST_CASE("monad: one distinction, one self-relation when states agree") {
    auto m = self_copy();  // A copies itself: cause and effect states match
    auto ces = unfold_full(m, 1);
    REQUIRE(ces.distinctions.size() == 1);
    CHECK(ces.distinctions[0].phi == doctest::Approx(1.0));
    CHECK(ces.relations.size() == 1);
    CHECK(ces.relations[0].phi == doctest::Approx(1.0));
    CHECK(ces.big_phi == doctest::Approx(2.0));
}

TEST_CASE("negated self-copy stays self-congruent (cause and effect both flip)") {
    auto m = self_copy(true);  // A = NOT A
    auto ces = unfold_full(m, 1);
    REQUIRE(ces.distinctions.size() == 1);
    CHECK(ces.distinctions[0].cause.state == ces.distinctions[0].effect.state);
    CHECK(ces.relations.size() == 1);
    CHECK(ces.big_phi <= 2.0 + 1e-9);
}

TEST_CASE("a distinction with incongruent cause and effect forms no self-relation") {
    Distinction d;
    d.mechanism = 0b1;
    d.mech_state = 0b1;
    d.cause = {0b1, 0b1, 0.5};   // cause purview {0} in state ON
    d.effect = {0b1, 0b0, 0.5};  // effect purview {0} in state OFF
    d.phi = 0.5;
    CHECK_FALSE(relation({d}, {0}).has_value());
    d.effect.state = 0b1;  // congruent now
    auto r = relation({d}, {0});
    REQUIRE(r.has_value());
    CHECK(r->phi == doctest::Approx(0.5));  // |O| = 1 tuple over 1 shared tuple
}

TEST_CASE("monad bound is exhaustive over unary self-units and both states") {
    // All four Boolean functions of one input.
    for (int fn = 0; fn < 4; ++fn) {
        UnitSpec u;
        u.id = "A";
        u.gate = Gate::TruthTable;
        u.inputs = {{0, false}};
        u.table = {uint8_t(fn & 1), uint8_t((fn >> 1) & 1)};
        CausalModel m("unary", {u});
        for (State s = 0; s < 2; ++s) {
            auto ces = unfold_full(m, s);
            CHECK(ces.distinctions.size() <= 1);
            CHECK(ces.relations.size() <= 1);
            CHECK(ces.big_phi <= 2.0 + 1e-9);
        }
    }
}

TEST_CASE("copy rings: first-order distinctions only, bounded structure") {
    std::mt19937 rng(17);
    for (uint32_t n = 4; n <= 8; ++n) {
        auto ring = copy_ring(n);
        for (int trial = 0; trial < 6; ++trial) {
            State s = (trial == 0) ? 0
                      : (trial == 1) ? ((1u << n) - 1)
                                     : State(rng() & ((1u << n) - 1));
            auto ces = unfold_full(ring, s);
            CHECK(ces.distinctions.size() <= n);
            for (const auto& d : ces.distinctions) {
                CHECK(popcount32(d.mechanism) == 1);
                CHECK(d.phi <= 1.0 + 1e-9);
            }
            CHECK(ces.relations.size() <= n);
            for (const auto& r : ces.relations) {
                CHECK(r.members.size() <= 2);  // no relation binds three or more
                if (n > 4) CHECK(r.phi <= 0.5 + 1e-9);
            }
            CHECK(ces.big_phi <= 1.5 * n + 1e-9);
        }
    }
}

TEST_CASE("higher-order mechanisms need shared inputs and outputs") {
    // In a copy ring no pair of units shares both, so no multi-unit mechanism
    // yields a distinction.
    auto ring = copy_ring(4);
    std::vector<uint32_t> members = {0, 1, 2, 3};
    auto sub = Subsystem::condition(ring, members, big_of(ring, 0b1111));
    for (uint32_t mech = 1; mech < 16; ++mech) {
        if (popcount32(mech) < 2) continue;
        auto d = distinction(sub, mech);
        CHECK_FALSE(d.has_value());
    }
}

TEST_CASE("pqrs reference values") {
    auto m = load_zoo("pqrs", "data");
    State u = parse_state(m, "0101");
    auto cs = find_complexes_small(m, u);
    REQUIRE(cs.complexes.size() == 1);
    CHECK(cs.complexes[0].units.size() == 4);
    CHECK(cs.complexes[0].system.phi == doctest::Approx(1.51).epsilon(0.01));

    auto val = [&](uint32_t mask) {
        auto sub = Subsystem::condition_small(m, mask, u);
        return phi_system(sub).phi;
    };
    CHECK(val(0b1110) == doctest::Approx(0.42).epsilon(0.02));  // QrS
    CHECK(val(0b0001) == doctest::Approx(1.00));                // p
    CHECK(val(0b0111) == 0.0);                                  // pQr
    CHECK(val(0b1011) == 0.0);                                  // pQS
    CHECK(val(0b1101) == 0.0);                                  // prS
    CHECK(val(0b0011) == 0.0);                                  // pQ
    CHECK(val(0b0101) == 0.0);                                  // pr
}

TEST_CASE("pqrs unfolding is deterministic and additive") {
    auto m = load_zoo("pqrs", "data");
    State u = parse_state(m, "0101");
    auto ces1 = unfold_full(m, u);
    auto ces2 = unfold_full(m, u);
    CHECK(ces1.distinctions.size() == ces2.distinctions.size());
    CHECK(ces1.relations.size() == ces2.relations.size());
    CHECK(ces1.big_phi == ces2.big_phi);
    double sum = 0;
    for (const auto& d : ces1.distinctions) sum += d.phi;
    for (const auto& r : ces1.relations) sum += r.phi;
    CHECK(ces1.big_phi == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("ces equivalence: reflexivity and refutation") {
    auto m = load_zoo("pqrs", "data");
    State u = parse_state(m, "0101");
    auto ces = unfold_full(m, u);
    auto rep = ces_equivalent(ces, ces);
    CHECK(rep.isomorphic);
    // witness is the identity
    for (uint32_t i = 0; i < rep.witness.size(); ++i) CHECK(rep.witness[i] == i);

    auto ring = copy_ring(4);
    auto ring_ces = unfold_full(ring, 0b1111);
    auto rep2 = ces_equivalent(ces, ring_ces);
    CHECK_FALSE(rep2.isomorphic);
    CHECK_FALSE(rep2.obstruction.empty());
}

TEST_CASE("relation scan cap throws") {
    EngineConfig cfg;
    cfg.relation_scan_cap = 4;
    auto m = load_zoo("pqrs", "data");
    State u = parse_state(m, "0101");
    std::vector<uint32_t> members = {0, 1, 2, 3};
    auto sub = Subsystem::condition(m, members, big_of(m, u));
    auto r = phi_system(sub, cfg);
    CHECK_THROWS_AS(unfold(sub, r, cfg), RelationScanTooLarge);
}
