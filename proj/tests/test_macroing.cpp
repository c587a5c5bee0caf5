#include <doctest.h>

#include "helpers.hpp"
#include "iit/macro_doc.hpp"
#include "iit/macroing.hpp"
#include "iit/zoo.hpp"

using namespace iit;
using namespace testutil;

namespace {
BigState big_of(const CausalModel& m, State s) {
    BigState b(m.size());
    for (uint32_t i = 0; i < m.size(); ++i) b.set(i, (s >> i) & 1u);
    return b;
}
MacroUnit projection_unit(std::string id, std::vector<uint32_t> constituents, uint32_t readout_pos) {
    MacroUnit u;
    u.id = std::move(id);
    u.constituents = std::move(constituents);
    u.state_map.assign(size_t(1) << u.constituents.size(), 0);
    for (uint32_t a = 0; a < u.state_map.size(); ++a) u.state_map[a] = (a >> readout_pos) & 1u;
    return u;
}
}  // namespace

TEST_CASE("overlapping constituents and apportionments are rejected") {
    auto m = copy_ring(4);
    auto a = projection_unit("a", {0, 1}, 0);
    auto b = projection_unit("b", {1, 2}, 0);
    CHECK_THROWS_AS(define_macro(m, {a, b}, 1, big_of(m, 0)), OverlapError);

    auto c = projection_unit("c", {2, 3}, 0);
    c.apportionment = {0};  // collides with a's constituent
    CHECK_THROWS_AS(define_macro(m, {a, c}, 1, big_of(m, 0)), OverlapError);

    auto bad = projection_unit("bad", {2}, 0);
    bad.state_map.pop_back();
    CHECK_THROWS_AS(define_macro(m, {a, bad}, 1, big_of(m, 0)), IncompleteStateMap);
}

TEST_CASE("identity macroing preserves the TPM and the analysis") {
    std::mt19937 rng(31);
    auto m = random_model(4, rng);
    for (State u : {State(3), State(9)}) {
        std::vector<MacroUnit> units;
        for (uint32_t i = 0; i < 4; ++i)
            units.push_back(projection_unit(m.unit(i).id, {i}, 0));
        auto ms = define_macro(m, units, 1, big_of(m, u));
        auto tpm = macro_tpm(ms);
        for (State r = 0; r < 16; ++r)
            for (State t = 0; t < 16; ++t)
                CHECK(tpm[r][t] == doctest::Approx(m.step_small(r) == t ? 1.0 : 0.0));
        CHECK(macro_tpm_factorizes(tpm, 4));
    }
}

TEST_CASE("grouping two independent self-copies fails integration") {
    std::vector<UnitSpec> units = {copy_unit("A", 0), copy_unit("B", 1)};
    CausalModel m("two", std::move(units));
    auto ms = define_macro(m, {projection_unit("ab", {0, 1}, 0)}, 1, big_of(m, 0b11));
    auto tpm = macro_tpm(ms);
    CHECK(tpm.size() == 2);  // one macro unit
    auto rep = validate_macro(ms);
    REQUIRE(rep.units.size() == 1);
    CHECK_FALSE(rep.units[0].integrated);
    CHECK_FALSE(rep.verdict);
}

TEST_CASE("a coupled pair beaten by its own part is not maximally irreducible within") {
    // B = AND(A, B) leans on A; {A} alone carries more phi than {A, B}.
    std::vector<UnitSpec> units;
    units.push_back(copy_unit("A", 0));
    UnitSpec b;
    b.id = "B";
    b.gate = Gate::And;
    b.inputs = {{0, false}, {1, false}};
    units.push_back(b);
    UnitSpec c = copy_unit("C", 2);
    units.push_back(c);
    CausalModel m("weak", std::move(units));
    auto ms = define_macro(m, {projection_unit("ab", {0, 1}, 0)}, 1, big_of(m, 0b011));
    auto rep = validate_macro(ms);
    REQUIRE(rep.units.size() == 1);
    if (rep.units[0].integrated) {
        CHECK(rep.units[0].best_subset_phi >= rep.units[0].phi - 1e-9);
        CHECK_FALSE(rep.units[0].maximally_irreducible_within);
    }
    CHECK_FALSE(rep.verdict);
}

TEST_CASE("macro tpm rows are distributions with completion-induced uncertainty") {
    auto m = copy_ring(4);
    // one macro unit over two ring cells read out at the first
    auto ms = define_macro(m, {projection_unit("ab", {0, 1}, 0), projection_unit("cd", {2, 3}, 0)},
                           2, big_of(m, 0b0101));
    auto tpm = macro_tpm(ms);
    for (auto& row : tpm) {
        double sum = 0;
        for (double p : row) sum += p;
        CHECK(sum == doctest::Approx(1.0));
    }
}

TEST_CASE("audit of the register readout: every target unit is isolated or the system is reducible") {
    auto pqrs = load_zoo("pqrs", "data");
    for (auto variant : {ComputerVariant::Weak, ComputerVariant::Strong}) {
        auto c = generate_computer(2, variant);
        auto s0 = program_computer(c, pqrs, parse_state(pqrs, "0101"));
        auto trace = simulate(c, s0, 1);
        auto rows = audit_computer_macroing(c, trace[6]);
        REQUIRE_FALSE(rows.empty());
        for (const auto& row : rows) {
            INFO(row.candidate << " phi=" << row.phi << " witness=" << row.witness);
            CHECK(row.tripped());
        }
        // the multiplexer unit specifically fails integration
        bool mux_row = false;
        for (const auto& row : rows)
            if (row.candidate == "unit mux") {
                mux_row = true;
                CHECK(row.invalid_unit);
            }
        CHECK(mux_row);
    }
}

TEST_CASE("audit against a system's own units raises nothing") {
    auto pqrs = load_zoo("pqrs", "data");
    State u = parse_state(pqrs, "0101");
    std::vector<uint32_t> members = {0, 1, 2, 3};
    auto sub = Subsystem::condition(pqrs, members, big_of(pqrs, u));
    auto r = phi_system(sub);
    auto ces = unfold(sub, r);
    auto audit = audit_ces(ces, members);
    CHECK_FALSE(audit.nont);
    for (uint8_t iso : audit.iso) CHECK_FALSE(iso);
}

TEST_CASE("fig4b conformance data is absent and reported as such") {
    CHECK_THROWS_WITH_AS(load_zoo("fig4b", "data"),
                         doctest::Contains("absent"), UnknownModel);
}

TEST_CASE("macro documents round-trip through the loader") {
    auto c = generate_computer(2, ComputerVariant::Weak);
    auto units = computer_macro_units(c);
    BigState u(c.model.size());
    auto ms = define_macro(c.model, units, 1, u);
    auto doc = serialize_macro_doc(ms, "fig_style");
    auto ms2 = parse_macro_doc(c.model, doc, u);
    REQUIRE(ms2.units.size() == ms.units.size());
    for (size_t i = 0; i < ms.units.size(); ++i) {
        CHECK(ms2.units[i].constituents == ms.units[i].constituents);
        CHECK(ms2.units[i].state_map == ms.units[i].state_map);
    }
    CHECK(ms2.tau == 1);
}
