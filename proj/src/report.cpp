#include "iit/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace iit::report {

using nlohmann::json;

namespace {

double phi6(double x) { return std::round(x * 1e6) / 1e6; }

std::string unit_list(const CauseEffectStructure& ces, uint32_t mask, State state) {
    std::string out;
    for (uint32_t i = 0; i < ces.unit_ids.size(); ++i) {
        if (!((mask >> i) & 1u)) continue;
        std::string id = ces.unit_ids[i];
        bool on = (state >> i) & 1u;
        for (auto& ch : id) ch = on ? std::toupper(ch) : std::tolower(ch);
        out += id;
    }
    return out;
}

json header(const char* kind) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    j["tolerance"] = 1e-6;
    return j;
}

}  // namespace

std::string phi_result_json(const CausalModel& model, const std::vector<uint32_t>& members,
                            State member_state, const SystemPhiResult& r) {
    json j = header("phi");
    j["model"] = model.name();
    json ms = json::array();
    for (uint32_t g : members) ms.push_back(model.unit(g).id);
    j["members"] = ms;
    j["state"] = state_to_string(member_state, static_cast<uint32_t>(members.size()));
    j["phi_s"] = phi6(r.phi);
    j["ii_c"] = phi6(r.ii_c);
    j["ii_e"] = phi6(r.ii_e);
    j["cause_state"] = state_to_string(r.cause_state, static_cast<uint32_t>(members.size()));
    j["effect_state"] = state_to_string(r.effect_state, static_cast<uint32_t>(members.size()));
    j["structural_zero"] = r.structural_zero;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.mip) j["mip"] = r.mip->label();
    return j.dump(2);
}

std::string complexes_json(const CausalModel& model, const BigState& u, const ComplexSet& cs) {
    json j = header("complexes");
    j["model"] = model.name();
    j["candidates_evaluated"] = cs.candidates_evaluated;
    json list = json::array();
    for (const auto& c : cs.complexes) {
        json e;
        json units = json::array();
        for (uint32_t g : c.units) units.push_back(model.unit(g).id);
        e["units"] = units;
        e["state"] = state_to_string(c.state, static_cast<uint32_t>(c.units.size()));
        e["phi_s"] = phi6(c.system.phi);
        list.push_back(e);
    }
    j["complexes"] = list;
    (void)u;
    return j.dump(2);
}

std::string ces_json(const CauseEffectStructure& ces) {
    json j = header("cause_effect_structure");
    json units = json::array();
    for (const auto& id : ces.unit_ids) units.push_back(id);
    j["units"] = units;
    j["state"] = state_to_string(ces.state, static_cast<uint32_t>(ces.unit_ids.size()));
    j["phi_s"] = phi6(ces.system.phi);
    j["big_phi"] = phi6(ces.big_phi);
    j["sum_phi_d"] = phi6(ces.sum_phi_d);
    j["sum_phi_r"] = phi6(ces.sum_phi_r);
    json ds = json::array();
    for (const auto& d : ces.distinctions) {
        json e;
        e["mechanism"] = unit_list(ces, d.mechanism, d.mech_state);
        e["cause"] = unit_list(ces, d.cause.purview, d.cause.state);
        e["effect"] = unit_list(ces, d.effect.purview, d.effect.state);
        e["phi_c"] = phi6(d.cause.phi);
        e["phi_e"] = phi6(d.effect.phi);
        e["phi_d"] = phi6(d.phi);
        ds.push_back(e);
    }
    j["distinctions"] = ds;
    j["relation_count"] = ces.relations.size();
    json rs = json::array();
    // Full relation dumps get large; keep degree <= 3 verbatim and summarize
    // the rest by order.
    std::map<size_t, size_t> order_hist;
    for (const auto& r : ces.relations) {
        order_hist[r.members.size()]++;
        if (r.members.size() <= 3) {
            json e;
            json ms = json::array();
            for (uint32_t idx : r.members)
                ms.push_back(unit_list(ces, ces.distinctions[idx].mechanism,
                                       ces.distinctions[idx].mech_state));
            e["distinctions"] = ms;
            e["overlap"] = unit_list(ces, r.overlap, r.overlap_state);
            e["phi_r"] = phi6(r.phi);
            rs.push_back(e);
        }
    }
    j["relations_upto_degree3"] = rs;
    json hist = json::object();
    for (auto& [k, v] : order_hist) hist[std::to_string(k)] = v;
    j["relation_degree_histogram"] = hist;
    return j.dump(2);
}

std::string equivalence_json(const EquivalenceReport& rep, const std::string& target_name,
                             State t0) {
    json j = header("equivalence");
    j["target"] = target_name;
    j["t0"] = state_to_string(t0, 32).substr(0, 8);
    j["stride"] = rep.stride;
    j["pass"] = rep.pass;
    j["first_divergence"] = rep.first_divergence;
    size_t ok = 0;
    for (uint8_t b : rep.iteration_ok) ok += b;
    j["iterations_ok"] = ok;
    j["iterations"] = rep.iteration_ok.size();
    return j.dump(2);
}

std::string bounds_json(const BoundReport& rep) {
    json j = header("bounds");
    j["all_pass"] = rep.all_pass;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json e;
        e["label"] = r.label;
        e["big_phi"] = phi6(r.phi);
        e["bound"] = phi6(r.bound);
        e["pass"] = r.pass;
        rows.push_back(e);
    }
    j["rows"] = rows;
    return j.dump(2);
}

std::string macro_audit_json(const std::vector<MacroAuditRow>& rows) {
    json j = header("macro_audit");
    json list = json::array();
    bool all = true;
    for (const auto& r : rows) {
        json e;
        e["candidate"] = r.candidate;
        e["phi_s"] = phi6(r.phi);
        e["phi_zero"] = r.phi_zero;
        e["nont"] = r.nont;
        e["iso"] = r.iso_any;
        e["invalid_unit"] = r.invalid_unit;
        e["witness"] = r.witness;
        e["tripped"] = r.tripped();
        all = all && r.tripped();
        list.push_back(e);
    }
    j["rows"] = list;
    j["all_tripped"] = all;
    return j.dump(2);
}

std::string ces_dot(const CauseEffectStructure& ces) {
    std::ostringstream out;
    out << "graph ces {\n";
    out << "  // complex state " << state_to_string(ces.state, uint32_t(ces.unit_ids.size()))
        << ", big phi " << phi6(ces.big_phi) << "\n";
    for (size_t d = 0; d < ces.distinctions.size(); ++d) {
        out << "  d" << d << " [label=\""
            << unit_list(ces, ces.distinctions[d].mechanism, ces.distinctions[d].mech_state)
            << "\\nphi=" << phi6(ces.distinctions[d].phi) << "\"];\n";
    }
    size_t tri = 0;
    for (const auto& r : ces.relations) {
        if (r.members.size() == 2) {
            out << "  d" << r.members[0] << " -- d" << r.members[1] << " [label=\""
                << phi6(r.phi) << "\"];\n";
        } else if (r.members.size() == 3) {
            // triangles via an invisible hub node
            std::string hub = "t" + std::to_string(tri++);
            out << "  " << hub << " [shape=point,width=0.05];\n";
            for (uint32_t m : r.members) out << "  " << hub << " -- d" << m << " [style=dotted];\n";
        }
    }
    out << "  // higher-degree relations omitted: " << ces.relations.size() << " total\n";
    out << "}\n";
    return out.str();
}

std::string trace_csv(const ComputerCircuit& c, const std::vector<BigState>& trace) {
    std::ostringstream out;
    out << "update,registers,state\n";
    for (size_t t = 0; t < trace.size(); ++t) {
        out << t << "," << state_to_string(read_registers(c, trace[t]), c.n) << ",";
        for (uint32_t i = 0; i < trace[t].width; ++i) out << (trace[t].get(i) ? '1' : '0');
        out << "\n";
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

}  // namespace iit::report
