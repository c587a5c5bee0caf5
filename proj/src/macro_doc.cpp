#include "iit/macro_doc.hpp"

#include <fstream>
#include <sstream>

namespace iit {

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else cur += c;
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}
}  // namespace

MacroSystem parse_macro_doc(const CausalModel& model, const std::string& text,
                            const BigState& micro_state) {
    std::istringstream in(text);
    std::string line_text;
    uint32_t tau = 1;
    std::vector<MacroUnit> units;
    int lineno = 0;
    while (std::getline(in, line_text)) {
        ++lineno;
        auto hash = line_text.find('#');
        if (hash != std::string::npos) line_text = line_text.substr(0, hash);
        std::istringstream ls(line_text);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "macro") {
            std::string rest;
            while (ls >> rest)
                if (rest.rfind("tau=", 0) == 0) tau = std::stoul(rest.substr(4));
            continue;
        }
        if (tok != "unit")
            throw std::runtime_error("macro doc line " + std::to_string(lineno) +
                                     ": expected 'unit' or 'macro'");
        MacroUnit u;
        if (!(ls >> u.id))
            throw std::runtime_error("macro doc line " + std::to_string(lineno) + ": missing id");
        std::string readout, mapbits;
        std::string field;
        while (ls >> field) {
            if (field.rfind("constituents=", 0) == 0) {
                for (const auto& id : split(field.substr(13), ',')) {
                    auto idx = model.index_of(id);
                    if (!idx)
                        throw std::runtime_error("macro doc: unknown unit " + id);
                    u.constituents.push_back(*idx);
                }
            } else if (field.rfind("apportionment=", 0) == 0) {
                for (const auto& id : split(field.substr(14), ',')) {
                    auto idx = model.index_of(id);
                    if (!idx)
                        throw std::runtime_error("macro doc: unknown unit " + id);
                    u.apportionment.push_back(*idx);
                }
            } else if (field.rfind("readout=", 0) == 0) {
                readout = field.substr(8);
            } else if (field.rfind("map=", 0) == 0) {
                mapbits = field.substr(4);
            }
        }
        if (u.constituents.empty())
            throw std::runtime_error("macro doc: unit " + u.id + " has no constituents");
        if (!readout.empty()) {
            auto idx = model.index_of(readout);
            if (!idx) throw std::runtime_error("macro doc: unknown readout " + readout);
            uint32_t pos = ~0u;
            for (size_t b = 0; b < u.constituents.size(); ++b)
                if (u.constituents[b] == *idx) pos = static_cast<uint32_t>(b);
            if (pos == ~0u)
                throw std::runtime_error("macro doc: readout must be a constituent of " + u.id);
            u.state_map.assign(size_t(1) << u.constituents.size(), 0);
            for (uint32_t a = 0; a < u.state_map.size(); ++a) u.state_map[a] = (a >> pos) & 1u;
        } else {
            for (char c : mapbits) {
                if (c != '0' && c != '1')
                    throw std::runtime_error("macro doc: bad map bit in " + u.id);
                u.state_map.push_back(c == '1');
            }
        }
        units.push_back(std::move(u));
    }
    return define_macro(model, std::move(units), tau, micro_state);
}

MacroSystem load_macro_file(const CausalModel& model, const std::string& path,
                            const BigState& micro_state) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open macro document: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_macro_doc(model, ss.str(), micro_state);
}

std::string serialize_macro_doc(const MacroSystem& ms, const std::string& name) {
    std::ostringstream out;
    out << "macro " << name << " tau=" << ms.tau << "\n";
    for (const auto& u : ms.units) {
        out << "unit " << u.id << " constituents=";
        for (size_t i = 0; i < u.constituents.size(); ++i) {
            if (i) out << ",";
            out << ms.model->unit(u.constituents[i]).id;
        }
        if (!u.apportionment.empty()) {
            out << " apportionment=";
            for (size_t i = 0; i < u.apportionment.size(); ++i) {
                if (i) out << ",";
                out << ms.model->unit(u.apportionment[i]).id;
            }
        }
        out << " map=";
        for (uint8_t b : u.state_map) out << (b ? '1' : '0');
        out << "\n";
    }
    return out.str();
}

}  // namespace iit
