#include "iit/model_doc.hpp"

#include <fstream>
#include <map>
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
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

CausalModel parse_model_doc(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string name = "model";
    struct RawUnit {
        std::string id;
        Gate gate;
        std::vector<std::pair<std::string, bool>> inputs;  // (id, negated)
        std::vector<uint8_t> table;
    };
    std::vector<RawUnit> raw;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "model") {
            ls >> name;
            continue;
        }
        if (tok != "unit")
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'unit' or 'model'");
        RawUnit u;
        std::string gate_tok, inputs_tok, table_tok;
        if (!(ls >> u.id >> gate_tok >> inputs_tok))
            throw std::runtime_error("line " + std::to_string(lineno) + ": malformed unit line");
        auto g = gate_from_name(gate_tok);
        if (!g) throw std::runtime_error("line " + std::to_string(lineno) + ": unknown gate " + gate_tok);
        u.gate = *g;
        for (const auto& part : split(inputs_tok, ',')) {
            if (part.empty())
                throw std::runtime_error("line " + std::to_string(lineno) + ": empty input reference");
            bool neg = part[0] == '!';
            u.inputs.emplace_back(neg ? part.substr(1) : part, neg);
        }
        if (ls >> table_tok) {
            for (char c : table_tok) {
                if (c != '0' && c != '1')
                    throw std::runtime_error("line " + std::to_string(lineno) + ": bad table bit");
                u.table.push_back(c == '1');
            }
        }
        raw.push_back(std::move(u));
    }

    std::map<std::string, uint32_t> index;
    for (uint32_t i = 0; i < raw.size(); ++i) index.emplace(raw[i].id, i);
    std::vector<UnitSpec> units;
    for (const auto& r : raw) {
        UnitSpec u;
        u.id = r.id;
        u.gate = r.gate;
        u.table = r.table;
        for (const auto& [id, neg] : r.inputs) {
            auto it = index.find(id);
            if (it == index.end())
                throw ModelError(ModelError::Kind::UnknownUnitReference,
                                 r.id + ": unknown input unit '" + id + "'");
            u.inputs.push_back({it->second, neg});
        }
        units.push_back(std::move(u));
    }
    return CausalModel(name, std::move(units));
}

std::string serialize_model_doc(const CausalModel& model) {
    std::ostringstream out;
    out << "model " << model.name() << "\n";
    for (const auto& u : model.units()) {
        out << "unit " << u.id << " " << gate_name(u.gate) << " ";
        for (size_t i = 0; i < u.inputs.size(); ++i) {
            if (i) out << ",";
            if (u.inputs[i].negated) out << "!";
            out << model.unit(u.inputs[i].unit).id;
        }
        if (u.gate == Gate::TruthTable) {
            out << " ";
            for (uint8_t b : u.table) out << (b ? '1' : '0');
        }
        out << "\n";
    }
    return out.str();
}

CausalModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_doc(ss.str());
}

void save_model_file(const CausalModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << serialize_model_doc(model);
}

}  // namespace iit
