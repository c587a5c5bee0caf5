#include "iit/model.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace iit {

std::string gate_name(Gate g) {
    switch (g) {
        case Gate::Copy: return "COPY";
        case Gate::And: return "AND";
        case Gate::Or: return "OR";
        case Gate::Xor: return "XOR";
        case Gate::GeneralizedOr: return "GOR";
        case Gate::TruthTable: return "TABLE";
    }
    return "?";
}

std::optional<Gate> gate_from_name(const std::string& name) {
    if (name == "COPY") return Gate::Copy;
    if (name == "AND") return Gate::And;
    if (name == "OR") return Gate::Or;
    if (name == "XOR") return Gate::Xor;
    if (name == "GOR" || name == "GENERALIZED_OR") return Gate::GeneralizedOr;
    if (name == "TABLE" || name == "TRUTH_TABLE") return Gate::TruthTable;
    return std::nullopt;
}

CausalModel::CausalModel(std::string name, std::vector<UnitSpec> units)
    : name_(std::move(name)), units_(std::move(units)) {
    validate();
}

void CausalModel::validate() const {
    if (units_.empty())
        throw ModelError(ModelError::Kind::EmptyModel, "model has no units");
    std::map<std::string, uint32_t> seen;
    for (uint32_t i = 0; i < units_.size(); ++i) {
        if (!seen.emplace(units_[i].id, i).second)
            throw ModelError(ModelError::Kind::DuplicateUnitId,
                             "duplicate unit id: " + units_[i].id);
    }
    for (const auto& u : units_) {
        for (const auto& in : u.inputs) {
            if (in.unit >= units_.size())
                throw ModelError(ModelError::Kind::UnknownUnitReference,
                                 u.id + ": input index out of range");
        }
        size_t k = u.inputs.size();
        switch (u.gate) {
            case Gate::Copy:
                if (k != 1)
                    throw ModelError(ModelError::Kind::ArityMismatch,
                                     u.id + ": COPY takes exactly 1 input, got " + std::to_string(k));
                break;
            case Gate::And:
            case Gate::Or:
            case Gate::Xor:
            case Gate::GeneralizedOr:
                if (k < 1)
                    throw ModelError(ModelError::Kind::ArityMismatch,
                                     u.id + ": " + gate_name(u.gate) + " needs at least 1 input");
                break;
            case Gate::TruthTable:
                if (k > 20)
                    throw ModelError(ModelError::Kind::ArityMismatch,
                                     u.id + ": truth table fan-in too large");
                if (u.table.size() != (size_t(1) << k))
                    throw ModelError(ModelError::Kind::TableSizeMismatch,
                                     u.id + ": table has " + std::to_string(u.table.size()) +
                                         " rows, expected " + std::to_string(size_t(1) << k));
                break;
        }
    }
}

std::optional<uint32_t> CausalModel::index_of(const std::string& id) const {
    for (uint32_t i = 0; i < units_.size(); ++i)
        if (units_[i].id == id) return i;
    return std::nullopt;
}

static inline bool eval_gate(const UnitSpec& u, const auto& bit_at) {
    switch (u.gate) {
        case Gate::Copy: {
            bool v = bit_at(u.inputs[0].unit);
            return u.inputs[0].negated ? !v : v;
        }
        case Gate::And: {
            for (const auto& in : u.inputs) {
                bool v = bit_at(in.unit) ^ in.negated;
                if (!v) return false;
            }
            return true;
        }
        case Gate::Or:
        case Gate::GeneralizedOr: {
            for (const auto& in : u.inputs) {
                bool v = bit_at(in.unit) ^ in.negated;
                if (v) return true;
            }
            return false;
        }
        case Gate::Xor: {
            bool v = false;
            for (const auto& in : u.inputs) v ^= bit_at(in.unit) ^ in.negated;
            return v;
        }
        case Gate::TruthTable: {
            uint32_t row = 0;
            for (uint32_t b = 0; b < u.inputs.size(); ++b) {
                bool v = bit_at(u.inputs[b].unit) ^ u.inputs[b].negated;
                if (v) row |= (1u << b);
            }
            return u.table[row] != 0;
        }
    }
    return false;
}

bool CausalModel::eval_unit(uint32_t i, const BigState& s) const {
    return eval_gate(units_[i], [&](uint32_t u) { return s.get(u); });
}

bool CausalModel::eval_unit_small(uint32_t i, State s) const {
    return eval_gate(units_[i], [&](uint32_t u) { return (s >> u) & 1u; });
}

BigState CausalModel::step(const BigState& s) const {
    BigState out(size());
    for (uint32_t i = 0; i < size(); ++i) out.set(i, eval_unit(i, s));
    return out;
}

State CausalModel::step_small(State s) const {
    State out = 0;
    for (uint32_t i = 0; i < size(); ++i)
        if (eval_unit_small(i, s)) out |= (1u << i);
    return out;
}

// Semantic inputs of one unit: listed inputs that actually change the output
// in some context. AND/OR/XOR/COPY admit closed forms (needed for the wide
// multiplexer gates); truth tables are settled by exhaustion.
static std::vector<uint32_t> semantic_inputs_of(const UnitSpec& u) {
    std::vector<uint32_t> sources;
    for (const auto& in : u.inputs)
        if (std::find(sources.begin(), sources.end(), in.unit) == sources.end())
            sources.push_back(in.unit);

    if (u.gate != Gate::TruthTable) {
        bool both_polarities = false;
        for (uint32_t s : sources) {
            bool pos = false, neg = false;
            for (const auto& in : u.inputs)
                if (in.unit == s) (in.negated ? neg : pos) = true;
            if (pos && neg) both_polarities = true;
        }
        if (u.gate == Gate::Xor) {
            // A source cancels itself when it appears an even number of times.
            std::vector<uint32_t> live;
            for (uint32_t s : sources) {
                size_t count = 0;
                for (const auto& in : u.inputs)
                    if (in.unit == s) ++count;
                if (count % 2 == 1) live.push_back(s);
            }
            return live;
        }
        // AND with x and !x is constant 0; OR with x and !x is constant 1.
        if (both_polarities && u.gate != Gate::Copy) return {};
        return sources;
    }

    size_t k = sources.size();
    if (k > 20) throw std::runtime_error(u.id + ": dependence check fan-in above 20");
    auto out_for = [&](uint32_t assign) {
        return eval_gate(u, [&](uint32_t unit) {
            for (size_t b = 0; b < k; ++b)
                if (sources[b] == unit) return ((assign >> b) & 1u) != 0u;
            return false;  // unreachable: every input is in sources
        });
    };
    std::vector<uint32_t> live;
    for (size_t b = 0; b < k; ++b) {
        bool matters = false;
        for (uint32_t a = 0; a < (1u << k) && !matters; ++a)
            if (out_for(a) != out_for(a ^ (1u << b))) matters = true;
        if (matters) live.push_back(sources[b]);
    }
    return live;
}

const std::vector<std::vector<uint32_t>>& CausalModel::semantic_inputs() const {
    if (deps_.empty()) {
        deps_.resize(size());
        for (uint32_t i = 0; i < size(); ++i) deps_[i] = semantic_inputs_of(units_[i]);
    }
    return deps_;
}

bool CausalModel::depends_on(uint32_t target, uint32_t source) const {
    const auto& d = semantic_inputs()[target];
    return std::find(d.begin(), d.end(), source) != d.end();
}

const std::vector<uint32_t>& CausalModel::connectivity() const {
    if (small_conn_.empty()) {
        if (size() > 32) throw std::runtime_error("connectivity bitmask limited to 32 units");
        small_conn_.assign(size(), 0);
        const auto& deps = semantic_inputs();
        for (uint32_t j = 0; j < size(); ++j)
            for (uint32_t src : deps[j]) small_conn_[src] |= (1u << j);
    }
    return small_conn_;
}

std::vector<std::vector<uint8_t>> CausalModel::connectivity_matrix() const {
    const auto& deps = semantic_inputs();
    std::vector<std::vector<uint8_t>> a(size(), std::vector<uint8_t>(size(), 0));
    for (uint32_t j = 0; j < size(); ++j)
        for (uint32_t src : deps[j]) a[src][j] = 1;
    return a;
}

// Deterministic dynamics: the closure of each seed is a walk. horizon == 0
// closes until the walk revisits a collected state.
std::vector<BigState> CausalModel::reachable_states(const std::vector<BigState>& initial,
                                                    uint64_t horizon) const {
    std::set<BigState> seen(initial.begin(), initial.end());
    for (const auto& s0 : initial) {
        BigState s = s0;
        for (uint64_t d = 0; horizon == 0 || d < horizon; ++d) {
            s = step(s);
            if (!seen.insert(s).second && horizon == 0) break;
            if (horizon != 0 && d + 1 >= horizon) break;
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<State> CausalModel::reachable_states_small(const std::vector<State>& initial,
                                                       uint64_t horizon) const {
    std::set<State> seen(initial.begin(), initial.end());
    for (State s0 : initial) {
        State s = s0;
        for (uint64_t d = 0; horizon == 0 || d < horizon; ++d) {
            s = step_small(s);
            if (!seen.insert(s).second && horizon == 0) break;
            if (horizon != 0 && d + 1 >= horizon) break;
        }
    }
    return {seen.begin(), seen.end()};
}

State parse_state(const CausalModel& model, const std::string& text) {
    uint32_t n = model.size();
    if (text.size() != n)
        throw std::runtime_error("state literal '" + text + "' has wrong width (expected " +
                                 std::to_string(n) + ")");
    bool binary = text.find_first_not_of("01") == std::string::npos;
    State s = 0;
    if (binary) {
        for (uint32_t i = 0; i < n; ++i)
            if (text[i] == '1') s |= (1u << i);
        return s;
    }
    // Case-encoded: character i must match unit i's id (first letter),
    // uppercase = ON.
    for (uint32_t i = 0; i < n; ++i) {
        char c = text[i];
        char ref = model.unit(i).id.empty() ? '?' : model.unit(i).id[0];
        if (std::tolower(c) != std::tolower(ref))
            throw std::runtime_error("state literal '" + text + "' does not name unit " +
                                     model.unit(i).id + " at position " + std::to_string(i));
        if (std::isupper(static_cast<unsigned char>(c))) s |= (1u << i);
    }
    return s;
}

std::string render_state(const CausalModel& model, State s) {
    return state_to_string(s, model.size());
}

std::string render_state_named(const CausalModel& model, State s) {
    std::string out;
    for (uint32_t i = 0; i < model.size(); ++i) {
        char c = model.unit(i).id.empty() ? '?' : model.unit(i).id[0];
        out += ((s >> i) & 1u) ? std::toupper(c) : std::tolower(c);
    }
    return out;
}

}  // namespace iit
