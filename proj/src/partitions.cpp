#include "iit/partitions.hpp"

#include <algorithm>
#include <set>

#include "iit/bits.hpp"

namespace iit {

std::string DirectedPartition::label() const {
    std::string out;
    for (size_t p = 0; p < parts.size(); ++p) {
        if (p) out += " / ";
        out += "{";
        bool first = true;
        for (uint32_t i = 0; i < 32; ++i)
            if ((parts[p] >> i) & 1u) {
                if (!first) out += ",";
                out += std::to_string(i);
                first = false;
            }
        out += "}";
        out += tags[p] == PartTag::In ? "<-" : (tags[p] == PartTag::Out ? "->" : "<->");
    }
    return out;
}

std::vector<uint32_t> cut_matrix(uint32_t n, const std::vector<uint32_t>& parts,
                                 const std::vector<PartTag>& tags) {
    std::vector<uint32_t> cut(n, 0);
    if (parts.size() == 1) {
        // Complete partition of a monad: sever the self-connection.
        for (uint32_t i = 0; i < n; ++i) cut[i] = (1u << i);
        return cut;
    }
    std::vector<int> part_of(n, -1);
    for (size_t p = 0; p < parts.size(); ++p)
        for (uint32_t i = 0; i < n; ++i)
            if ((parts[p] >> i) & 1u) part_of[i] = static_cast<int>(p);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t k = 0; k < n; ++k) {
            if (part_of[i] == part_of[k]) continue;
            bool src_out = tags[part_of[i]] != PartTag::In;   // Out or Both
            bool dst_in = tags[part_of[k]] != PartTag::Out;   // In or Both
            if (src_out || dst_in) cut[i] |= (1u << k);
        }
    }
    return cut;
}

namespace {

// All set partitions of {0..n-1} into >= 2 blocks, via restricted growth
// strings; deterministic order.
void for_each_set_partition(uint32_t n, const std::function<void(const std::vector<uint32_t>&)>& fn) {
    std::vector<uint32_t> assign(n, 0);
    std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t i, uint32_t maxb) {
        if (i == n) {
            if (maxb == 0) return;  // single block
            uint32_t nblocks = maxb + 1;
            std::vector<uint32_t> parts(nblocks, 0);
            for (uint32_t j = 0; j < n; ++j) parts[assign[j]] |= (1u << j);
            fn(parts);
            return;
        }
        for (uint32_t b = 0; b <= maxb + 1 && b < n; ++b) {
            assign[i] = b;
            rec(i + 1, std::max(maxb, b));
        }
    };
    assign[0] = 0;
    rec(1, 0);
}

}  // namespace

std::vector<DirectedPartition> enumerate_partitions(uint32_t n, const EngineConfig& cfg) {
    std::vector<DirectedPartition> out;
    if (n == 0) return out;
    if (n == 1) {
        DirectedPartition p;
        p.parts = {1u};
        p.tags = {PartTag::Both};
        p.cut = cut_matrix(1, p.parts, p.tags);
        out.push_back(std::move(p));
        return out;
    }

    std::set<std::vector<uint32_t>> seen;
    auto emit = [&](std::vector<uint32_t> parts, std::vector<PartTag> tags) {
        auto cut = cut_matrix(n, parts, tags);
        bool nonzero = false;
        for (uint32_t row : cut) nonzero = nonzero || row != 0;
        if (!nonzero) return;
        if (!seen.insert(cut).second) return;
        if (out.size() >= cfg.partition_cap)
            throw TooManyPartitions("partition enumeration above cap");
        out.push_back({std::move(parts), std::move(tags), std::move(cut)});
    };

    if (cfg.partition_family == EngineConfig::PartitionFamily::OneWay) {
        // For each ordered bipartition (F, S\F): sever the connections F -> S\F.
        uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
        for (uint32_t f = 1; f < full; ++f)
            emit({f, full & ~f}, {PartTag::Out, PartTag::In});
        return out;
    }

    for_each_set_partition(n, [&](const std::vector<uint32_t>& parts) {
        size_t m = parts.size();
        std::vector<PartTag> tags(m, PartTag::In);
        uint64_t combos = 1;
        for (size_t i = 0; i < m; ++i) combos *= 3;
        for (uint64_t c = 0; c < combos; ++c) {
            uint64_t x = c;
            for (size_t i = 0; i < m; ++i) {
                tags[i] = static_cast<PartTag>(x % 3);
                x /= 3;
            }
            emit(parts, tags);
        }
    });
    return out;
}

uint32_t cut_pair_count(const std::vector<uint32_t>& cut) {
    uint32_t c = 0;
    for (uint32_t row : cut) c += popcount32(row);
    return c;
}

}  // namespace iit
