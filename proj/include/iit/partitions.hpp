#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iit/engine_config.hpp"

namespace iit {

enum class PartTag : uint8_t { In, Out, Both };  // <-, ->, <->

// A directional partition of an n-unit system, materialized as its cut
// matrix: bit k of cut[i] says the connection i -> k is severed.
struct DirectedPartition {
    std::vector<uint32_t> parts;   // bitmasks over member indices
    std::vector<PartTag> tags;
    std::vector<uint32_t> cut;     // n rows
    std::string label() const;
};

class TooManyPartitions : public std::runtime_error {
  public:
    explicit TooManyPartitions(const std::string& m) : std::runtime_error(m) {}
};

// Cut matrix rows induced by parts+tags: i -> k severed iff the parts differ
// and (part(i) severs outputs or part(k) severs inputs). For a single-unit
// system the only partition severs the unit's self-connection.
std::vector<uint32_t> cut_matrix(uint32_t n, const std::vector<uint32_t>& parts,
                                 const std::vector<PartTag>& tags);

// Exhaustive, duplicate-free (by cut matrix), deterministic order.
std::vector<DirectedPartition> enumerate_partitions(uint32_t n, const EngineConfig& cfg);

uint32_t cut_pair_count(const std::vector<uint32_t>& cut);

}  // namespace iit
