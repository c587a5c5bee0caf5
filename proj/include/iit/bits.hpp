#pragma once

#include <cstdint>
#include <cassert>
#include <string>
#include <vector>

namespace iit {

// State of a small system (<= 20 units): bit i = unit i, 1 = ON.
using State = uint32_t;

// State of an arbitrarily large model (e.g. generated computers).
struct BigState {
    std::vector<uint64_t> words;
    uint32_t width = 0;

    BigState() = default;
    explicit BigState(uint32_t n) : words((n + 63) / 64, 0), width(n) {}

    bool get(uint32_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(uint32_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) words[i >> 6] |= m; else words[i >> 6] &= ~m;
    }
    bool operator==(const BigState& o) const { return width == o.width && words == o.words; }
    bool operator!=(const BigState& o) const { return !(*this == o); }
    bool operator<(const BigState& o) const { return words < o.words; }
};

inline uint32_t popcount32(uint32_t x) { return static_cast<uint32_t>(__builtin_popcount(x)); }

// Iterate subsets of a mask in increasing numeric order.
inline uint32_t next_subset_of(uint32_t sub, uint32_t mask) {
    return (sub - mask) & mask;  // caller stops when wrapped to 0
}

// Expand the k-th compact index into a state over the bits of `mask`.
inline State deposit_bits(uint32_t compact, uint32_t mask) {
    State out = 0;
    uint32_t bit = 0;
    for (uint32_t m = mask; m; m &= m - 1, ++bit)
        if ((compact >> bit) & 1u) out |= (m & -m);
    return out;
}

// Compress the bits of `state` selected by `mask` into a compact index.
inline uint32_t extract_bits(State state, uint32_t mask) {
    uint32_t out = 0;
    uint32_t bit = 0;
    for (uint32_t m = mask; m; m &= m - 1, ++bit)
        if (state & (m & -m)) out |= (1u << bit);
    return out;
}

inline std::string state_to_string(State s, uint32_t n) {
    std::string out(n, '0');
    for (uint32_t i = 0; i < n; ++i)
        if ((s >> i) & 1u) out[i] = '1';
    return out;
}

}  // namespace iit
