#pragma once

#include <cstdint>
#include <vector>

#include "iit/bits.hpp"
#include "iit/model.hpp"

namespace iit {

// Joint posterior over the previous states of a small set of units, given the
// current state of the whole model and a uniform prior over previous states:
//
//   q(k) ∝ #{ u_prev : step(u_prev) = u_now, u_prev|K = k }
//
// Computed exactly by variable elimination over the per-unit constraint
// factors, with closed forms for wide AND/OR/XOR gates so that generated
// computers (multiplexer OR over 2^n inputs) stay tractable.
struct PreimagePosterior {
    std::vector<uint32_t> query;  // global unit indices, ascending
    std::vector<double> prob;     // size 2^|query|, indexed little-endian over query
    bool empty = false;           // no previous state maps to u_now
};

PreimagePosterior preimage_posterior(const CausalModel& model, const BigState& u_now,
                                     const std::vector<uint32_t>& query);

// Brute-force reference for tests (enumerates all 2^n previous states).
PreimagePosterior preimage_posterior_bruteforce(const CausalModel& model, const BigState& u_now,
                                                const std::vector<uint32_t>& query);

}  // namespace iit
