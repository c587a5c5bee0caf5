#pragma once

#include <string>
#include <vector>

#include "iit/complexes.hpp"
#include "iit/computer.hpp"

namespace iit {

enum class MotifKind : uint8_t { Ring, ImperfectRing, Monad, Other };

struct Motif {
    MotifKind kind = MotifKind::Other;
    uint32_t size = 0;
};

std::string motif_name(MotifKind k);

// Structural classification from the member digraph (connectivity restricted
// to the members): a ring is strongly connected with a unique predecessor per
// unit; an imperfect ring is a ring plus one unit bridging across it; a monad
// is a single self-connected unit.
Motif classify(const CausalModel& model, const std::vector<uint32_t>& members);

struct CatalogEntry {
    std::vector<uint32_t> units;
    Motif motif;
    std::string component;   // e.g. "program line 3", "C0", "R2_SIM"
    double phi_bound = 0;    // analytic bound on big phi for this motif
    bool state_dependent = false;  // only admissible at particular updates
};

struct CandidateCatalog {
    std::vector<CatalogEntry> entries;
};

class UnreachableState : public std::runtime_error {
  public:
    explicit UnreachableState(const std::string& m) : std::runtime_error(m) {}
};

// The pruned candidate-complex catalog for a generated computer: program
// rings (with their instruction-register variants in the strong variant),
// timekeeping monads and register-output monads, plus the strong variant's
// clock-register triple at the admissible update phase.
// `update_mod` is the update index modulo 2n of the state being analyzed
// (reachability provenance); pass -1 when unknown.
CandidateCatalog candidate_catalog(const ComputerCircuit& c, const BigState& u, int64_t update_mod);

// Analytic bounds per motif.
double ring_phi_bound(uint32_t n);            // 3n/2
double imperfect_ring_phi_bound(uint32_t n);  // (9n + 64)/6
double monad_phi_bound();                     // 2

struct BoundCheck {
    std::string label;
    double phi = 0;
    double bound = 0;
    bool pass = false;
};

struct BoundReport {
    std::vector<BoundCheck> rows;
    bool all_pass = true;
};

// Unfold every realized complex drawn from the catalog and verify its motif
// bound; a violation is a hard failure of engine or catalog.
BoundReport verify_bounds(const ComputerCircuit& c, const BigState& u,
                          const std::vector<Complex>& realized,
                          const std::vector<CauseEffectStructure>& structures);

// All strongly connected subsets of the members' contextual digraph up to
// max_size (for desk-scale catalog soundness checks).
std::vector<std::vector<uint32_t>> strongly_connected_subsets(const CausalModel& model,
                                                              const BigState& u,
                                                              uint32_t max_size);

// Catalog-driven complex search for generated computers.
ComplexSet find_computer_complexes(const ComputerCircuit& c, const BigState& u, int64_t update_mod,
                                   const EngineConfig& cfg = default_config());

}  // namespace iit
