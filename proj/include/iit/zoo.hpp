#pragma once

#include <string>

#include "iit/model.hpp"

namespace iit {

// The model zoo: named systems used throughout the analyses.
//   pqrs        4-unit truth-table system (loaded from the data directory)
//   rule110(n)  n-cell elementary cellular automaton, Wolfram rule 110
//   wcc(k)      weakly connected computer of order k
//   scc(k)      strongly connected computer of order k
//   fig4b       8-unit macro example (requires its data file)
// Loading runs the entry's conformance checks and throws on failure.
CausalModel load_zoo(const std::string& name, const std::string& data_dir = "data");

// n-cell ring where every cell follows rule 110 of the elementary cellular
// automata; cell i reads (i-1, i, i+1) cyclically.
CausalModel rule110_ring(uint32_t n);

class UnknownModel : public std::runtime_error {
  public:
    explicit UnknownModel(const std::string& m) : std::runtime_error(m) {}
};
class ConformanceFailure : public std::runtime_error {
  public:
    explicit ConformanceFailure(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace iit
