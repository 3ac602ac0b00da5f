#pragma once

#include "anslab/solver.hpp"

#include <cstdint>
#include <string>

namespace anslab {

/// [plan] section of a config file: what the harness should execute.
struct PlanConfig {
    std::string kind = "single_run";  // single_run | eps_sweep | lambda_sweep |
                                      // amplitude_sweep | product_law_corpus |
                                      // largeness_sweep
    std::vector<Real> values;         // sweep parameter values
    std::uint64_t seed = 1;
    int count = 0;                    // corpus size (product_law_corpus)
    std::string output = "runs";

    void validate() const;
};

struct FullConfig {
    SolverConfig solver;
    PlanConfig plan;
};

/// Sectioned key=value format with [solver], [weight], [plan] sections,
/// '#' comments, blank lines. Unknown sections or keys are rejected with
/// the offending line number; so are malformed values and inadmissible
/// (n, p, s) combinations.
FullConfig parse_config(const std::string& text);
FullConfig parse_config_file(const std::string& path);

/// Canonical serialization: every key in a fixed order, defaults included.
std::string echo_config(const FullConfig& cfg);

/// 64-bit FNV-1a over the canonical echo, so the hash is invariant under
/// key reordering and comment or whitespace changes in the source file.
std::uint64_t config_hash(const FullConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace anslab
