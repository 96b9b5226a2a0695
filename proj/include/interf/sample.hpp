#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "interf/circuit.hpp"

namespace interf {

/// Counts of simulated experiment runs per joint outcome cell. Detector
/// cells are keyed "EE", "EF", "FE", "FF"; annihilation cells
/// "gamma:<label>". The seed field is the sampling seed, or a lineage
/// token after merging tallies with different seeds.
struct RunTally {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// Counter-based uniform draw for run index `i` under `seed`; splitmix64
/// output function over state seed + (i+1)*golden gamma (see docs/rng.md).
/// Exposed so chunked sampling and tests share the exact stream.
double unit_draw(std::uint64_t seed, std::uint64_t index);

/// n inverse-CDF draws from outcome_distribution(evolve(scheme)) over the
/// fixed cell order EE, EF, FE, FF, then gamma labels sorted
/// lexicographically. Bit-reproducible for a given (scheme, n, seed);
/// probability-zero cells can never be drawn.
RunTally sample(const Scheme& scheme, std::uint64_t n, std::uint64_t seed);

/// Same stream as sample(), evaluated in `chunks` independent pieces
/// (run in parallel) and merged; identical result to the sequential call
/// because the generator is indexed by the global run number.
RunTally sample_chunked(const Scheme& scheme, std::uint64_t n,
                        std::uint64_t seed, unsigned chunks);

/// estimate = count/n, standardError = sqrt(p(1-p)/n). Rejects n = 0.
std::map<std::string, std::pair<double, double>> frequencies(const RunTally& t);

/// Cell-wise sum. Seeds combine symmetrically into a lineage token when
/// they differ; counts merging is commutative.
RunTally merge(const RunTally& t1, const RunTally& t2);

}  // namespace interf
