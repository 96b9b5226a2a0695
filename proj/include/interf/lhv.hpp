#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "interf/evolve.hpp"

namespace interf {

/// Predetermined response of one wing's particle: detection in the E or F
/// output, or no detection at all (the annihilation case).
enum class LocalOutcome { DetectE, DetectF, NoDetect };

const char* outcome_name(LocalOutcome o);  // "E", "F", "_"

/// A scheme-independent assignment of one response per wing. Deliberately
/// carries no scheme parameter: the hidden variables fix the outcome as a
/// function of the wing's intrinsic properties only, and those coincide
/// across the two contexts (see docs/lhv-model.md).
struct DeterministicStrategy {
  LocalOutcome minus = LocalOutcome::DetectE;
  LocalOutcome plus = LocalOutcome::DetectE;

  friend auto operator<=>(const DeterministicStrategy&,
                          const DeterministicStrategy&) = default;
};

constexpr int kCells = 9;

/// Index into the 3x3 joint-outcome cells, minus-major, outcome order
/// E, F, NoDetect.
int cell_index(LocalOutcome minus, LocalOutcome plus);

/// Cell names in index order: EE, EF, E_, FE, FF, F_, _E, _F, __.
const char* cell_name(int index);

/// Joint probability distribution over the 9 outcome cells for one scheme.
struct Behavior {
  std::array<double, kCells> cells{};

  double& at(LocalOutcome m, LocalOutcome p) { return cells[cell_index(m, p)]; }
  double at(LocalOutcome m, LocalOutcome p) const {
    return cells[cell_index(m, p)];
  }

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

/// Maps quantum outcome statistics into detection language: detector cells
/// carry over, the total gamma mass lands in the joint no-detection cell.
Behavior behavior_from_quantum(const OutcomeDistribution& d);

/// The 9 deterministic strategies in stable (minus-major) order; strategy
/// at position k has cell_index(minus, plus) == k.
std::vector<DeterministicStrategy> enumerate_strategies();

/// Point mass on the strategy's own cell, independent of any scheme.
Behavior strategy_behavior(const DeterministicStrategy& s);

/// Linear functional over the 19 constraint rows of the joint system:
/// rows 0..8 pin the weights to behavior A's cells, rows 9..17 to
/// behavior B's, row 18 is the normalization. Farkas conditions:
/// y^T A_j <= 0 for every strategy column j while y^T b > 0.
struct FarkasCertificate {
  std::array<double, 2 * kCells + 1> y{};
};

struct FeasibilityResult {
  bool feasible = false;
  std::array<double, kCells> weights{};          // valid when feasible
  std::optional<FarkasCertificate> certificate;  // set when the LP is infeasible
  std::string note;
};

struct LhvOptions {
  /// Restrict weights to product distributions over the two wings,
  /// checked by nonnegative rank-1 decomposition of the 3x3 weight table.
  bool product_form = false;
  double tolerance = 1e-9;
};

/// Decides whether one probability mixture over the 9 strategies reproduces
/// both behaviors at once. Exact rational arithmetic when all entries are
/// dyadic rationals of bounded denominator, a relaxed floating-point LP at
/// `tolerance` otherwise. Infeasible results carry a verified certificate.
/// Malformed behaviors (negative mass, bad sum) are rejected with
/// std::invalid_argument.
FeasibilityResult lhv_feasible(const Behavior& a, const Behavior& b,
                               const LhvOptions& options = {});

/// Mass that behavior B places on both-parties-detect cells that behavior A
/// forbids (probability 0 within 1e-12). The swapped direction is
/// contradiction_fraction(b, a).
double contradiction_fraction(const Behavior& a, const Behavior& b);

/// Re-evaluates the Farkas conditions independently of the solver path.
bool verify_certificate(const FarkasCertificate& cert, const Behavior& a,
                        const Behavior& b);

/// Structured-text behavior format with fixed keys
/// {"EE":...,"EF":...,"FE":...,"FF":...,"E_":...,"F_":...,"_E":...,"_F":...,"__":...}.
/// Missing keys are rejected.
Behavior behavior_from_json_text(const std::string& text);
std::string behavior_to_json_text(const Behavior& b);

}  // namespace interf
