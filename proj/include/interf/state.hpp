#pragma once

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace interf {

using Amplitude = std::complex<double>;

/// Path labels of one interferometer wing. Stage ordering is
/// In -> {A,B} -> {C,D} -> {E,F}; each beam-splitter stage advances the
/// particle one stage.
enum class PathId { In, A, B, C, D, E, F };

/// Stage depth of a path: In = 0, A/B = 1, C/D = 2, E/F = 3.
int stage_of(PathId p);

/// Lowercase name used in renderings ("in", "a", ..., "f").
const char* path_name(PathId p);

enum class Wing { Minus, Plus };

/// One basis ket of the joint two-particle space: either a pair of paths
/// (one per wing, both at the same stage) or an absorbing radiation flag
/// labeled by its origin point.
struct BasisKet {
  enum class Sector { Pair, Gamma };

  Sector sector = Sector::Pair;
  PathId minus_path = PathId::In;
  PathId plus_path = PathId::In;
  std::string gamma_label;

  static BasisKet pair(PathId minus, PathId plus) {
    BasisKet k;
    k.sector = Sector::Pair;
    k.minus_path = minus;
    k.plus_path = plus;
    return k;
  }

  static BasisKet gamma(std::string label) {
    BasisKet k;
    k.sector = Sector::Gamma;
    k.gamma_label = std::move(label);
    return k;
  }

  friend auto operator<=>(const BasisKet&, const BasisKet&) = default;
};

/// Sparse joint state: finite map from basis kets to complex amplitudes.
/// Terms below `tolerance` in magnitude are pruned on construction.
/// Immutable in practice; all operations below are pure.
struct JointState {
  std::map<BasisKet, Amplitude> terms;
  double tolerance = 1e-12;
};

/// Builds a state from (ket, amplitude) entries. Duplicate kets are summed,
/// sub-tolerance terms pruned. Pair kets whose two paths sit at different
/// stages are rejected with std::invalid_argument.
JointState make_state(const std::vector<std::pair<BasisKet, Amplitude>>& entries,
                      double tolerance = 1e-12);

double norm_squared(const JointState& s);

/// Conjugate-linear in the first argument.
Amplitude inner_product(const JointState& s1, const JointState& s2);

/// Term-wise target + factor * source, pruned at target's tolerance.
JointState scale_add(const JointState& target, const JointState& source,
                     Amplitude factor);

/// Canonical rendering for test goldens: terms sorted by
/// (sector, minusPath, plusPath, label), amplitudes as `re(+/-)im i`
/// with 12 significant digits, one term per line.
std::string render_state(const JointState& s);

std::string format_amplitude(Amplitude a);

}  // namespace interf
