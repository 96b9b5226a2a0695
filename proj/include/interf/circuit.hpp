#pragma once

#include <array>
#include <string>
#include <vector>

#include "interf/state.hpp"

namespace interf {

/// Lossless beam splitter parametrized by amplitude reflectance r,
/// with t = sqrt(1 - r^2). Phase convention is the symmetric
/// "i on reflection" form and is not configurable:
///   in1 -> t*out1 + i*r*out2
///   in2 -> t*out2 + i*r*out1
/// (see docs/conventions.md).
struct BeamSplitter {
  double r = 0.0;
  double t = 1.0;

  friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

/// Builds a BeamSplitter from amplitude reflectance r in [0,1].
BeamSplitter splitter_from_reflectance(double r);

/// Builds a BeamSplitter from intensity reflectance R in [0,1], r = sqrt(R).
BeamSplitter splitter_from_intensity(double R);

/// 2x2 complex table; coeff[i][j] is the amplitude routed from input i to
/// output j. Always unitary for a valid BeamSplitter.
using SplitterCoefficients = std::array<std::array<Amplitude, 2>, 2>;

SplitterCoefficients splitter_coefficients(const BeamSplitter& bs);

/// Relative phases of one wing, applied to the second-listed path of a
/// stage's output pair: phi_ab to path b right after stage 1, phi_cd to
/// path d right after stage 2. Stored modulo 2*pi.
struct PhaseSettings {
  double phi_ab = 0.0;
  double phi_cd = 0.0;

  friend bool operator==(const PhaseSettings&, const PhaseSettings&) = default;
};

double canonical_angle(double radians);  // maps into [0, 2*pi)

/// One interferometer wing: three beam-splitter stages over the fixed
/// topology In -> (A,B) -> (C,D) -> (E,F), plus phase settings.
struct WingCircuit {
  BeamSplitter bs1, bs2, bs3;
  PhaseSettings phases;

  friend bool operator==(const WingCircuit&, const WingCircuit&) = default;
};

/// Joint annihilation at the stage-1 output: a pair occupying
/// (minus_path, plus_path) converts into the radiation flag ket
/// |gamma^label>. Paths are restricted to {A, B}.
struct AnnihilationRule {
  PathId minus_path = PathId::A;
  PathId plus_path = PathId::A;
  std::string gamma_label;

  friend bool operator==(const AnnihilationRule&,
                         const AnnihilationRule&) = default;
};

/// A full experimental context: both wing circuits plus the annihilation
/// geometry. The built-in contexts share wings and differ only in rules.
struct Scheme {
  std::string name;
  WingCircuit wing_minus, wing_plus;
  std::vector<AnnihilationRule> rules;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Context with intersections at P <-> (A,A) and Q <-> (B,B);
/// all six splitters 50/50, zero phases.
Scheme build_scheme_a();

/// Same wing circuits as scheme a; intersections at R <-> (A,B) and
/// S <-> (B,A).
Scheme build_scheme_b();

/// Returns a list of violations; empty means the scheme is valid.
/// Checks r^2 + t^2 = 1 for all splitters, rule paths in {A,B}, gamma
/// label uniqueness and rule-pair distinctness.
std::vector<std::string> validate(const Scheme& s);

}  // namespace interf
