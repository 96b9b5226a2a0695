#pragma once

#include <map>
#include <string>

#include "interf/circuit.hpp"
#include "interf/state.hpp"

namespace interf {

/// Probabilities over the four joint detector outcomes plus annihilation
/// labels. Entries are squared final amplitudes, never sampled.
struct OutcomeDistribution {
  double p_ee = 0.0, p_ef = 0.0, p_fe = 0.0, p_ff = 0.0;
  std::map<std::string, double> p_gamma;

  double gamma_total() const;
  double total() const;
};

enum class BellKind { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

/// |in-,in+> with unit amplitude.
JointState initial_state(double tolerance = 1e-12);

/// First beam-splitter pair: Pair terms move from stage In to {A,B};
/// phi_ab applied to the B output of each wing. Gamma terms pass through.
JointState apply_stage1(const JointState& state, const Scheme& scheme);

/// Replaces each Pair term matching an annihilation rule by the rule's
/// Gamma ket with unchanged amplitude. Norm preserved exactly.
JointState apply_annihilation(const JointState& state, const Scheme& scheme);

/// {A,B} -> {C,D}; phi_cd applied to the D output of each wing.
JointState apply_stage2(const JointState& state, const Scheme& scheme);

/// {C,D} -> {E,F}; no further phase.
JointState apply_stage3(const JointState& state, const Scheme& scheme);

/// Full pipeline stage1 -> annihilation -> stage2 -> stage3 from |in-,in+>.
/// Throws std::invalid_argument when the scheme fails validate().
JointState evolve(const Scheme& scheme, double tolerance = 1e-12);

/// Squared magnitudes of a final-stage state. Non-final Pair terms rejected.
OutcomeDistribution outcome_distribution(const JointState& state);

/// Drops Gamma terms and renormalizes the particle sector to 1.
/// Throws std::domain_error when no survivors remain.
JointState postselect_survivors(const JointState& state);

/// |<Bell|state>|^2; global-phase invariant. Input must be normalized
/// (within 1e-9) with final-stage Pair terms only.
double bell_overlap(const JointState& state, BellKind kind);

JointState bell_state(BellKind kind);

/// Brute-force reimplementation of evolve() over a dense layout:
/// explicit 7x7 single-wing matrices, a 49x49 tensor product, and an
/// annihilation projector routing matched pair coordinates into gamma
/// coordinates. Independent of the sparse path; used as an oracle.
JointState dense_oracle(const Scheme& scheme);

}  // namespace interf
