#include "interf/evolve.hpp"

#include <cmath>
#include <stdexcept>

namespace interf {

double OutcomeDistribution::gamma_total() const {
  double total = 0.0;
  for (const auto& [label, p] : p_gamma) total += p;
  return total;
}

double OutcomeDistribution::total() const {
  return p_ee + p_ef + p_fe + p_ff + gamma_total();
}

JointState initial_state(double tolerance) {
  return make_state({{BasisKet::pair(PathId::In, PathId::In), 1.0}},
                    tolerance);
}

namespace {

struct StageSpec {
  int input_stage;
  PathId in1, in2, out1, out2;
  // Phase applied to out2 after the splitter; selected per stage from the
  // wing's settings (phi_ab after stage 1, phi_cd after stage 2).
  double PhaseSettings::* phase;
};

StageSpec stage_spec(int stage) {
  switch (stage) {
    case 1:
      return {0, PathId::In, PathId::In, PathId::A, PathId::B,
              &PhaseSettings::phi_ab};
    case 2:
      return {1, PathId::A, PathId::B, PathId::C, PathId::D,
              &PhaseSettings::phi_cd};
    case 3:
      return {2, PathId::C, PathId::D, PathId::E, PathId::F, nullptr};
  }
  throw std::logic_error("stage_spec: bad stage");
}

const BeamSplitter& wing_splitter(const WingCircuit& w, int stage) {
  switch (stage) {
    case 1: return w.bs1;
    case 2: return w.bs2;
    case 3: return w.bs3;
  }
  throw std::logic_error("wing_splitter: bad stage");
}

// Expands one path through one wing's stage splitter into (path, amplitude)
// branches, with the stage phase folded onto the out2 branch.
struct Branches {
  PathId path[2];
  Amplitude amp[2];
};

Branches expand_path(PathId p, const WingCircuit& wing, const StageSpec& spec,
                     const SplitterCoefficients& coeff) {
  int input_index;
  if (p == spec.in1)
    input_index = 0;
  else if (p == spec.in2)
    input_index = 1;
  else
    throw std::invalid_argument("path not at the stage input");

  Amplitude phase_factor = 1.0;
  if (spec.phase != nullptr)
    phase_factor = std::polar(1.0, wing.phases.*(spec.phase));

  Branches b;
  b.path[0] = spec.out1;
  b.path[1] = spec.out2;
  b.amp[0] = coeff[input_index][0];
  b.amp[1] = coeff[input_index][1] * phase_factor;
  return b;
}

JointState apply_stage(const JointState& state, const Scheme& scheme,
                       int stage) {
  const StageSpec spec = stage_spec(stage);
  const SplitterCoefficients coeff_minus =
      splitter_coefficients(wing_splitter(scheme.wing_minus, stage));
  const SplitterCoefficients coeff_plus =
      splitter_coefficients(wing_splitter(scheme.wing_plus, stage));

  std::vector<std::pair<BasisKet, Amplitude>> entries;
  for (const auto& [ket, amp] : state.terms) {
    if (ket.sector == BasisKet::Sector::Gamma) {
      entries.emplace_back(ket, amp);  // absorbing sector
      continue;
    }
    if (stage_of(ket.minus_path) != spec.input_stage)
      throw std::invalid_argument("stage mismatch: pair term |" +
                                  std::string(path_name(ket.minus_path)) +
                                  "-," + path_name(ket.plus_path) +
                                  "+> is not at the stage " +
                                  std::to_string(stage) + " input");
    const Branches bm =
        expand_path(ket.minus_path, scheme.wing_minus, spec, coeff_minus);
    const Branches bp =
        expand_path(ket.plus_path, scheme.wing_plus, spec, coeff_plus);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        entries.emplace_back(BasisKet::pair(bm.path[i], bp.path[j]),
                             amp * bm.amp[i] * bp.amp[j]);
  }
  return make_state(entries, state.tolerance);
}

}  // namespace

JointState apply_stage1(const JointState& state, const Scheme& scheme) {
  return apply_stage(state, scheme, 1);
}

JointState apply_stage2(const JointState& state, const Scheme& scheme) {
  return apply_stage(state, scheme, 2);
}

JointState apply_stage3(const JointState& state, const Scheme& scheme) {
  return apply_stage(state, scheme, 3);
}

JointState apply_annihilation(const JointState& state, const Scheme& scheme) {
  std::vector<std::pair<BasisKet, Amplitude>> entries;
  for (const auto& [ket, amp] : state.terms) {
    const AnnihilationRule* match = nullptr;
    if (ket.sector == BasisKet::Sector::Pair) {
      if (stage_of(ket.minus_path) != 1)
        throw std::invalid_argument(
            "annihilation applies at the stage-1 output only");
      for (const auto& rule : scheme.rules) {
        if (rule.minus_path == ket.minus_path &&
            rule.plus_path == ket.plus_path) {
          match = &rule;
          break;
        }
      }
    }
    if (match != nullptr)
      entries.emplace_back(BasisKet::gamma(match->gamma_label), amp);
    else
      entries.emplace_back(ket, amp);
  }
  return make_state(entries, state.tolerance);
}

JointState evolve(const Scheme& scheme, double tolerance) {
  const auto violations = validate(scheme);
  if (!violations.empty())
    throw std::invalid_argument("invalid scheme: " + violations.front());
  JointState s = initial_state(tolerance);
  s = apply_stage1(s, scheme);
  s = apply_annihilation(s, scheme);
  s = apply_stage2(s, scheme);
  s = apply_stage3(s, scheme);
  return s;
}

OutcomeDistribution outcome_distribution(const JointState& state) {
  OutcomeDistribution d;
  for (const auto& [ket, amp] : state.terms) {
    const double p = std::norm(amp);
    if (ket.sector == BasisKet::Sector::Gamma) {
      d.p_gamma[ket.gamma_label] += p;
      continue;
    }
    if (stage_of(ket.minus_path) != 3)
      throw std::invalid_argument("pair term not at the final stage");
    const bool minus_e = ket.minus_path == PathId::E;
    const bool plus_e = ket.plus_path == PathId::E;
    if (minus_e && plus_e)
      d.p_ee += p;
    else if (minus_e)
      d.p_ef += p;
    else if (plus_e)
      d.p_fe += p;
    else
      d.p_ff += p;
  }
  return d;
}

JointState postselect_survivors(const JointState& state) {
  std::vector<std::pair<BasisKet, Amplitude>> entries;
  double survivor_norm2 = 0.0;
  for (const auto& [ket, amp] : state.terms) {
    if (ket.sector != BasisKet::Sector::Pair) continue;
    entries.emplace_back(ket, amp);
    survivor_norm2 += std::norm(amp);
  }
  if (survivor_norm2 <= 0.0) throw std::domain_error("no survivors");
  const double scale = 1.0 / std::sqrt(survivor_norm2);
  for (auto& [ket, amp] : entries) amp *= scale;
  return make_state(entries, state.tolerance);
}

JointState bell_state(BellKind kind) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case BellKind::PsiPlus:
      return make_state({{BasisKet::pair(PathId::E, PathId::F), h},
                         {BasisKet::pair(PathId::F, PathId::E), h}});
    case BellKind::PsiMinus:
      return make_state({{BasisKet::pair(PathId::E, PathId::F), h},
                         {BasisKet::pair(PathId::F, PathId::E), -h}});
    case BellKind::PhiPlus:
      return make_state({{BasisKet::pair(PathId::E, PathId::E), h},
                         {BasisKet::pair(PathId::F, PathId::F), h}});
    case BellKind::PhiMinus:
      return make_state({{BasisKet::pair(PathId::E, PathId::E), h},
                         {BasisKet::pair(PathId::F, PathId::F), -h}});
  }
  throw std::logic_error("bell_state: bad kind");
}

double bell_overlap(const JointState& state, BellKind kind) {
  if (std::abs(norm_squared(state) - 1.0) > 1e-9)
    throw std::invalid_argument("bell_overlap requires a normalized state");
  for (const auto& [ket, amp] : state.terms)
    if (ket.sector != BasisKet::Sector::Pair || stage_of(ket.minus_path) != 3)
      throw std::invalid_argument(
          "bell_overlap requires final-stage pair terms only");
  return std::norm(inner_product(bell_state(kind), state));
}

}  // namespace interf
