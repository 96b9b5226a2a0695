#include "interf/circuit.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace interf {

BeamSplitter splitter_from_reflectance(double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("reflectance amplitude must lie in [0,1]");
  BeamSplitter bs;
  bs.r = r;
  bs.t = std::sqrt(1.0 - r * r);
  return bs;
}

BeamSplitter splitter_from_intensity(double R) {
  if (!(R >= 0.0 && R <= 1.0))
    throw std::invalid_argument("intensity reflectance must lie in [0,1]");
  return splitter_from_reflectance(std::sqrt(R));
}

SplitterCoefficients splitter_coefficients(const BeamSplitter& bs) {
  const Amplitude ir(0.0, bs.r);
  return {{{Amplitude(bs.t, 0.0), ir}, {ir, Amplitude(bs.t, 0.0)}}};
}

double canonical_angle(double radians) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

namespace {

WingCircuit fifty_fifty_wing() {
  WingCircuit w;
  const BeamSplitter half = splitter_from_reflectance(1.0 / std::numbers::sqrt2);
  w.bs1 = w.bs2 = w.bs3 = half;
  return w;
}

Scheme built_in(std::string name, std::vector<AnnihilationRule> rules) {
  Scheme s;
  s.name = std::move(name);
  s.wing_minus = fifty_fifty_wing();
  s.wing_plus = s.wing_minus;
  s.rules = std::move(rules);
  return s;
}

}  // namespace

Scheme build_scheme_a() {
  return built_in("a", {{PathId::A, PathId::A, "P"}, {PathId::B, PathId::B, "Q"}});
}

Scheme build_scheme_b() {
  return built_in("b", {{PathId::A, PathId::B, "R"}, {PathId::B, PathId::A, "S"}});
}

std::vector<std::string> validate(const Scheme& s) {
  std::vector<std::string> violations;

  auto check_wing = [&](const WingCircuit& w, const char* which) {
    const BeamSplitter* splitters[] = {&w.bs1, &w.bs2, &w.bs3};
    for (int i = 0; i < 3; ++i) {
      const BeamSplitter& bs = *splitters[i];
      if (std::abs(bs.r * bs.r + bs.t * bs.t - 1.0) > 1e-12)
        violations.push_back(std::string("wing ") + which + " splitter " +
                             std::to_string(i + 1) + ": r^2 + t^2 != 1");
      if (bs.r < 0.0 || bs.r > 1.0 || bs.t < 0.0 || bs.t > 1.0)
        violations.push_back(std::string("wing ") + which + " splitter " +
                             std::to_string(i + 1) +
                             ": amplitude outside [0,1]");
    }
  };
  check_wing(s.wing_minus, "minus");
  check_wing(s.wing_plus, "plus");

  if (s.rules.size() > 4)
    violations.push_back("more than four annihilation rules");

  std::set<std::string> labels;
  std::set<std::pair<PathId, PathId>> pairs;
  for (const auto& rule : s.rules) {
    auto stage1 = [](PathId p) { return p == PathId::A || p == PathId::B; };
    if (!stage1(rule.minus_path) || !stage1(rule.plus_path))
      violations.push_back("annihilation rule outside stage-1 paths: (" +
                           std::string(path_name(rule.minus_path)) + "-, " +
                           path_name(rule.plus_path) + "+)");
    if (!labels.insert(rule.gamma_label).second)
      violations.push_back("duplicate gamma label: " + rule.gamma_label);
    if (!pairs.insert({rule.minus_path, rule.plus_path}).second)
      violations.push_back("duplicate annihilation rule pair: (" +
                           std::string(path_name(rule.minus_path)) + "-, " +
                           path_name(rule.plus_path) + "+)");
  }

  return violations;
}

}  // namespace interf
