#pragma once

#include <random>
#include <string>

#include "interf/circuit.hpp"

namespace interf::testutil {

/// Random scheme: independent reflectances per splitter, random phases,
/// random subset of the four stage-1 pair combinations as rules.
inline Scheme random_scheme(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 6.28);

  auto random_wing = [&] {
    WingCircuit w;
    w.bs1 = splitter_from_reflectance(unit(rng));
    w.bs2 = splitter_from_reflectance(unit(rng));
    w.bs3 = splitter_from_reflectance(unit(rng));
    w.phases.phi_ab = canonical_angle(angle(rng));
    w.phases.phi_cd = canonical_angle(angle(rng));
    return w;
  };

  Scheme s;
  s.name = "random";
  s.wing_minus = random_wing();
  s.wing_plus = random_wing();

  const PathId stage1[2] = {PathId::A, PathId::B};
  int label = 0;
  for (PathId m : stage1)
    for (PathId p : stage1)
      if (rng() % 2 == 0)
        s.rules.push_back({m, p, "G" + std::to_string(label++)});
  return s;
}

}  // namespace interf::testutil
