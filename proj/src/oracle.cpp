#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "interf/evolve.hpp"

// Dense brute-force evolution. Everything here is deliberately written
// against a flat layout with explicit matrices rather than the sparse
// term maps of evolve(), so the two paths share no propagation code.

namespace interf {

namespace {

constexpr int kPaths = 7;  // In, A, B, C, D, E, F

int path_index(PathId p) { return static_cast<int>(p); }

PathId index_path(int i) { return static_cast<PathId>(i); }

using Mat7 = std::array<std::array<Amplitude, kPaths>, kPaths>;

Mat7 identity7() {
  Mat7 m{};
  for (int i = 0; i < kPaths; ++i) m[i][i] = 1.0;
  return m;
}

// Single-wing routing matrix for one stage: the two stage inputs map to
// t/ir combinations of the outputs, every other path index maps to itself.
// m[row][col] routes coordinate col into coordinate row.
Mat7 wing_stage_matrix(const WingCircuit& w, int stage) {
  const BeamSplitter& bs = stage == 1 ? w.bs1 : stage == 2 ? w.bs2 : w.bs3;
  PathId in1, in2, out1, out2;
  double phase = 0.0;
  switch (stage) {
    case 1:
      in1 = in2 = PathId::In;
      out1 = PathId::A;
      out2 = PathId::B;
      phase = w.phases.phi_ab;
      break;
    case 2:
      in1 = PathId::A;
      in2 = PathId::B;
      out1 = PathId::C;
      out2 = PathId::D;
      phase = w.phases.phi_cd;
      break;
    case 3:
      in1 = PathId::C;
      in2 = PathId::D;
      out1 = PathId::E;
      out2 = PathId::F;
      break;
    default:
      throw std::logic_error("bad stage");
  }

  Mat7 m = identity7();
  const Amplitude ir(0.0, bs.r);
  const Amplitude ph = std::polar(1.0, phase);
  m[path_index(in1)][path_index(in1)] = 0.0;
  m[path_index(in2)][path_index(in2)] = 0.0;
  m[path_index(out1)][path_index(in1)] = bs.t;
  m[path_index(out2)][path_index(in1)] = ir * ph;
  if (stage != 1) {
    m[path_index(out2)][path_index(in2)] = Amplitude(bs.t, 0.0) * ph;
    m[path_index(out1)][path_index(in2)] = ir;
  }
  return m;
}

using JointVec = std::vector<Amplitude>;  // 49 pair coords + one per rule

constexpr int kPairDim = kPaths * kPaths;

int pair_coord(int minus, int plus) { return minus * kPaths + plus; }

// psi' = (Mminus (x) Mplus) psi on the pair block; gamma block untouched.
JointVec apply_tensor(const JointVec& psi, const Mat7& mm, const Mat7& mp) {
  JointVec out(psi.size(), 0.0);
  for (int rm = 0; rm < kPaths; ++rm)
    for (int rp = 0; rp < kPaths; ++rp) {
      Amplitude acc = 0.0;
      for (int cm = 0; cm < kPaths; ++cm)
        for (int cp = 0; cp < kPaths; ++cp)
          acc += mm[rm][cm] * mp[rp][cp] * psi[pair_coord(cm, cp)];
      out[pair_coord(rm, rp)] = acc;
    }
  for (size_t g = kPairDim; g < psi.size(); ++g) out[g] = psi[g];
  return out;
}

}  // namespace

JointState dense_oracle(const Scheme& scheme) {
  const auto violations = validate(scheme);
  if (!violations.empty())
    throw std::invalid_argument("invalid scheme: " + violations.front());

  JointVec psi(kPairDim + scheme.rules.size(), 0.0);
  psi[pair_coord(path_index(PathId::In), path_index(PathId::In))] = 1.0;

  psi = apply_tensor(psi, wing_stage_matrix(scheme.wing_minus, 1),
                     wing_stage_matrix(scheme.wing_plus, 1));

  // Annihilation projector: route matched pair coordinates into the gamma
  // coordinate of their rule, amplitude unchanged.
  for (size_t g = 0; g < scheme.rules.size(); ++g) {
    const AnnihilationRule& rule = scheme.rules[g];
    const int c =
        pair_coord(path_index(rule.minus_path), path_index(rule.plus_path));
    psi[kPairDim + g] += psi[c];
    psi[c] = 0.0;
  }

  for (int stage = 2; stage <= 3; ++stage)
    psi = apply_tensor(psi, wing_stage_matrix(scheme.wing_minus, stage),
                       wing_stage_matrix(scheme.wing_plus, stage));

  std::vector<std::pair<BasisKet, Amplitude>> entries;
  for (int m = 0; m < kPaths; ++m)
    for (int p = 0; p < kPaths; ++p) {
      const Amplitude a = psi[pair_coord(m, p)];
      if (std::abs(a) >= 1e-12)
        entries.emplace_back(BasisKet::pair(index_path(m), index_path(p)), a);
    }
  for (size_t g = 0; g < scheme.rules.size(); ++g) {
    const Amplitude a = psi[kPairDim + g];
    if (std::abs(a) >= 1e-12)
      entries.emplace_back(BasisKet::gamma(scheme.rules[g].gamma_label), a);
  }
  return make_state(entries);
}

}  // namespace interf
