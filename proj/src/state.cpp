#include "interf/state.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace interf {

int stage_of(PathId p) {
  switch (p) {
    case PathId::In: return 0;
    case PathId::A:
    case PathId::B: return 1;
    case PathId::C:
    case PathId::D: return 2;
    case PathId::E:
    case PathId::F: return 3;
  }
  throw std::logic_error("stage_of: bad PathId");
}

const char* path_name(PathId p) {
  switch (p) {
    case PathId::In: return "in";
    case PathId::A: return "a";
    case PathId::B: return "b";
    case PathId::C: return "c";
    case PathId::D: return "d";
    case PathId::E: return "e";
    case PathId::F: return "f";
  }
  throw std::logic_error("path_name: bad PathId");
}

namespace {

void check_finite(Amplitude a) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw std::invalid_argument("amplitude must be finite");
}

void prune(JointState& s) {
  for (auto it = s.terms.begin(); it != s.terms.end();) {
    if (std::abs(it->second) < s.tolerance)
      it = s.terms.erase(it);
    else
      ++it;
  }
}

}  // namespace

JointState make_state(const std::vector<std::pair<BasisKet, Amplitude>>& entries,
                      double tolerance) {
  JointState s;
  s.tolerance = tolerance;
  for (const auto& [ket, amp] : entries) {
    check_finite(amp);
    if (ket.sector == BasisKet::Sector::Pair &&
        stage_of(ket.minus_path) != stage_of(ket.plus_path))
      throw std::invalid_argument("pair ket mixes stages: |" +
                                  std::string(path_name(ket.minus_path)) + "-," +
                                  path_name(ket.plus_path) + "+>");
    s.terms[ket] += amp;
  }
  prune(s);
  return s;
}

double norm_squared(const JointState& s) {
  double total = 0.0;
  for (const auto& [ket, amp] : s.terms) total += std::norm(amp);
  return total;
}

Amplitude inner_product(const JointState& s1, const JointState& s2) {
  // Iterate the smaller map.
  const JointState& a = s1.terms.size() <= s2.terms.size() ? s1 : s2;
  const JointState& b = &a == &s1 ? s2 : s1;
  Amplitude result = 0.0;
  for (const auto& [ket, amp] : a.terms) {
    auto it = b.terms.find(ket);
    if (it == b.terms.end()) continue;
    if (&a == &s1)
      result += std::conj(amp) * it->second;
    else
      result += std::conj(it->second) * amp;
  }
  return result;
}

JointState scale_add(const JointState& target, const JointState& source,
                     Amplitude factor) {
  check_finite(factor);
  JointState out = target;
  for (const auto& [ket, amp] : source.terms) out.terms[ket] += factor * amp;
  prune(out);
  return out;
}

std::string format_amplitude(Amplitude a) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", a.real(), a.imag());
  return buf;
}

std::string render_state(const JointState& s) {
  std::string out;
  for (const auto& [ket, amp] : s.terms) {
    if (ket.sector == BasisKet::Sector::Pair) {
      out += '|';
      out += path_name(ket.minus_path);
      out += "-,";
      out += path_name(ket.plus_path);
      out += "+>";
    } else {
      out += "|gamma^" + ket.gamma_label + ">";
    }
    out += " : ";
    out += format_amplitude(amp);
    out += '\n';
  }
  return out;
}

}  // namespace interf
