// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, in code.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "interf/dsl.hpp"
#include "interf/evolve.hpp"
#include "interf/lhv.hpp"
#include "interf/sample.hpp"
#include "test_util.hpp"

using namespace interf;

namespace {

const Amplitude kI(0.0, 1.0);

int failures = 0;

struct Criterion {
  int number;
  const char* title;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }

  void require_close(double actual, double expected, double tol,
                     const std::string& what) {
    if (!(std::abs(actual - expected) <= tol))
      problems.push_back(what + ": got " + std::to_string(actual) +
                         ", expected " + std::to_string(expected));
  }

  ~Criterion() {
    if (problems.empty()) {
      std::printf("PASS criterion %d: %s\n", number, title);
    } else {
      ++failures;
      std::printf("FAIL criterion %d: %s\n", number, title);
      for (const auto& p : problems) std::printf("      %s\n", p.c_str());
    }
  }
};

Amplitude amp_of(const JointState& s, PathId m, PathId p) {
  auto it = s.terms.find(BasisKet::pair(m, p));
  return it == s.terms.end() ? Amplitude(0.0) : it->second;
}

Amplitude gamma_of(const JointState& s, const std::string& label) {
  auto it = s.terms.find(BasisKet::gamma(label));
  return it == s.terms.end() ? Amplitude(0.0) : it->second;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_1() {
  Criterion c{1, "scheme (a) final-state amplitudes"};
  const auto s = evolve(build_scheme_a());
  c.require(std::abs(amp_of(s, PathId::E, PathId::F) - (-0.5 * kI)) <= 1e-12,
            "amp(E,F) != -i/2");
  c.require(std::abs(amp_of(s, PathId::F, PathId::E) - (-0.5 * kI)) <= 1e-12,
            "amp(F,E) != -i/2");
  c.require(std::abs(amp_of(s, PathId::E, PathId::E)) <= 1e-12,
            "amp(E,E) != 0");
  c.require(std::abs(amp_of(s, PathId::F, PathId::F)) <= 1e-12,
            "amp(F,F) != 0");
  c.require_close(std::abs(gamma_of(s, "P")), 0.5, 1e-12, "|amp(gammaP)|");
  c.require_close(std::abs(gamma_of(s, "Q")), 0.5, 1e-12, "|amp(gammaQ)|");
}

void criterion_2() {
  Criterion c{2, "scheme (b) final-state amplitudes"};
  const auto s = evolve(build_scheme_b());
  c.require(std::abs(amp_of(s, PathId::E, PathId::E) - 0.5) <= 1e-12,
            "amp(E,E) != +1/2");
  c.require(std::abs(amp_of(s, PathId::F, PathId::F) - (-0.5)) <= 1e-12,
            "amp(F,F) != -1/2");
  c.require(std::abs(gamma_of(s, "R") - 0.5 * kI) <= 1e-12,
            "amp(gammaR) != i/2");
  c.require(std::abs(gamma_of(s, "S") - 0.5 * kI) <= 1e-12,
            "amp(gammaS) != i/2");
}

void criterion_3() {
  Criterion c{3, "probability tables of both schemes"};
  const auto da = outcome_distribution(evolve(build_scheme_a()));
  c.require_close(da.p_ef, 0.25, 1e-12, "scheme a p(EF)");
  c.require_close(da.p_fe, 0.25, 1e-12, "scheme a p(FE)");
  c.require_close(da.p_ee, 0.0, 1e-12, "scheme a p(EE)");
  c.require_close(da.p_ff, 0.0, 1e-12, "scheme a p(FF)");
  c.require_close(da.gamma_total(), 0.5, 1e-12, "scheme a gamma total");
  const auto db = outcome_distribution(evolve(build_scheme_b()));
  c.require_close(db.p_ee, 0.25, 1e-12, "scheme b p(EE)");
  c.require_close(db.p_ff, 0.25, 1e-12, "scheme b p(FF)");
  c.require_close(db.p_ef, 0.0, 1e-12, "scheme b p(EF)");
  c.require_close(db.p_fe, 0.0, 1e-12, "scheme b p(FE)");
  c.require_close(db.gamma_total(), 0.5, 1e-12, "scheme b gamma total");
}

void criterion_4() {
  Criterion c{4, "survivor Bell-state identification"};
  const auto sa = postselect_survivors(evolve(build_scheme_a()));
  const auto sb = postselect_survivors(evolve(build_scheme_b()));
  c.require_close(bell_overlap(sa, BellKind::PsiPlus), 1.0, 1e-12,
                  "scheme a overlap with PsiPlus");
  c.require_close(bell_overlap(sb, BellKind::PhiMinus), 1.0, 1e-12,
                  "scheme b overlap with PhiMinus");
  c.require_close(bell_overlap(sa, BellKind::PhiMinus), 0.0, 1e-12,
                  "scheme a cross overlap");
  c.require_close(bell_overlap(sb, BellKind::PsiPlus), 0.0, 1e-12,
                  "scheme b cross overlap");
}

void criterion_5() {
  Criterion c{5, "LHV contradiction with verified certificate"};
  const Behavior qa =
      behavior_from_quantum(outcome_distribution(evolve(build_scheme_a())));
  const Behavior qb =
      behavior_from_quantum(outcome_distribution(evolve(build_scheme_b())));
  const auto result = lhv_feasible(qa, qb);
  c.require(!result.feasible, "quantum pair reported feasible");
  c.require(result.certificate.has_value(), "no certificate returned");
  if (result.certificate)
    c.require(verify_certificate(*result.certificate, qa, qb),
              "certificate fails verification");
  c.require(contradiction_fraction(qa, qb) == 0.5,
            "contradiction fraction != 0.5 exactly");
}

void criterion_6() {
  Criterion c{6, "LHV sanity on random mixtures and the analytic criterion"};
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_mixture = [&] {
    Behavior b;
    double total = 0.0;
    for (double& cell : b.cells) total += (cell = unit(rng));
    for (double& cell : b.cells) cell /= total;
    return b;
  };

  for (int trial = 0; trial < 100; ++trial) {
    const Behavior m = random_mixture();
    const auto result = lhv_feasible(m, m);
    if (!result.feasible) {
      c.require(false, "mixture " + std::to_string(trial) + " infeasible");
      continue;
    }
    for (int cell = 0; cell < kCells; ++cell)
      c.require(std::abs(result.weights[cell] - m.cells[cell]) <= 1e-9,
                "mixture " + std::to_string(trial) + " reconstruction off");
  }

  for (int trial = 0; trial < 500; ++trial) {
    const Behavior a = random_mixture();
    const Behavior b = trial % 2 == 0 ? a : random_mixture();
    double gap = 0.0;
    for (int cell = 0; cell < kCells; ++cell)
      gap = std::max(gap, std::abs(a.cells[cell] - b.cells[cell]));
    const bool analytic = gap <= 1e-9;
    const auto result = lhv_feasible(a, b);
    c.require(result.feasible == analytic,
              "pair " + std::to_string(trial) + " disagrees with A == B");
  }
}

void criterion_7() {
  Criterion c{7, "sparse evolution matches the dense oracle"};
  auto check = [&](const Scheme& s, const std::string& tag) {
    const auto sparse = evolve(s);
    const auto dense = dense_oracle(s);
    auto all = sparse.terms;
    for (const auto& [ket, amp] : dense.terms) all.emplace(ket, 0.0);
    for (const auto& [ket, ignored] : all) {
      const Amplitude a1 =
          sparse.terms.count(ket) ? sparse.terms.at(ket) : Amplitude(0.0);
      const Amplitude a2 =
          dense.terms.count(ket) ? dense.terms.at(ket) : Amplitude(0.0);
      c.require(std::abs(a1 - a2) <= 1e-10, tag + ": amplitude mismatch");
    }
  };
  check(build_scheme_a(), "scheme a");
  check(build_scheme_b(), "scheme b");
  std::mt19937 rng(77);
  for (int trial = 0; trial < 20; ++trial)
    check(testutil::random_scheme(rng), "random " + std::to_string(trial));
}

void criterion_8() {
  Criterion c{8, "Monte Carlo frequencies, zero cells, chunk invariance"};
  const std::uint64_t n = 100000;
  const std::uint64_t seed = 42;

  for (const Scheme& s : {build_scheme_a(), build_scheme_b()}) {
    const auto dist = outcome_distribution(evolve(s));
    const auto tally = sample(s, n, seed);
    const auto freq = frequencies(tally);
    auto check_cell = [&](const std::string& cell, double p) {
      const auto count =
          tally.counts.count(cell) ? tally.counts.at(cell) : std::uint64_t(0);
      if (p == 0.0) {
        c.require(count == 0, s.name + " cell " + cell + " drawn despite p=0");
        return;
      }
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      const double estimate = static_cast<double>(count) / static_cast<double>(n);
      c.require(std::abs(estimate - p) <= 5.0 * sigma,
                s.name + " cell " + cell + " outside 5 sigma");
    };
    check_cell("EE", dist.p_ee);
    check_cell("EF", dist.p_ef);
    check_cell("FE", dist.p_fe);
    check_cell("FF", dist.p_ff);
    for (const auto& [label, p] : dist.p_gamma)
      check_cell("gamma:" + label, p);

    for (unsigned chunks : {2u, 5u, 8u}) {
      const auto chunked = sample_chunked(s, n, seed, chunks);
      c.require(chunked.counts == tally.counts && chunked.n == tally.n &&
                    chunked.seed == tally.seed,
                s.name + ": chunked tally differs at " +
                    std::to_string(chunks) + " chunks");
    }
  }
}

void criterion_9() {
  Criterion c{9, "parser: bundled files, round-trip, malformed fixtures"};

  // Bundled scheme files reproduce criteria 1-4 physics.
  const auto pa = parse_scheme(
      read_file(std::string(INTERF_SCHEME_DIR) + "/scheme_a.scm.txt"));
  const auto pb = parse_scheme(
      read_file(std::string(INTERF_SCHEME_DIR) + "/scheme_b.scm.txt"));
  c.require(pa.ok(), "scheme_a.scm.txt does not parse");
  c.require(pb.ok(), "scheme_b.scm.txt does not parse");
  if (pa.ok() && pb.ok()) {
    const auto sa = evolve(*pa.scheme);
    c.require(std::abs(amp_of(sa, PathId::E, PathId::F) - (-0.5 * kI)) <= 1e-12,
              "parsed scheme a: amp(E,F)");
    c.require(std::abs(amp_of(sa, PathId::E, PathId::E)) <= 1e-12,
              "parsed scheme a: amp(E,E)");
    const auto sb = evolve(*pb.scheme);
    c.require(std::abs(amp_of(sb, PathId::E, PathId::E) - 0.5) <= 1e-12,
              "parsed scheme b: amp(E,E)");
    c.require(
        std::abs(bell_overlap(postselect_survivors(sa), BellKind::PsiPlus) -
                 1.0) <= 1e-12,
        "parsed scheme a: PsiPlus overlap");
    c.require(
        std::abs(bell_overlap(postselect_survivors(sb), BellKind::PhiMinus) -
                 1.0) <= 1e-12,
        "parsed scheme b: PhiMinus overlap");
  }

  // Round-trip on 50 generated schemes (3-decimal parameter grid renders
  // exactly at 12 significant digits).
  std::mt19937 rng(88);
  auto grid = [&](double span) {
    return static_cast<double>(rng() % static_cast<unsigned>(span * 1000.0)) /
           1000.0;
  };
  const PathId stage1[2] = {PathId::A, PathId::B};
  for (int trial = 0; trial < 50; ++trial) {
    Scheme s;
    s.name = "g" + std::to_string(trial);
    auto wing = [&] {
      WingCircuit w;
      w.bs1 = splitter_from_reflectance(grid(1.0));
      w.bs2 = splitter_from_reflectance(grid(1.0));
      w.bs3 = splitter_from_reflectance(grid(1.0));
      w.phases.phi_ab = grid(6.0);
      w.phases.phi_cd = grid(6.0);
      return w;
    };
    s.wing_minus = wing();
    s.wing_plus = rng() % 2 ? wing() : s.wing_minus;
    int label = 0;
    for (PathId m : stage1)
      for (PathId p : stage1)
        if (rng() % 2 == 0)
          s.rules.push_back({m, p, "L" + std::to_string(label++)});
    const auto back = parse_scheme(render_scheme(s));
    if (!back.ok()) {
      c.require(false, "round-trip " + std::to_string(trial) + " fails to parse");
      continue;
    }
    Scheme expected = s;
    std::sort(expected.rules.begin(), expected.rules.end(),
              [](const auto& x, const auto& y) {
                return std::pair(x.minus_path, x.plus_path) <
                       std::pair(y.minus_path, y.plus_path);
              });
    c.require(*back.scheme == expected,
              "round-trip " + std::to_string(trial) + " differs");
  }

  // Malformed fixtures with expected line/column.
  auto expect_error_at = [&](const char* file, int line, int column) {
    const auto result =
        parse_scheme(read_file(std::string(INTERF_FIXTURE_DIR) + "/" + file));
    bool found = false;
    for (const auto& d : result.diagnostics)
      if (d.span.line == line && d.span.column == column) found = true;
    c.require(!result.ok() && found,
              std::string(file) + ": expected diagnostic at " +
                  std::to_string(line) + ":" + std::to_string(column));
  };
  expect_error_at("bad_dup_label.scm.txt", 8, 17);
  expect_error_at("bad_rule_stage.scm.txt", 3, 6);
  expect_error_at("bad_unknown_keyword.scm.txt", 3, 5);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
