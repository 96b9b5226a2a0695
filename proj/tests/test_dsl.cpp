#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "interf/dsl.hpp"

using namespace interf;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool has_error_at(const ParseResult& result, int line, int column,
                  const std::string& needle) {
  for (const auto& d : result.diagnostics)
    if (d.span.line == line && d.span.column == column &&
        d.message.find(needle) != std::string::npos)
      return true;
  return false;
}

}  // namespace

TEST_CASE("bundled scheme files parse to the built-in schemes") {
  auto a = parse_scheme(read_file(std::string(INTERF_SCHEME_DIR) +
                                  "/scheme_a.scm.txt"));
  REQUIRE(a.ok());
  CHECK(*a.scheme == build_scheme_a());

  auto b = parse_scheme(read_file(std::string(INTERF_SCHEME_DIR) +
                                  "/scheme_b.scm.txt"));
  REQUIRE(b.ok());
  CHECK(*b.scheme == build_scheme_b());
}

TEST_CASE("empty input") {
  auto result = parse_scheme("");
  CHECK(!result.ok());
  CHECK(has_error_at(result, 1, 1, "missing scheme block"));
}

TEST_CASE("rule outside stage-1 paths") {
  auto result = parse_scheme(
      "scheme \"x\" { annihilate { (c-, a+) -> X } }");
  CHECK(!result.ok());
  REQUIRE(!result.diagnostics.empty());
  CHECK(result.diagnostics[0].message ==
        "annihilation rule outside stage-1 paths");
}

TEST_CASE("malformed fixtures carry positioned diagnostics") {
  auto dup = parse_scheme(read_file(std::string(INTERF_FIXTURE_DIR) +
                                    "/bad_dup_label.scm.txt"));
  CHECK(!dup.ok());
  CHECK(has_error_at(dup, 8, 17, "duplicate gamma label"));

  auto stage = parse_scheme(read_file(std::string(INTERF_FIXTURE_DIR) +
                                      "/bad_rule_stage.scm.txt"));
  CHECK(!stage.ok());
  CHECK(has_error_at(stage, 3, 6, "outside stage-1 paths"));

  auto keyword = parse_scheme(read_file(std::string(INTERF_FIXTURE_DIR) +
                                        "/bad_unknown_keyword.scm.txt"));
  CHECK(!keyword.ok());
  CHECK(has_error_at(keyword, 3, 5, "unknown keyword"));
}

TEST_CASE("assorted parse errors") {
  CHECK(!parse_scheme("scheme \"x\" { wing minus {} wing minus {} }").ok());
  CHECK(!parse_scheme("scheme \"x\" { wing minus { splitter 1 ratio 1.5 } }")
             .ok());
  CHECK(!parse_scheme("scheme \"x\" { frobnicate {} }").ok());
  CHECK(!parse_scheme("scheme \"x\" { wing plus = minus }").ok());
  CHECK(!parse_scheme("scheme \"x\" { annihilate { (a-, a+) -> P; "
                      "(a-, a+) -> Q } }")
             .ok());
  CHECK(!parse_scheme("scheme \"x\" {").ok());
  CHECK(parse_scheme("\xff\xfe garbage").diagnostics[0].message ==
        "invalid encoding");
}

TEST_CASE("defaults are 50/50 with zero phases") {
  auto result = parse_scheme("scheme \"bare\" { }");
  REQUIRE(result.ok());
  Scheme expected = build_scheme_a();
  expected.name = "bare";
  expected.rules.clear();
  CHECK(*result.scheme == expected);
}

TEST_CASE("intensity keyword converts via r = sqrt(R)") {
  auto result = parse_scheme(
      "scheme \"i\" { wing minus { splitter 1 intensity 0.5 } "
      "wing plus = minus }");
  REQUIRE(result.ok());
  CHECK(result.scheme->wing_minus.bs1.r ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("render round-trips the built-in schemes") {
  for (const Scheme& s : {build_scheme_a(), build_scheme_b()}) {
    const std::string text = render_scheme(s);
    CHECK(text == render_scheme(s));  // deterministic
    auto back = parse_scheme(text);
    REQUIRE(back.ok());
    CHECK(*back.scheme == s);
  }
}

TEST_CASE("round-trip property on generated schemes") {
  // Parameters on a 3-decimal grid render exactly at 12 significant digits,
  // so the round-trip comparison can be bit-exact.
  std::mt19937 rng(57);
  auto grid = [&](double lo, double hi) {
    const int steps = static_cast<int>((hi - lo) * 1000.0);
    return lo + static_cast<double>(static_cast<int>(rng() % steps)) / 1000.0;
  };

  const PathId stage1[2] = {PathId::A, PathId::B};
  for (int trial = 0; trial < 50; ++trial) {
    Scheme s;
    s.name = "rt" + std::to_string(trial);
    auto random_wing = [&] {
      WingCircuit w;
      w.bs1 = splitter_from_reflectance(grid(0.0, 1.0));
      w.bs2 = splitter_from_reflectance(grid(0.0, 1.0));
      w.bs3 = splitter_from_reflectance(grid(0.0, 1.0));
      w.phases.phi_ab = grid(0.0, 6.0);
      w.phases.phi_cd = grid(0.0, 6.0);
      return w;
    };
    s.wing_minus = random_wing();
    s.wing_plus = rng() % 2 == 0 ? s.wing_minus : random_wing();
    int label = 0;
    for (PathId m : stage1)
      for (PathId p : stage1)
        if (rng() % 2 == 0)
          s.rules.push_back({m, p, "L" + std::to_string(label++)});

    const std::string text = render_scheme(s);
    auto back = parse_scheme(text);
    REQUIRE(back.ok());
    // Rules are canonically sorted by the renderer.
    Scheme expected = s;
    std::sort(expected.rules.begin(), expected.rules.end(),
              [](const auto& x, const auto& y) {
                return std::pair(x.minus_path, x.plus_path) <
                       std::pair(y.minus_path, y.plus_path);
              });
    CHECK(*back.scheme == expected);
    CHECK(render_scheme(*back.scheme) == text);  // idempotent
  }
}

TEST_CASE("diagnostic spans point inside the input") {
  const std::string bad = "scheme \"x\" {\n  wing minus {\n    bogus\n  }\n}\n";
  auto result = parse_scheme(bad);
  REQUIRE(!result.ok());
  int lines = 1;
  for (char c : bad)
    if (c == '\n') ++lines;
  for (const auto& d : result.diagnostics) {
    CHECK(d.span.line >= 1);
    CHECK(d.span.line <= lines);
    CHECK(d.span.column >= 1);
  }
}

TEST_CASE("parser survives arbitrary bytes") {
  std::mt19937 rng(97);
  const std::string seedtext = render_scheme(build_scheme_a());
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    if (trial % 2 == 0) {
      const size_t len = rng() % 4096;
      text.reserve(len);
      for (size_t i = 0; i < len; ++i)
        text += static_cast<char>(rng() % 256);
    } else {
      text = seedtext;
      for (int k = 0; k < 8; ++k)
        text[rng() % text.size()] = static_cast<char>(rng() % 256);
    }
    auto result = parse_scheme(text);  // must not crash
    CHECK((result.ok() || !result.diagnostics.empty()));
  }
}
