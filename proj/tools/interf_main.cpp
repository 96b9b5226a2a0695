// interf: simulate the paired-interferometer gedanken experiment, sample
// runs, analyze local-hidden-variable feasibility, sweep parameters, and
// check scheme files. Output schemas are documented in docs/output-schemas.md.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "interf/dsl.hpp"
#include "interf/evolve.hpp"
#include "interf/lhv.hpp"
#include "interf/sample.hpp"

namespace {

using nlohmann::json;
using namespace interf;

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitUserError = 2;
constexpr int kExitEnvironmentError = 3;

// Fixed default so bare invocations are reproducible; override with --seed.
constexpr std::uint64_t kDefaultSeed = 0x5EEDBA5EULL;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path))
      throw UserError("file not found: " + path);
    throw EnvironmentError("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw EnvironmentError("read failure: " + path);
  return buf.str();
}

// `a`, `b`, or a path to a .scm.txt file.
Scheme load_scheme(const std::string& ref) {
  if (ref == "a") return build_scheme_a();
  if (ref == "b") return build_scheme_b();
  const std::string text = read_file(ref);
  ParseResult parsed = parse_scheme(text);
  if (!parsed.ok())
    throw UserError(ref + ":\n" + format_diagnostics(parsed.diagnostics));
  return *parsed.scheme;
}

std::string fmt12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json distribution_json(const OutcomeDistribution& d) {
  json gamma = json::object();
  for (const auto& [label, p] : d.p_gamma) gamma[label] = p;
  return {{"EE", d.p_ee}, {"EF", d.p_ef},   {"FE", d.p_fe},
          {"FF", d.p_ff}, {"gamma", gamma}, {"gammaTotal", d.gamma_total()}};
}

json state_json(const JointState& s) {
  json terms = json::array();
  for (const auto& [ket, amp] : s.terms) {
    json t;
    if (ket.sector == BasisKet::Sector::Pair)
      t["ket"] = std::string("|") + path_name(ket.minus_path) + "-," +
                 path_name(ket.plus_path) + "+>";
    else
      t["ket"] = "|gamma^" + ket.gamma_label + ">";
    t["re"] = amp.real();
    t["im"] = amp.imag();
    terms.push_back(t);
  }
  return terms;
}

void print_distribution_table(const OutcomeDistribution& d) {
  std::printf("%-12s %s\n", "outcome", "probability");
  std::printf("%-12s %s\n", "EE", fmt12(d.p_ee).c_str());
  std::printf("%-12s %s\n", "EF", fmt12(d.p_ef).c_str());
  std::printf("%-12s %s\n", "FE", fmt12(d.p_fe).c_str());
  std::printf("%-12s %s\n", "FF", fmt12(d.p_ff).c_str());
  for (const auto& [label, p] : d.p_gamma)
    std::printf("gamma:%-6s %s\n", label.c_str(), fmt12(p).c_str());
  std::printf("%-12s %s\n", "gammaTotal", fmt12(d.gamma_total()).c_str());
}

int run_simulate(const std::string& scheme_ref, const std::string& format,
                 double tolerance) {
  const Scheme scheme = load_scheme(scheme_ref);
  const JointState final_state = evolve(scheme, tolerance);
  const OutcomeDistribution dist = outcome_distribution(final_state);

  bool has_survivors = true;
  JointState survivors;
  try {
    survivors = postselect_survivors(final_state);
  } catch (const std::domain_error&) {
    has_survivors = false;
  }

  auto overlap = [&](BellKind k) {
    return has_survivors ? bell_overlap(survivors, k) : 0.0;
  };

  if (format == "json") {
    json out = {{"schemaVersion", kSchemaVersion},
                {"scheme", scheme.name},
                {"finalState", state_json(final_state)},
                {"probabilities", distribution_json(dist)}};
    if (has_survivors) {
      out["survivors"] = state_json(survivors);
      out["bellOverlaps"] = {{"psiPlus", overlap(BellKind::PsiPlus)},
                             {"psiMinus", overlap(BellKind::PsiMinus)},
                             {"phiPlus", overlap(BellKind::PhiPlus)},
                             {"phiMinus", overlap(BellKind::PhiMinus)}};
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else if (format == "csv") {
    std::printf("outcome,probability\n");
    std::printf("EE,%s\nEF,%s\nFE,%s\nFF,%s\n", fmt12(dist.p_ee).c_str(),
                fmt12(dist.p_ef).c_str(), fmt12(dist.p_fe).c_str(),
                fmt12(dist.p_ff).c_str());
    for (const auto& [label, p] : dist.p_gamma)
      std::printf("gamma:%s,%s\n", label.c_str(), fmt12(p).c_str());
  } else {
    std::printf("scheme %s\n\nfinal state:\n%s\n", scheme.name.c_str(),
                render_state(final_state).c_str());
    print_distribution_table(dist);
    if (has_survivors) {
      std::printf("\nsurvivors (renormalized):\n%s\n",
                  render_state(survivors).c_str());
      std::printf("bell overlaps: psiPlus=%s psiMinus=%s phiPlus=%s phiMinus=%s\n",
                  fmt12(overlap(BellKind::PsiPlus)).c_str(),
                  fmt12(overlap(BellKind::PsiMinus)).c_str(),
                  fmt12(overlap(BellKind::PhiPlus)).c_str(),
                  fmt12(overlap(BellKind::PhiMinus)).c_str());
    } else {
      std::printf("\nno survivors: all amplitude annihilated\n");
    }
  }
  return kExitOk;
}

int run_sample(const std::string& scheme_ref, std::uint64_t n,
               std::uint64_t seed, unsigned chunks, const std::string& format) {
  const Scheme scheme = load_scheme(scheme_ref);
  const RunTally tally = sample_chunked(scheme, n, seed, chunks);

  if (format == "json") {
    json counts = json::object();
    for (const auto& [cell, count] : tally.counts) counts[cell] = count;
    json out = {{"schemaVersion", kSchemaVersion},
                {"scheme", scheme.name},
                {"n", tally.n},
                {"seed", tally.seed},
                {"counts", counts}};
    if (tally.n > 0) {
      json freq = json::object();
      for (const auto& [cell, ef] : frequencies(tally))
        freq[cell] = {{"estimate", ef.first}, {"standardError", ef.second}};
      out["frequencies"] = freq;
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else if (format == "csv") {
    std::printf("cell,count,estimate,standardError\n");
    if (tally.n > 0) {
      const auto freq = frequencies(tally);
      for (const auto& [cell, count] : tally.counts) {
        const auto& ef = freq.at(cell);
        std::printf("%s,%llu,%s,%s\n", cell.c_str(),
                    static_cast<unsigned long long>(count),
                    fmt12(ef.first).c_str(), fmt12(ef.second).c_str());
      }
    }
  } else {
    std::printf("scheme %s, n=%llu, seed=%llu\n", scheme.name.c_str(),
                static_cast<unsigned long long>(tally.n),
                static_cast<unsigned long long>(tally.seed));
    if (tally.n == 0) {
      std::printf("(empty tally)\n");
    } else {
      const auto freq = frequencies(tally);
      std::printf("%-12s %-10s %-16s %s\n", "cell", "count", "estimate",
                  "standardError");
      for (const auto& [cell, count] : tally.counts) {
        const auto& ef = freq.at(cell);
        std::printf("%-12s %-10llu %-16s %s\n", cell.c_str(),
                    static_cast<unsigned long long>(count),
                    fmt12(ef.first).c_str(), fmt12(ef.second).c_str());
      }
    }
  }
  return kExitOk;
}

int run_lhv(const std::string& file_a, const std::string& file_b, bool from_qm,
            bool product_form, const std::string& format) {
  Behavior behavior_a, behavior_b;
  if (from_qm) {
    behavior_a =
        behavior_from_quantum(outcome_distribution(evolve(build_scheme_a())));
    behavior_b =
        behavior_from_quantum(outcome_distribution(evolve(build_scheme_b())));
  } else {
    if (file_a.empty() || file_b.empty())
      throw UserError("provide --a and --b behavior files, or --from-qm");
    try {
      behavior_a = behavior_from_json_text(read_file(file_a));
      behavior_b = behavior_from_json_text(read_file(file_b));
    } catch (const json::exception& e) {
      throw UserError(std::string("behavior file: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UserError(e.what());
    }
  }

  LhvOptions options;
  options.product_form = product_form;
  const FeasibilityResult result = lhv_feasible(behavior_a, behavior_b, options);
  const double fraction = contradiction_fraction(behavior_a, behavior_b);
  const double fraction_swapped = contradiction_fraction(behavior_b, behavior_a);
  const bool verified =
      result.certificate &&
      verify_certificate(*result.certificate, behavior_a, behavior_b);

  if (format == "json") {
    json out = {{"schemaVersion", kSchemaVersion},
                {"feasible", result.feasible},
                {"contradictionFraction", fraction},
                {"contradictionFractionSwapped", fraction_swapped}};
    if (result.feasible) {
      json weights = json::object();
      for (int c = 0; c < kCells; ++c) weights[cell_name(c)] = result.weights[c];
      out["weights"] = weights;
    }
    if (result.certificate) {
      out["certificate"] = std::vector<double>(result.certificate->y.begin(),
                                               result.certificate->y.end());
      out["certificateVerified"] = verified;
    }
    if (!result.note.empty()) out["note"] = result.note;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("verdict: %s\n", result.feasible ? "Feasible" : "Infeasible");
    if (result.feasible) {
      std::printf("weights:\n");
      for (int c = 0; c < kCells; ++c)
        if (result.weights[c] > 1e-15)
          std::printf("  %s : %s\n", cell_name(c),
                      fmt12(result.weights[c]).c_str());
    }
    if (result.certificate) {
      std::printf("farkas certificate (rows A0..A8, B0..B8, norm):\n ");
      for (double y : result.certificate->y) std::printf(" %s", fmt12(y).c_str());
      std::printf("\n  verified: %s\n", verified ? "yes" : "no");
    }
    if (!result.note.empty()) std::printf("note: %s\n", result.note.c_str());
    std::printf("contradictionFraction: %s (swapped: %s)\n",
                fmt12(fraction).c_str(), fmt12(fraction_swapped).c_str());
  }
  return kExitOk;
}

struct SweepTarget {
  enum class Kind { Ratio, Phase } kind;
  int splitter = 0;       // 1..3 when Kind::Ratio
  bool phase_ab = false;  // when Kind::Phase
};

SweepTarget parse_param(const std::string& name) {
  if (name == "bs1") return {SweepTarget::Kind::Ratio, 1, false};
  if (name == "bs2") return {SweepTarget::Kind::Ratio, 2, false};
  if (name == "bs3") return {SweepTarget::Kind::Ratio, 3, false};
  if (name == "phase_ab") return {SweepTarget::Kind::Phase, 0, true};
  if (name == "phase_cd") return {SweepTarget::Kind::Phase, 0, false};
  throw UserError("unknown parameter '" + name +
                  "' (expected bs1, bs2, bs3, phase_ab, or phase_cd)");
}

void apply_param(WingCircuit& wing, const SweepTarget& target, double value) {
  if (target.kind == SweepTarget::Kind::Ratio) {
    BeamSplitter bs = splitter_from_reflectance(value);
    if (target.splitter == 1) wing.bs1 = bs;
    else if (target.splitter == 2) wing.bs2 = bs;
    else wing.bs3 = bs;
  } else if (target.phase_ab) {
    wing.phases.phi_ab = value;
  } else {
    wing.phases.phi_cd = value;
  }
}

int run_sweep(const std::string& scheme_ref, const std::string& param,
              const std::string& range, const std::string& wing_sel,
              const std::string& format, double tolerance) {
  const Scheme base = load_scheme(scheme_ref);
  const SweepTarget target = parse_param(param);

  double start, stop, step;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0)
    throw UserError("range must be start:stop:step with positive step");

  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);

  struct Row {
    double value;
    OutcomeDistribution dist;
  };
  std::vector<Row> rows;
  for (double v : grid) {
    Scheme s = base;
    if (wing_sel == "minus" || wing_sel == "both")
      apply_param(s.wing_minus, target, v);
    if (wing_sel == "plus" || wing_sel == "both")
      apply_param(s.wing_plus, target, v);
    rows.push_back({v, outcome_distribution(evolve(s, tolerance))});
  }

  if (format == "json") {
    json out = {{"schemaVersion", kSchemaVersion},
                {"scheme", base.name},
                {"param", param},
                {"wing", wing_sel},
                {"rows", json::array()}};
    for (const auto& row : rows) {
      json r = distribution_json(row.dist);
      r["value"] = row.value;
      out["rows"].push_back(r);
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else if (format == "csv") {
    std::printf("value,EE,EF,FE,FF,gammaTotal\n");
    for (const auto& row : rows)
      std::printf("%s,%s,%s,%s,%s,%s\n", fmt12(row.value).c_str(),
                  fmt12(row.dist.p_ee).c_str(), fmt12(row.dist.p_ef).c_str(),
                  fmt12(row.dist.p_fe).c_str(), fmt12(row.dist.p_ff).c_str(),
                  fmt12(row.dist.gamma_total()).c_str());
  } else {
    std::printf("%-16s %-16s %-16s %-16s %-16s %s\n", param.c_str(), "EE",
                "EF", "FE", "FF", "gammaTotal");
    for (const auto& row : rows)
      std::printf("%-16s %-16s %-16s %-16s %-16s %s\n",
                  fmt12(row.value).c_str(), fmt12(row.dist.p_ee).c_str(),
                  fmt12(row.dist.p_ef).c_str(), fmt12(row.dist.p_fe).c_str(),
                  fmt12(row.dist.p_ff).c_str(),
                  fmt12(row.dist.gamma_total()).c_str());
  }
  return kExitOk;
}

int run_parse_check(const std::string& path) {
  const std::string text = read_file(path);
  const ParseResult parsed = parse_scheme(text);
  if (!parsed.ok()) {
    std::fprintf(stderr, "%s", format_diagnostics(parsed.diagnostics).c_str());
    return kExitUserError;
  }
  std::printf("%s: ok (scheme \"%s\", %zu annihilation rules)\n", path.c_str(),
              parsed.scheme->name.c_str(), parsed.scheme->rules.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paired-interferometer gedanken experiment toolkit"};
  app.require_subcommand(1);

  std::string format = "table";
  double tolerance = 1e-12;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--tolerance", tolerance, "amplitude prune tolerance")
      ->check(CLI::PositiveNumber);

  std::string scheme_ref = "a";

  auto* simulate = app.add_subcommand("simulate", "evolve a scheme and print "
                                                  "the final state");
  simulate->add_option("--scheme", scheme_ref, "a, b, or a scheme file path");

  std::uint64_t n = 100000;
  std::uint64_t seed = kDefaultSeed;
  unsigned chunks = 1;
  auto* sample_cmd = app.add_subcommand("sample", "draw seeded experiment runs");
  sample_cmd->add_option("--scheme", scheme_ref);
  sample_cmd->add_option("-n,--runs", n, "number of runs");
  sample_cmd->add_option("--seed", seed, "RNG seed (fixed default)");
  sample_cmd->add_option("--chunks", chunks, "parallel chunks")
      ->check(CLI::PositiveNumber);

  std::string file_a, file_b;
  bool from_qm = false, product_form = false;
  auto* lhv = app.add_subcommand("lhv", "local-hidden-variable feasibility");
  lhv->add_option("--a", file_a, "behavior file for context A");
  lhv->add_option("--b", file_b, "behavior file for context B");
  lhv->add_flag("--from-qm", from_qm, "derive behaviors from built-in schemes");
  lhv->add_flag("--product-form", product_form,
                "restrict weights to product distributions");

  std::string param, range, wing_sel = "both";
  auto* sweep = app.add_subcommand("sweep", "distributions over a parameter grid");
  sweep->add_option("--scheme", scheme_ref);
  sweep->add_option("--param", param, "bs1|bs2|bs3|phase_ab|phase_cd")
      ->required();
  sweep->add_option("--range", range, "start:stop:step")->required();
  sweep->add_option("--wing", wing_sel, "minus|plus|both")
      ->check(CLI::IsMember({"minus", "plus", "both"}));

  std::string check_path;
  auto* parse_check = app.add_subcommand("parse-check", "validate a scheme file");
  parse_check->add_option("path", check_path, "scheme file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (simulate->parsed()) return run_simulate(scheme_ref, format, tolerance);
    if (sample_cmd->parsed())
      return run_sample(scheme_ref, n, seed, chunks, format);
    if (lhv->parsed())
      return run_lhv(file_a, file_b, from_qm, product_form, format);
    if (sweep->parsed())
      return run_sweep(scheme_ref, param, range, wing_sel, format, tolerance);
    if (parse_check->parsed()) return run_parse_check(check_path);
  } catch (const EnvironmentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitEnvironmentError;
  } catch (const UserError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUserError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUserError;
  }
  return kExitOk;
}
