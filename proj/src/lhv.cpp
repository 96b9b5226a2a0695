#include "interf/lhv.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "simplex.hpp"

namespace interf {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

constexpr int kRows = 2 * kCells + 1;

void check_behavior(const Behavior& b, const char* which) {
  double sum = 0.0;
  for (double p : b.cells) {
    if (!(p >= -1e-12) || !std::isfinite(p))
      throw std::invalid_argument(std::string("behavior ") + which +
                                  ": negative or non-finite cell mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string("behavior ") + which +
                                ": cell masses do not sum to 1");
}

// Dyadic rational with denominator at most 2^32; covers the built-in
// quantum behaviors (all masses are multiples of 1/4).
bool dyadic_small(double x) {
  const double scaled = std::ldexp(x, 32);
  return std::abs(scaled) < 9.0e15 && scaled == std::floor(scaled);
}

bool dyadic_small(const Behavior& b) {
  return std::all_of(b.cells.begin(), b.cells.end(),
                     [](double x) { return dyadic_small(x); });
}

Rational to_rational(double x) {
  const double scaled = std::ldexp(x, 32);
  return Rational(BigInt(static_cast<long long>(scaled)), BigInt(1) << 32);
}

// Exact path: strict equalities over the 19-row system. The strategy
// columns are point masses, stacked once per behavior, plus the all-ones
// normalization row.
FeasibilityResult solve_exact(const Behavior& a, const Behavior& b) {
  std::vector<std::vector<Rational>> M(kRows, std::vector<Rational>(kCells, 0));
  std::vector<Rational> rhs(kRows, 0);
  for (int c = 0; c < kCells; ++c) {
    M[c][c] = 1;
    M[kCells + c][c] = 1;
    M[2 * kCells][c] = 1;
    rhs[c] = to_rational(a.cells[c]);
    rhs[kCells + c] = to_rational(b.cells[c]);
  }
  rhs[2 * kCells] = 1;

  auto lp = detail::solve_equality_feasibility<Rational>(M, rhs, Rational(0));
  FeasibilityResult result;
  result.feasible = lp.feasible;
  if (lp.feasible) {
    for (int c = 0; c < kCells; ++c)
      result.weights[c] = static_cast<double>(lp.x[c]);
  } else {
    FarkasCertificate cert;
    Rational max_abs = 0;
    for (const auto& y : lp.dual) {
      const Rational mag = y < 0 ? Rational(-y) : y;
      if (mag > max_abs) max_abs = mag;
    }
    for (int i = 0; i < kRows; ++i)
      cert.y[i] = static_cast<double>(lp.dual[i] / max_abs);
    result.certificate = cert;
  }
  return result;
}

// Floating path: each behavior row is relaxed to |A q - b_i| <= tol via two
// slack inequalities; the normalization stays an equality. The Farkas dual
// of the relaxed system projects onto a certificate for the strict rows.
FeasibilityResult solve_float(const Behavior& a, const Behavior& b,
                              double tol) {
  constexpr int kIneq = 2 * 2 * kCells;  // 36 inequality rows
  constexpr int rows = kIneq + 1;
  constexpr int cols = kCells + kIneq;  // weights + one slack per inequality

  std::vector<std::vector<double>> M(rows, std::vector<double>(cols, 0.0));
  std::vector<double> rhs(rows, 0.0);
  for (int i = 0; i < 2 * kCells; ++i) {
    const double bi = i < kCells ? a.cells[i] : b.cells[i - kCells];
    const int c = i % kCells;
    M[2 * i][c] = 1.0;       //  q_c + s <= b_i + tol
    M[2 * i][kCells + 2 * i] = 1.0;
    rhs[2 * i] = bi + tol;
    M[2 * i + 1][c] = -1.0;  // -q_c + s <= tol - b_i
    M[2 * i + 1][kCells + 2 * i + 1] = 1.0;
    rhs[2 * i + 1] = tol - bi;
  }
  for (int c = 0; c < kCells; ++c) M[kIneq][c] = 1.0;
  rhs[kIneq] = 1.0;

  auto lp = detail::solve_equality_feasibility<double>(M, rhs, 1e-11);
  FeasibilityResult result;
  result.feasible = lp.feasible;
  if (lp.feasible) {
    for (int c = 0; c < kCells; ++c) result.weights[c] = lp.x[c];
  } else {
    FarkasCertificate cert;
    for (int i = 0; i < 2 * kCells; ++i)
      cert.y[i] = lp.dual[2 * i] - lp.dual[2 * i + 1];
    cert.y[2 * kCells] = lp.dual[kIneq];
    double max_abs = 0.0;
    for (double y : cert.y) max_abs = std::max(max_abs, std::abs(y));
    if (max_abs > 0.0)
      for (double& y : cert.y) y /= max_abs;
    result.certificate = cert;
  }
  return result;
}

// Nonnegative rank-1 check of the 3x3 weight table: the unique candidate
// decomposition is (row marginals) x (column marginals).
bool product_form_ok(const std::array<double, kCells>& w, double tol) {
  double row[3] = {}, col[3] = {};
  for (int m = 0; m < 3; ++m)
    for (int p = 0; p < 3; ++p) {
      row[m] += w[3 * m + p];
      col[p] += w[3 * m + p];
    }
  for (int m = 0; m < 3; ++m)
    for (int p = 0; p < 3; ++p)
      if (std::abs(w[3 * m + p] - row[m] * col[p]) > tol) return false;
  return true;
}

}  // namespace

const char* outcome_name(LocalOutcome o) {
  switch (o) {
    case LocalOutcome::DetectE: return "E";
    case LocalOutcome::DetectF: return "F";
    case LocalOutcome::NoDetect: return "_";
  }
  throw std::logic_error("outcome_name: bad LocalOutcome");
}

int cell_index(LocalOutcome minus, LocalOutcome plus) {
  return 3 * static_cast<int>(minus) + static_cast<int>(plus);
}

const char* cell_name(int index) {
  static const char* names[kCells] = {"EE", "EF", "E_", "FE", "FF",
                                      "F_", "_E", "_F", "__"};
  if (index < 0 || index >= kCells)
    throw std::out_of_range("cell_name: bad index");
  return names[index];
}

Behavior behavior_from_quantum(const OutcomeDistribution& d) {
  Behavior b;
  b.at(LocalOutcome::DetectE, LocalOutcome::DetectE) = d.p_ee;
  b.at(LocalOutcome::DetectE, LocalOutcome::DetectF) = d.p_ef;
  b.at(LocalOutcome::DetectF, LocalOutcome::DetectE) = d.p_fe;
  b.at(LocalOutcome::DetectF, LocalOutcome::DetectF) = d.p_ff;
  b.at(LocalOutcome::NoDetect, LocalOutcome::NoDetect) = d.gamma_total();
  return b;
}

std::vector<DeterministicStrategy> enumerate_strategies() {
  static const LocalOutcome outcomes[3] = {
      LocalOutcome::DetectE, LocalOutcome::DetectF, LocalOutcome::NoDetect};
  std::vector<DeterministicStrategy> all;
  all.reserve(kCells);
  for (LocalOutcome m : outcomes)
    for (LocalOutcome p : outcomes) all.push_back({m, p});
  return all;
}

Behavior strategy_behavior(const DeterministicStrategy& s) {
  Behavior b;
  b.at(s.minus, s.plus) = 1.0;
  return b;
}

FeasibilityResult lhv_feasible(const Behavior& a, const Behavior& b,
                               const LhvOptions& options) {
  check_behavior(a, "A");
  check_behavior(b, "B");

  // Half the tolerance per behavior row: returned weights then sit within
  // tolerance/2 of each behavior, and a pair is feasible exactly when the
  // behaviors agree cell-wise within the full tolerance.
  FeasibilityResult result = dyadic_small(a) && dyadic_small(b)
                                 ? solve_exact(a, b)
                                 : solve_float(a, b, options.tolerance / 2.0);

  if (result.feasible && options.product_form &&
      !product_form_ok(result.weights, options.tolerance)) {
    result.feasible = false;
    result.weights = {};
    result.note = "no nonnegative rank-1 decomposition of the weight table";
  }
  return result;
}

double contradiction_fraction(const Behavior& a, const Behavior& b) {
  static const LocalOutcome detect[2] = {LocalOutcome::DetectE,
                                         LocalOutcome::DetectF};
  double total = 0.0;
  for (LocalOutcome m : detect)
    for (LocalOutcome p : detect)
      if (std::abs(a.at(m, p)) <= 1e-12) total += b.at(m, p);
  return total;
}

bool verify_certificate(const FarkasCertificate& cert, const Behavior& a,
                        const Behavior& b) {
  double max_abs = 0.0;
  for (double y : cert.y) max_abs = std::max(max_abs, std::abs(y));
  if (max_abs <= 0.0) return false;

  for (int c = 0; c < kCells; ++c) {
    const double column = cert.y[c] + cert.y[kCells + c] + cert.y[2 * kCells];
    if (column > 1e-9 * max_abs) return false;
  }
  double value = cert.y[2 * kCells];
  for (int c = 0; c < kCells; ++c)
    value += cert.y[c] * a.cells[c] + cert.y[kCells + c] * b.cells[c];
  return value > 1e-9 * max_abs;
}

Behavior behavior_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object())
    throw std::invalid_argument("behavior file must hold a JSON object");
  Behavior b;
  for (int c = 0; c < kCells; ++c) {
    const char* key = cell_name(c);
    if (!j.contains(key))
      throw std::invalid_argument(std::string("behavior file: missing key \"") +
                                  key + "\"");
    if (!j.at(key).is_number())
      throw std::invalid_argument(std::string("behavior file: key \"") + key +
                                  "\" is not a number");
    b.cells[c] = j.at(key).get<double>();
  }
  check_behavior(b, "file");
  return b;
}

std::string behavior_to_json_text(const Behavior& b) {
  nlohmann::json j;
  for (int c = 0; c < kCells; ++c) j[cell_name(c)] = b.cells[c];
  return j.dump();
}

}  // namespace interf
