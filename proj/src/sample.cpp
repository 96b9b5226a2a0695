#include "interf/sample.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "interf/evolve.hpp"

namespace interf {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_output(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Cdf {
  std::vector<std::string> cell_names;
  std::vector<double> cumulative;  // same length; strictly derived from probs
};

Cdf build_cdf(const Scheme& scheme) {
  const OutcomeDistribution d = outcome_distribution(evolve(scheme));
  Cdf cdf;
  auto push = [&](const std::string& name, double p) {
    const double prev = cdf.cumulative.empty() ? 0.0 : cdf.cumulative.back();
    cdf.cell_names.push_back(name);
    cdf.cumulative.push_back(prev + p);
  };
  push("EE", d.p_ee);
  push("EF", d.p_ef);
  push("FE", d.p_fe);
  push("FF", d.p_ff);
  for (const auto& [label, p] : d.p_gamma) push("gamma:" + label, p);
  return cdf;
}

// Inverse CDF with half-open intervals: a zero-probability cell has an
// empty interval and is unreachable for every draw.
size_t pick_cell(const Cdf& cdf, double u) {
  for (size_t k = 0; k + 1 < cdf.cumulative.size(); ++k)
    if (u < cdf.cumulative[k]) return k;
  // Rounding may leave the total cumulative a hair below 1; route such
  // draws to the last cell of nonzero width, never to an empty one.
  for (size_t k = cdf.cumulative.size(); k-- > 0;) {
    const double prev = k == 0 ? 0.0 : cdf.cumulative[k - 1];
    if (cdf.cumulative[k] > prev) return k;
  }
  throw std::logic_error("empty outcome distribution");
}

}  // namespace

double unit_draw(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t x = splitmix64_output(seed + (index + 1) * kGolden);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

RunTally sample(const Scheme& scheme, std::uint64_t n, std::uint64_t seed) {
  return sample_chunked(scheme, n, seed, 1);
}

RunTally sample_chunked(const Scheme& scheme, std::uint64_t n,
                        std::uint64_t seed, unsigned chunks) {
  if (chunks == 0) throw std::invalid_argument("chunks must be positive");
  const Cdf cdf = build_cdf(scheme);

  std::vector<std::vector<std::uint64_t>> per_chunk(
      chunks, std::vector<std::uint64_t>(cdf.cell_names.size(), 0));
  std::vector<std::thread> workers;
  const std::uint64_t chunk_size = (n + chunks - 1) / chunks;
  for (unsigned c = 0; c < chunks; ++c) {
    workers.emplace_back([&, c] {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_size;
      const std::uint64_t end = std::min(n, begin + chunk_size);
      for (std::uint64_t i = begin; i < end; ++i)
        ++per_chunk[c][pick_cell(cdf, unit_draw(seed, i))];
    });
  }
  for (auto& w : workers) w.join();

  RunTally tally;
  tally.n = n;
  tally.seed = seed;
  for (size_t k = 0; k < cdf.cell_names.size(); ++k) {
    std::uint64_t total = 0;
    for (unsigned c = 0; c < chunks; ++c) total += per_chunk[c][k];
    if (total > 0) tally.counts[cdf.cell_names[k]] = total;
  }
  return tally;
}

std::map<std::string, std::pair<double, double>> frequencies(
    const RunTally& t) {
  if (t.n == 0) throw std::invalid_argument("frequencies requires n > 0");
  std::map<std::string, std::pair<double, double>> out;
  const double n = static_cast<double>(t.n);
  for (const auto& [cell, count] : t.counts) {
    const double p = static_cast<double>(count) / n;
    out[cell] = {p, std::sqrt(p * (1.0 - p) / n)};
  }
  return out;
}

RunTally merge(const RunTally& t1, const RunTally& t2) {
  RunTally out = t1;
  out.n += t2.n;
  for (const auto& [cell, count] : t2.counts) out.counts[cell] += count;
  if (t1.seed != t2.seed)
    out.seed = splitmix64_output(t1.seed) ^ splitmix64_output(t2.seed);
  return out;
}

}  // namespace interf
