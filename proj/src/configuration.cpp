#include "loosehc/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "loosehc/rng.hpp"

namespace loosehc {

PartitionScheme::PartitionScheme(int m, int d, int kappa) : m(m), d(d), kappa(kappa) {
  if (m < 1) throw std::invalid_argument("PartitionScheme: m must be positive");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("PartitionScheme: d must be even and >= 2");
  if (kappa < 1) throw std::invalid_argument("PartitionScheme: kappa must be positive");
}

int count_spoiled_pairs(const PartitionScheme& scheme, const std::vector<std::array<int, 2>>& pairs) {
  int s1 = 0;
  for (const auto& pr : pairs) {
    if (scheme.x_cell_of(pr[0]) == scheme.x_cell_of(pr[1])) ++s1;
  }
  return s1;
}

int count_spoiled_blocks(const PartitionScheme& scheme, const std::vector<std::vector<int>>& blocks) {
  int s2 = 0;
  std::vector<int> cells;
  for (const auto& block : blocks) {
    cells.clear();
    for (int p : block) cells.push_back(scheme.y_cell_of(p));
    std::sort(cells.begin(), cells.end());
    for (std::size_t i = 0; i < cells.size();) {
      std::size_t j = i;
      while (j < cells.size() && cells[j] == cells[i]) ++j;
      const std::size_t c = j - i;
      s2 += static_cast<int>(c * (c - 1) / 2);
      i = j;
    }
  }
  return s2;
}

namespace {

Configuration sample_configuration_with(const PartitionScheme& scheme, Rng& rng) {
  Configuration c;
  c.scheme = scheme;

  std::vector<int> xs(static_cast<std::size_t>(scheme.x_point_count()));
  std::iota(xs.begin(), xs.end(), 0);
  rng.shuffle(xs);
  c.x_pairs.reserve(static_cast<std::size_t>(scheme.pair_count()));
  for (std::size_t j = 0; j + 1 < xs.size(); j += 2) {
    std::array<int, 2> pr{xs[j], xs[j + 1]};
    if (pr[0] > pr[1]) std::swap(pr[0], pr[1]);
    c.x_pairs.push_back(pr);
  }

  std::vector<int> ys(static_cast<std::size_t>(scheme.y_point_count()));
  std::iota(ys.begin(), ys.end(), 0);
  rng.shuffle(ys);
  const std::size_t kap = static_cast<std::size_t>(scheme.kappa);
  c.y_blocks.reserve(static_cast<std::size_t>(scheme.pair_count()));
  for (std::size_t j = 0; j < ys.size(); j += kap) {
    std::vector<int> block(ys.begin() + static_cast<std::ptrdiff_t>(j),
                           ys.begin() + static_cast<std::ptrdiff_t>(j + kap));
    std::sort(block.begin(), block.end());
    c.y_blocks.push_back(std::move(block));
  }

  c.s1 = count_spoiled_pairs(scheme, c.x_pairs);
  c.s2 = count_spoiled_blocks(scheme, c.y_blocks);
  return c;
}

}  // namespace

Configuration sample_configuration(int m, int d, int kappa, std::uint64_t seed) {
  const PartitionScheme scheme(m, d, kappa);
  Rng rng(seed);
  return sample_configuration_with(scheme, rng);
}

double unspoiled_probability_asymptotic(int d, int kappa) {
  if (d < 2 || kappa < 1) {
    throw std::invalid_argument("unspoiled_probability_asymptotic: need d >= 2, kappa >= 1");
  }
  return std::exp(-(d - 1) / 2.0 - (kappa - 1) * (d - 2) / 4.0);
}

std::vector<Edge> project_psi(const Configuration& c) {
  if (!is_unspoiled(c)) {
    throw std::invalid_argument("project_psi: configuration is spoiled (s1 + s2 > 0)");
  }
  const PartitionScheme& sc = c.scheme;
  std::vector<Edge> edges;
  edges.reserve(c.x_pairs.size());
  for (std::size_t j = 0; j < c.x_pairs.size(); ++j) {
    Edge e;
    e.reserve(static_cast<std::size_t>(sc.k()));
    e.push_back(sc.x_cell_vertex(sc.x_cell_of(c.x_pairs[j][0])));
    e.push_back(sc.x_cell_vertex(sc.x_cell_of(c.x_pairs[j][1])));
    for (int p : c.y_blocks[j]) e.push_back(sc.y_cell_vertex(sc.y_cell_of(p)));
    std::sort(e.begin(), e.end());
    edges.push_back(std::move(e));
  }
  return edges;
}

LambdaSample sample_lambda_d(int m, int d, int kappa, std::uint64_t seed,
                             std::int64_t max_attempts) {
  const PartitionScheme scheme(m, d, kappa);
  if (max_attempts < 0) {
    const double cap = std::ceil(10.0 * std::exp(static_cast<double>(kappa) * d));
    max_attempts = cap < static_cast<double>(std::numeric_limits<std::int64_t>::max())
                       ? static_cast<std::int64_t>(cap)
                       : std::numeric_limits<std::int64_t>::max();
  }
  if (max_attempts < 1) throw std::invalid_argument("sample_lambda_d: max_attempts must be positive");

  Rng rng(seed);
  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    Configuration c = sample_configuration_with(scheme, rng);
    if (!is_unspoiled(c)) continue;
    LambdaSample out;
    out.edges = project_psi(c);
    out.configuration = std::move(c);
    out.hypergraph = KUniformHypergraph::from_edges(scheme.vertex_count(), scheme.k(), out.edges);
    out.rejections = attempt;
    return out;
  }
  throw std::runtime_error("sample_lambda_d: rejection cap exhausted without an unspoiled draw");
}

SpoiledStats collect_spoiled_stats(int m, int d, int kappa, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("collect_spoiled_stats: trials must be positive");
  const PartitionScheme scheme(m, d, kappa);
  SpoiledStats st;
  st.m = m;
  st.d = d;
  st.kappa = kappa;
  st.trials = trials;
  double sum1 = 0.0, sum2 = 0.0;
  long unspoiled = 0;
  for (long i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Configuration c = sample_configuration_with(scheme, rng);
    sum1 += c.s1;
    sum2 += c.s2;
    const std::size_t total = static_cast<std::size_t>(c.s1) + static_cast<std::size_t>(c.s2);
    if (total == 0) ++unspoiled;
    if (st.hist_total.size() <= total) st.hist_total.resize(total + 1, 0);
    ++st.hist_total[total];
  }
  st.mean_s1 = sum1 / static_cast<double>(trials);
  st.mean_s2 = sum2 / static_cast<double>(trials);
  st.unspoiled_freq = static_cast<double>(unspoiled) / static_cast<double>(trials);
  return st;
}

}  // namespace loosehc
