#include "loosehc/hamilton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace loosehc {

namespace {

// Shared state for the rooted directed search.  A cycle is represented as a
// link sequence s = l_0, l_1, ..., l_{L-1} with s the minimum link; each
// undirected cycle has exactly two such representations (the two traversal
// directions), so counts are halved at the end.
struct CycleSearch {
  const KUniformHypergraph& h;
  int L;                                  // number of edges, n / (k-1)
  std::vector<std::vector<int>> incident; // vertex (0-based) -> edge indices
  std::vector<char> used;
  Vertex root = 0;
  std::uint64_t directed_count = 0;
  bool find_mode = false;
  bool found = false;
  std::vector<int> chosen_edges;
  std::vector<Vertex> links;

  explicit CycleSearch(const KUniformHypergraph& hg) : h(hg) {
    L = h.n / (h.k - 1);
    incident.resize(static_cast<std::size_t>(h.n));
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      for (Vertex v : h.edges[e]) incident[static_cast<std::size_t>(v - 1)].push_back(static_cast<int>(e));
    }
    used.assign(static_cast<std::size_t>(h.n), 0);
  }

  // Extends the chain from link v with `depth` edges already placed.
  void extend(Vertex v, int depth) {
    if (found) return;
    if (depth == L - 1) {
      // Closing edge: {v, root} plus exactly the remaining unused vertices.
      Edge candidate;
      candidate.reserve(static_cast<std::size_t>(h.k));
      candidate.push_back(v);
      candidate.push_back(root);
      for (Vertex u = 1; u <= h.n; ++u) {
        if (!used[static_cast<std::size_t>(u - 1)]) candidate.push_back(u);
      }
      std::sort(candidate.begin(), candidate.end());
      if (static_cast<int>(candidate.size()) == h.k && h.contains(candidate)) {
        ++directed_count;
        if (find_mode) {
          chosen_edges.push_back(edge_index(candidate));
          links.push_back(root);  // sentinel closing link
          found = true;
        }
      }
      return;
    }
    for (int e : incident[static_cast<std::size_t>(v - 1)]) {
      const Edge& edge = h.edges[static_cast<std::size_t>(e)];
      // All vertices besides v must be unused.
      bool ok = true;
      for (Vertex u : edge) {
        if (u != v && used[static_cast<std::size_t>(u - 1)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (Vertex w : edge) {
        if (w == v || w <= root) continue;  // next link; root stays the minimum link
        for (Vertex u : edge) {
          if (u != v) used[static_cast<std::size_t>(u - 1)] = 1;
        }
        chosen_edges.push_back(e);
        links.push_back(w);
        extend(w, depth + 1);
        if (found) return;
        links.pop_back();
        chosen_edges.pop_back();
        for (Vertex u : edge) {
          if (u != v) used[static_cast<std::size_t>(u - 1)] = 0;
        }
      }
    }
  }

  int edge_index(const Edge& e) const {
    const auto it = std::lower_bound(h.edges.begin(), h.edges.end(), e);
    return static_cast<int>(it - h.edges.begin());
  }

  void run(bool find) {
    find_mode = find;
    for (Vertex s = 1; s <= h.n && !found; ++s) {
      root = s;
      std::fill(used.begin(), used.end(), 0);
      used[static_cast<std::size_t>(s - 1)] = 1;
      chosen_edges.clear();
      links.clear();
      extend(s, 0);
    }
  }
};

void check_cycle_preconditions(const KUniformHypergraph& h, const char* who) {
  if (h.k < 3) throw std::invalid_argument(std::string(who) + ": k must be at least 3");
  if (h.n < h.k || h.n % (h.k - 1) != 0) {
    throw std::invalid_argument(std::string(who) + ": need (k-1) | n and n >= k");
  }
}

}  // namespace

std::optional<LooseCycle> find_loose_hamilton(const KUniformHypergraph& h) {
  check_cycle_preconditions(h, "find_loose_hamilton");
  CycleSearch search(h);
  search.run(/*find=*/true);
  if (!search.found) return std::nullopt;

  // Reconstruct the cyclic order: root, interior of edge 0 (ascending),
  // link 1, interior of edge 1, ..., closing with the last edge's interior.
  LooseCycle cycle;
  Vertex prev = search.root;
  for (std::size_t i = 0; i < search.chosen_edges.size(); ++i) {
    const Edge& e = search.h.edges[static_cast<std::size_t>(search.chosen_edges[i])];
    const Vertex next = search.links[i] == search.root && i + 1 == search.chosen_edges.size()
                            ? search.root
                            : search.links[i];
    cycle.edge_list.push_back(e);
    cycle.order.push_back(prev);
    for (Vertex u : e) {
      if (u != prev && u != next) cycle.order.push_back(u);  // interiors, ascending
    }
    prev = next;
  }
  return cycle;
}

std::uint64_t count_loose_hamilton(const KUniformHypergraph& h) {
  check_cycle_preconditions(h, "count_loose_hamilton");
  CycleSearch search(h);
  search.run(/*find=*/false);
  return search.directed_count / 2;  // reflection pairs directed representations
}

namespace {

struct RestrictedInstance {
  int m, kappa, y_count;
  // For each unordered X-pair {a, b} (1 <= a < b <= 2m), the list of
  // Y-blocks (as sorted 0-based Y indices) such that {a, b} + block is an edge.
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> blocks_by_pair;
};

RestrictedInstance build_restricted(const std::vector<Edge>& edges, int m, int kappa) {
  if (m < 1 || kappa < 1) {
    throw std::invalid_argument("count_restricted_H: m and kappa must be positive");
  }
  RestrictedInstance inst;
  inst.m = m;
  inst.kappa = kappa;
  inst.y_count = 2 * kappa * m;
  const int x_max = 2 * m;
  const int y_max = 2 * m + inst.y_count;
  for (const Edge& e : edges) {
    if (static_cast<int>(e.size()) != kappa + 2) {
      throw std::invalid_argument("count_restricted_H: edge arity != kappa + 2");
    }
    std::vector<int> xs;
    std::vector<int> ys;
    for (Vertex v : e) {
      if (v >= 1 && v <= x_max) {
        xs.push_back(v);
      } else if (v > x_max && v <= y_max) {
        ys.push_back(v - x_max - 1);
      } else {
        throw std::invalid_argument("count_restricted_H: label outside X and Y ranges");
      }
    }
    if (xs.size() != 2 || ys.size() != static_cast<std::size_t>(kappa)) {
      throw std::invalid_argument("count_restricted_H: edge must have 2 X-labels and kappa Y-labels");
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    if (xs[0] == xs[1] || std::adjacent_find(ys.begin(), ys.end()) != ys.end()) {
      throw std::invalid_argument("count_restricted_H: repeated label inside an edge");
    }
    auto& list = inst.blocks_by_pair[{xs[0], xs[1]}];
    if (std::find(list.begin(), list.end(), ys) == list.end()) list.push_back(ys);
  }
  return inst;
}

// Directed rooted enumeration: X-sequence starts at label 1; Y-blocks are
// assigned per step from the available pool.  Each undirected restricted
// cycle is visited exactly twice (two directions), so the count is halved.
struct RestrictedSearch {
  const RestrictedInstance& inst;
  std::vector<char> x_used;
  std::vector<char> y_used;
  std::uint64_t directed_count = 0;
  bool stop_at_first = false;
  bool found = false;

  explicit RestrictedSearch(const RestrictedInstance& in) : inst(in) {
    x_used.assign(static_cast<std::size_t>(2 * inst.m + 1), 0);
    y_used.assign(static_cast<std::size_t>(inst.y_count), 0);
  }

  const std::vector<std::vector<int>>* blocks(int a, int b) const {
    const auto it = inst.blocks_by_pair.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    return it == inst.blocks_by_pair.end() ? nullptr : &it->second;
  }

  bool block_free(const std::vector<int>& ys) const {
    for (int y : ys) {
      if (y_used[static_cast<std::size_t>(y)]) return false;
    }
    return true;
  }

  void toggle(const std::vector<int>& ys, char v) {
    for (int y : ys) y_used[static_cast<std::size_t>(y)] = v;
  }

  void extend(int current, int placed) {
    if (found) return;
    if (placed == 2 * inst.m - 1) {
      const auto* closing = blocks(current, 1);
      if (closing == nullptr) return;
      for (const auto& ys : *closing) {
        if (!block_free(ys)) continue;
        ++directed_count;
        if (stop_at_first) {
          found = true;
          return;
        }
      }
      return;
    }
    for (int next = 2; next <= 2 * inst.m; ++next) {
      if (x_used[static_cast<std::size_t>(next)]) continue;
      const auto* cand = blocks(current, next);
      if (cand == nullptr) continue;
      x_used[static_cast<std::size_t>(next)] = 1;
      for (const auto& ys : *cand) {
        if (!block_free(ys)) continue;
        toggle(ys, 1);
        extend(next, placed + 1);
        toggle(ys, 0);
        if (found) return;
      }
      x_used[static_cast<std::size_t>(next)] = 0;
    }
  }

  void run(bool first_only) {
    stop_at_first = first_only;
    x_used[1] = 1;
    extend(1, 0);
  }
};

}  // namespace

std::uint64_t count_restricted_H(const std::vector<Edge>& edges, int m, int kappa) {
  const RestrictedInstance inst = build_restricted(edges, m, kappa);
  RestrictedSearch search(inst);
  search.run(/*first_only=*/false);
  return search.directed_count / 2;
}

bool has_restricted_cycle(const std::vector<Edge>& edges, int m, int kappa) {
  const RestrictedInstance inst = build_restricted(edges, m, kappa);
  RestrictedSearch search(inst);
  search.run(/*first_only=*/true);
  return search.found;
}

OverlapTable brute_force_overlap_table(int m, int d) {
  if (m < 1 || d < 2) throw std::invalid_argument("brute_force_overlap_table: need m >= 1, d >= 2");
  const int cells = 2 * m;
  if (cells * d > 20) {
    throw std::invalid_argument("brute_force_overlap_table: instance exceeds the enumeration cap");
  }

  // Canonical cycle C0: pair l joins cell l's copy 1 to cell (l+1)'s copy 0.
  // A point belongs to C0 iff its copy index is 0 or 1.
  std::vector<std::pair<int, int>> c0(static_cast<std::size_t>(cells));
  for (int l = 0; l < cells; ++l) {
    int a = l * d + 1;
    int b = ((l + 1) % cells) * d + 0;
    c0[static_cast<std::size_t>(l)] = std::minmax(a, b);
  }
  std::sort(c0.begin(), c0.end());
  const auto is_c0_pair = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    return std::binary_search(c0.begin(), c0.end(), key);
  };
  const auto touches_c0 = [&](int p) { return p % d <= 1; };

  OverlapTable table;
  table.compatible.assign(static_cast<std::size_t>(cells) + 1, 0);
  table.raw_overlap.assign(static_cast<std::size_t>(cells) + 1, 0);

  // Enumerate directed representations: cell 0 first, every order of the
  // remaining cells, and per cell an ordered (in-copy, out-copy) pair with
  // in != out.  Reversal is a fixed-point-free involution on representations
  // (it swaps in/out everywhere), so final counts are halved.
  std::vector<int> rest(static_cast<std::size_t>(cells - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<int> seq(static_cast<std::size_t>(cells));
  std::vector<int> in_copy(static_cast<std::size_t>(cells)), out_copy(static_cast<std::size_t>(cells));

  const auto classify = [&]() {
    int overlap = 0;
    bool compatible = true;
    for (int i = 0; i < cells; ++i) {
      const int cell_a = seq[static_cast<std::size_t>(i)];
      const int cell_b = seq[static_cast<std::size_t>((i + 1) % cells)];
      const int pa = cell_a * d + out_copy[static_cast<std::size_t>(cell_a)];
      const int pb = cell_b * d + in_copy[static_cast<std::size_t>(cell_b)];
      if (is_c0_pair(pa, pb)) {
        ++overlap;
      } else if (touches_c0(pa) || touches_c0(pb)) {
        compatible = false;
      }
    }
    ++table.raw_overlap[static_cast<std::size_t>(overlap)];
    if (compatible) ++table.compatible[static_cast<std::size_t>(overlap)];
  };

  // Recursive loop over per-cell copy choices.
  const std::function<void(int)> assign_copies = [&](int i) {
    if (i == cells) {
      classify();
      return;
    }
    const int cell = seq[static_cast<std::size_t>(i)];
    for (int in = 0; in < d; ++in) {
      for (int out = 0; out < d; ++out) {
        if (in == out) continue;
        in_copy[static_cast<std::size_t>(cell)] = in;
        out_copy[static_cast<std::size_t>(cell)] = out;
        assign_copies(i + 1);
      }
    }
  };

  seq[0] = 0;
  std::sort(rest.begin(), rest.end());
  do {
    for (int i = 1; i < cells; ++i) seq[static_cast<std::size_t>(i)] = rest[static_cast<std::size_t>(i - 1)];
    assign_copies(0);
  } while (std::next_permutation(rest.begin(), rest.end()));

  for (auto& c : table.compatible) c /= 2;
  for (auto& c : table.raw_overlap) c /= 2;
  return table;
}

std::uint64_t brute_force_N_b(int m, int d, int b) {
  if (b < 0 || b > 2 * m) throw std::invalid_argument("brute_force_N_b: b out of range");
  const OverlapTable table = brute_force_overlap_table(m, d);
  return table.compatible[static_cast<std::size_t>(b)];
}

}  // namespace loosehc
