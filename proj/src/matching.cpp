#include "loosehc/matching.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "loosehc/rng.hpp"

namespace loosehc {

namespace {

// Positional view of a pattern graph: vertices become indices into the
// sorted class vectors, edges become (2 S-positions, kappa T-positions).
struct Instance {
  int m = 0;
  int kappa = 1;
  std::vector<std::array<int, 2>> edge_s;     // per edge, sorted S-positions
  std::vector<std::vector<int>> edge_t;       // per edge, sorted T-positions
  std::vector<std::vector<int>> s_incident;   // S-position -> edge indices
  std::vector<std::vector<int>> t_incident;   // T-position -> edge indices
};

int position_of(const std::vector<Vertex>& sorted, Vertex v) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  return static_cast<int>(it - sorted.begin());
}

Instance build_instance(const BipartitePatternGraph& g, const char* who) {
  if (g.s.size() % 2 != 0 || g.t.size() != g.s.size() / 2 * static_cast<std::size_t>(g.kappa)) {
    throw std::invalid_argument(std::string(who) +
                                ": matching instance needs |S| = 2m and |T| = kappa*m");
  }
  Instance in;
  in.m = static_cast<int>(g.s.size()) / 2;
  in.kappa = g.kappa;
  in.s_incident.resize(g.s.size());
  in.t_incident.resize(g.t.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::array<int, 2> sp{-1, -1};
    std::vector<int> tp;
    int ns = 0;
    for (Vertex v : g.edges[e]) {
      if (g.in_s(v)) {
        sp[static_cast<std::size_t>(ns++)] = position_of(g.s, v);
      } else {
        tp.push_back(position_of(g.t, v));
      }
    }
    std::sort(tp.begin(), tp.end());
    in.edge_s.push_back(sp);
    in.edge_t.push_back(std::move(tp));
    in.s_incident[static_cast<std::size_t>(sp[0])].push_back(static_cast<int>(e));
    in.s_incident[static_cast<std::size_t>(sp[1])].push_back(static_cast<int>(e));
    for (int t : in.edge_t.back()) in.t_incident[static_cast<std::size_t>(t)].push_back(static_cast<int>(e));
  }
  return in;
}

// Shared backtracking state.  `fixed_order` selects the lowest unmatched
// S-position (canonical enumeration order); otherwise the most constrained.
struct Search {
  const Instance& in;
  std::uint64_t budget;  // 0 = unlimited
  bool fixed_order;
  const std::function<bool(const std::vector<int>&)>* visit;  // chosen edge indices

  std::vector<char> s_used, t_used;
  std::vector<int> chosen;
  std::vector<int> solution;  // find-mode: snapshot of the first matching
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  bool stopped = false;  // visit returned false

  explicit Search(const Instance& inst, std::uint64_t b, bool fixed,
                  const std::function<bool(const std::vector<int>&)>* v)
      : in(inst), budget(b), fixed_order(fixed), visit(v) {
    s_used.assign(in.s_incident.size(), 0);
    t_used.assign(in.t_incident.size(), 0);
  }

  bool available(int e) const {
    if (s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][0])]) return false;
    if (s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][1])]) return false;
    for (int t : in.edge_t[static_cast<std::size_t>(e)]) {
      if (t_used[static_cast<std::size_t>(t)]) return false;
    }
    return true;
  }

  // Returns the branching S-position, or -1 on a dead end (some uncovered
  // vertex has no available edge), or -2 when everything is matched.
  int select() const {
    int best = -2, best_count = -1;
    for (std::size_t s = 0; s < s_used.size(); ++s) {
      if (s_used[s]) continue;
      int count = 0;
      for (int e : in.s_incident[s]) {
        if (available(e)) ++count;
      }
      if (count == 0) return -1;
      if (best == -2 || count < best_count) {
        best = static_cast<int>(s);
        best_count = count;
      }
      if (fixed_order) return best;  // lowest unmatched S-position
    }
    if (best == -2) return -2;
    // Forward check the T side: an uncovered T-vertex with no available edge
    // cannot be covered by any extension.
    for (std::size_t t = 0; t < t_used.size(); ++t) {
      if (t_used[t]) continue;
      bool ok = false;
      for (int e : in.t_incident[t]) {
        if (available(e)) {
          ok = true;
          break;
        }
      }
      if (!ok) return -1;
    }
    return best;
  }

  void place(int e) {
    s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][0])] = 1;
    s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][1])] = 1;
    for (int t : in.edge_t[static_cast<std::size_t>(e)]) t_used[static_cast<std::size_t>(t)] = 1;
    chosen.push_back(e);
  }

  void unplace(int e) {
    chosen.pop_back();
    s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][0])] = 0;
    s_used[static_cast<std::size_t>(in.edge_s[static_cast<std::size_t>(e)][1])] = 0;
    for (int t : in.edge_t[static_cast<std::size_t>(e)]) t_used[static_cast<std::size_t>(t)] = 0;
  }

  // Returns true to keep searching, false to unwind (budget hit, first
  // matching found in find-mode, or visitor stop).
  bool run() {
    ++nodes;
    if (budget != 0 && nodes > budget) {
      budget_hit = true;
      return false;
    }
    const int s = select();
    if (s == -2) {
      if (visit != nullptr) {
        if (!(*visit)(chosen)) {
          stopped = true;
          return false;
        }
        return true;  // keep enumerating siblings
      }
      solution = chosen;  // find-mode: first matching terminates the search
      return false;
    }
    if (s == -1) return true;  // dead end, backtrack
    for (int e : in.s_incident[static_cast<std::size_t>(s)]) {
      if (!available(e)) continue;
      place(e);
      const bool keep_going = run();
      unplace(e);
      if (!keep_going) return false;
    }
    return true;
  }
};

PatternMatching materialize(const BipartitePatternGraph& g, const std::vector<int>& chosen) {
  PatternMatching pm;
  for (int e : chosen) pm.blocks.push_back(g.edges[static_cast<std::size_t>(e)]);
  std::sort(pm.blocks.begin(), pm.blocks.end());
  return pm;
}

}  // namespace

bool is_perfect_matching(const BipartitePatternGraph& g, const PatternMatching& pm) {
  if (pm.blocks.size() != g.s.size() / 2) return false;
  std::vector<Vertex> seen;
  for (const Edge& b : pm.blocks) {
    if (!g.contains(b)) return false;
    seen.insert(seen.end(), b.begin(), b.end());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  std::vector<Vertex> all(g.s);
  all.insert(all.end(), g.t.begin(), g.t.end());
  std::sort(all.begin(), all.end());
  return seen == all;
}

MatchingResult find_perfect_matching(const BipartitePatternGraph& g, std::uint64_t budget) {
  const Instance in = build_instance(g, "find_perfect_matching");
  Search search(in, budget, /*fixed=*/false, nullptr);
  const bool completed = search.run();
  MatchingResult r;
  r.nodes_expanded = search.nodes;
  if (!completed && !search.budget_hit) {
    r.status = MatchingStatus::kFound;
    r.matching = materialize(g, search.solution);
  } else if (search.budget_hit) {
    r.status = MatchingStatus::kBudgetExceeded;
  } else {
    r.status = MatchingStatus::kExhausted;
  }
  return r;
}

std::uint64_t enumerate_perfect_matchings(const BipartitePatternGraph& g,
                                          const std::function<bool(const PatternMatching&)>& visit) {
  const Instance in = build_instance(g, "enumerate_perfect_matchings");
  std::uint64_t found = 0;
  const std::function<bool(const std::vector<int>&)> raw_visit =
      [&](const std::vector<int>& chosen) {
        ++found;
        return visit(materialize(g, chosen));
      };
  Search search(in, 0, /*fixed=*/true, &raw_visit);
  search.run();
  return found;
}

std::uint64_t count_perfect_matchings(const BipartitePatternGraph& g, std::uint64_t cap) {
  std::uint64_t count = 0;
  enumerate_perfect_matchings(g, [&](const PatternMatching&) {
    ++count;
    return cap == 0 || count <= cap;
  });
  if (cap != 0 && count > cap) {
    throw std::runtime_error("count_perfect_matchings: enumeration cap exceeded");
  }
  return count;
}

PatternMatching sample_uniform_matching(const BipartitePatternGraph& g, std::uint64_t seed,
                                        std::uint64_t cap) {
  const std::uint64_t total = count_perfect_matchings(g, cap);
  if (total == 0) {
    throw std::runtime_error("sample_uniform_matching: graph has no perfect matching");
  }
  Rng rng(seed);
  const std::uint64_t target = rng.next_below(total);
  PatternMatching out;
  std::uint64_t index = 0;
  enumerate_perfect_matchings(g, [&](const PatternMatching& pm) {
    if (index++ == target) {
      out = pm;
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace loosehc
