// Python bindings for the core operations: hypergraph sampling, Hamilton
// cycle search, configuration-model sampling, the coupling identities, the
// analytic rate-function toolkit, and the experiment runners.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>

#include "loosehc/analysis.hpp"
#include "loosehc/configuration.hpp"
#include "loosehc/coupling.hpp"
#include "loosehc/experiments.hpp"
#include "loosehc/hamilton.hpp"
#include "loosehc/hypergraph.hpp"
#include "loosehc/matching.hpp"
#include "loosehc/rng.hpp"
#include "loosehc/stats.hpp"

namespace py = pybind11;

namespace {

std::string big_to_string(const loosehc::analysis::BigInt& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  using namespace loosehc;

  mod.doc() = "Simulation and verification toolkit for loose Hamilton cycles "
              "in random uniform hypergraphs";

  // --- random hypergraphs -------------------------------------------------
  mod.def(
      "generate_hnpk",
      [](int n, int k, double p, std::uint64_t seed) {
        return generate_hnpk(n, k, p, seed).edges;
      },
      py::arg("n"), py::arg("k"), py::arg("p"), py::arg("seed"),
      "Sample the edge set of a binomial random k-uniform hypergraph.");

  mod.def(
      "has_isolated_vertex",
      [](int n, int k, const std::vector<Edge>& edges) {
        return has_isolated_vertex(KUniformHypergraph::from_edges(n, k, edges));
      },
      py::arg("n"), py::arg("k"), py::arg("edges"));

  mod.def(
      "find_loose_hamilton",
      [](int n, int k, const std::vector<Edge>& edges) -> py::object {
        const auto found = find_loose_hamilton(KUniformHypergraph::from_edges(n, k, edges));
        if (!found) return py::none();
        py::dict out;
        out["order"] = found->order;
        out["edges"] = found->edge_list;
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("edges"),
      "Return a loose Hamilton cycle as {'order', 'edges'}, or None.");

  mod.def(
      "count_loose_hamilton",
      [](int n, int k, const std::vector<Edge>& edges) {
        return count_loose_hamilton(KUniformHypergraph::from_edges(n, k, edges));
      },
      py::arg("n"), py::arg("k"), py::arg("edges"),
      "Count loose Hamilton cycles up to rotation and reflection.");

  // --- configuration model ------------------------------------------------
  mod.def(
      "sample_lambda_d",
      [](int m, int d, int kappa, std::uint64_t seed, long long max_attempts) {
        const LambdaSample sample = sample_lambda_d(m, d, kappa, seed, max_attempts);
        py::dict out;
        out["edges"] = sample.edges;
        out["rejections"] = sample.rejections;
        out["s1"] = sample.configuration.s1;
        out["s2"] = sample.configuration.s2;
        return out;
      },
      py::arg("m"), py::arg("d"), py::arg("kappa"), py::arg("seed"),
      py::arg("max_attempts") = -1,
      "Rejection-sample an unspoiled configuration and project its edges.");

  mod.def(
      "collect_spoiled_stats",
      [](int m, int d, int kappa, int trials, std::uint64_t seed) {
        const SpoiledStats stats = collect_spoiled_stats(m, d, kappa, trials, seed);
        py::dict out;
        out["mean_s1"] = stats.mean_s1;
        out["mean_s2"] = stats.mean_s2;
        out["unspoiled_freq"] = stats.unspoiled_freq;
        out["hist_total"] = stats.hist_total;
        return out;
      },
      py::arg("m"), py::arg("d"), py::arg("kappa"), py::arg("trials"), py::arg("seed"));

  mod.def("unspoiled_probability_asymptotic", &unspoiled_probability_asymptotic,
          py::arg("d"), py::arg("kappa"));

  mod.def(
      "has_restricted_cycle",
      [](const std::vector<Edge>& edges, int m, int kappa) {
        return has_restricted_cycle(edges, m, kappa);
      },
      py::arg("edges"), py::arg("m"), py::arg("kappa"),
      "Detect a loose Hamilton cycle whose edges pairwise intersect only in X.");

  // --- coupling -----------------------------------------------------------
  mod.def("split_probability", &split_probability, py::arg("p"), py::arg("parts"));
  mod.def("recompose_probability", &recompose_probability, py::arg("q"), py::arg("parts"));

  mod.def(
      "success_probability_bound",
      [](int d, int kappa, std::uint64_t alpha) {
        const SuccessBound b = success_probability_bound(d, kappa, alpha);
        py::dict out;
        out["per_round_success"] = b.per_round_success;
        out["log_failure"] = b.log_failure;
        out["log_failure_simplified"] = b.log_failure_simplified;
        out["success_lower"] = b.success_lower;
        return out;
      },
      py::arg("d"), py::arg("kappa"), py::arg("alpha"));

  // --- matchings ----------------------------------------------------------
  mod.def(
      "find_perfect_matching",
      [](const std::vector<Vertex>& s, const std::vector<Vertex>& t, int kappa,
         const std::vector<Edge>& edges, std::uint64_t budget) {
        const auto g = BipartitePatternGraph::from_edges(s, t, kappa, edges);
        const MatchingResult res = find_perfect_matching(g, budget);
        py::dict out;
        out["found"] = res.status == MatchingStatus::kFound;
        out["exhausted"] = res.status == MatchingStatus::kExhausted;
        out["nodes_expanded"] = res.nodes_expanded;
        out["matching"] = res.status == MatchingStatus::kFound
                              ? py::cast(res.matching.blocks)
                              : py::object(py::none());
        return out;
      },
      py::arg("s"), py::arg("t"), py::arg("kappa"), py::arg("edges"), py::arg("budget") = 0);

  mod.def(
      "count_perfect_matchings",
      [](const std::vector<Vertex>& s, const std::vector<Vertex>& t, int kappa,
         const std::vector<Edge>& edges, std::uint64_t cap) {
        return count_perfect_matchings(BipartitePatternGraph::from_edges(s, t, kappa, edges),
                                       cap);
      },
      py::arg("s"), py::arg("t"), py::arg("kappa"), py::arg("edges"), py::arg("cap") = 0);

  mod.def(
      "generate_gamma",
      [](int m, int k, double p, std::uint64_t seed) {
        return generate_gamma(m, k, p, seed).edges;
      },
      py::arg("m"), py::arg("k"), py::arg("p"), py::arg("seed"));

  // --- analysis -----------------------------------------------------------
  mod.def(
      "a_2m_str", [](int m, int d) { return big_to_string(analysis::a_2m(m, d)); },
      py::arg("m"), py::arg("d"));
  mod.def(
      "n_b_str", [](int m, int d, int b) { return big_to_string(analysis::N_b(m, d, b)); },
      py::arg("m"), py::arg("d"), py::arg("b"));

  mod.def("g", &analysis::g, py::arg("x"), py::arg("y"), py::arg("d"), py::arg("kappa"));
  mod.def("h", &analysis::h, py::arg("x"), py::arg("y"), py::arg("d"));
  mod.def(
      "grad_g",
      [](double x, double y, int d, int kappa) {
        const auto gr = analysis::grad_g(x, y, d, kappa);
        return py::make_tuple(gr.dx, gr.dy);
      },
      py::arg("x"), py::arg("y"), py::arg("d"), py::arg("kappa"));
  mod.def(
      "hessian_g",
      [](double x, double y, int d, int kappa) {
        const auto hs = analysis::hessian_g(x, y, d, kappa);
        py::dict out;
        out["xx"] = hs.xx;
        out["xy"] = hs.xy;
        out["yy"] = hs.yy;
        out["det"] = hs.det();
        out["negative_definite"] = hs.negative_definite();
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("d"), py::arg("kappa"));
  mod.def(
      "critical_point",
      [](int d) {
        const auto pt = analysis::critical_point(d);
        return py::make_tuple(pt.x, pt.y);
      },
      py::arg("d"));
  mod.def("hessian_det_closed_form", &analysis::hessian_det_closed_form, py::arg("d"),
          py::arg("kappa"));
  mod.def("psi_y", &analysis::psi_y, py::arg("y"), py::arg("d"), py::arg("kappa"));
  mod.def("variance_ratio_bound", &analysis::variance_ratio_bound, py::arg("d"),
          py::arg("kappa"));
  mod.def("hc_probability_bound", &analysis::hc_probability_bound, py::arg("d"),
          py::arg("kappa"));
  mod.def(
      "expected_H_asym",
      [](int m, int d, int kappa) {
        const auto eh = analysis::expected_H_asym(m, d, kappa);
        py::dict out;
        out["log_asymptotic"] = eh.log_asymptotic;
        out["log_product"] = eh.log_product;
        out["ratio"] = eh.ratio;
        return out;
      },
      py::arg("m"), py::arg("d"), py::arg("kappa"));
  mod.def(
      "variance_sum_upper",
      [](int m, int d, int kappa) {
        const auto vs = analysis::variance_sum_upper(m, d, kappa);
        py::dict out;
        out["total"] = vs.total;
        out["log_total"] = vs.log_total;
        out["argmax_a_frac"] = vs.argmax_a_frac;
        out["argmax_b_frac"] = vs.argmax_b_frac;
        out["special_share"] = vs.special_share;
        out["log_expected_h"] = vs.log_expected_h;
        return out;
      },
      py::arg("m"), py::arg("d"), py::arg("kappa"));
  mod.def(
      "verify_global_max_text",
      [](int d, int kappa, int resolution, int threads) {
        return analysis::verify_global_max(d, kappa, resolution, threads).to_text();
      },
      py::arg("d"), py::arg("kappa"), py::arg("resolution") = 400, py::arg("threads") = 1);

  // --- experiments --------------------------------------------------------
  mod.def(
      "run_experiment",
      [](const std::string& config_text, int threads) {
        ExperimentConfig cfg = ExperimentConfig::parse_string(config_text);
        cfg.validate();
        RunOptions opts;
        opts.threads = threads;
        return run_experiment(cfg, opts);
      },
      py::arg("config_text"), py::arg("threads") = 1,
      "Parse a key=value config string, run the experiment, return the CSV text.");

  mod.def("csv_strip_timestamp", &csv_strip_timestamp, py::arg("csv"));

  mod.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("stream"));
}
