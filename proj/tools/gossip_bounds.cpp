// gossip-bounds: command-line front end for the gossip diffusion toolkit.
//
// Subcommands: graph-gen, diffusion, bounds-report, gossip-trace, reproduce.
// All CSV output is byte-reproducible for a fixed (flags, seed) pair.
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/gossip.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using namespace gossip;

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

struct GraphSource {
  std::string path;
  std::string topology = "complete";
  int nodes = 0;
  int attach = 2;
  std::uint64_t graph_seed = 1;

  Graph resolve() const {
    if (!path.empty()) return load_edgelist(path);
    if (nodes <= 0)
      throw std::runtime_error("no graph given: pass --graph FILE or --topology with --nodes");
    if (topology == "complete") return gen_complete(nodes);
    if (topology == "chain") return gen_chain(nodes);
    if (topology == "ba") return gen_barabasi_albert(nodes, attach, graph_seed);
    throw std::runtime_error("unknown topology: " + topology);
  }
};

void add_graph_options(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--graph", src.path, "load an edge-list file instead of generating");
  cmd->add_option("--topology", src.topology, "generator when no --graph is given")
      ->check(CLI::IsMember({"complete", "chain", "ba"}));
  cmd->add_option("--nodes", src.nodes, "node count for the generator");
  cmd->add_option("--attach", src.attach, "edges per new node (ba)");
  cmd->add_option("--graph-seed", src.graph_seed, "generator seed (ba)");
}

StartPolicy parse_start(const std::string& text) {
  if (text == "uniform") return StartPolicy::uniform();
  return StartPolicy::fixed(std::stoi(text));
}

bool is_complete_graph(const Graph& g) {
  const std::int64_t n = g.node_count();
  return g.edge_count() == n * (n - 1) / 2;
}

double graph_phi(const Graph& g) {
  return (g.node_count() <= 24 ? cheeger_exact(g) : cheeger_sweep(g)).value;
}

// ---------------------------------------------------------------------------
// diffusion / bounds-report

std::vector<BoundReport> build_reports(const Graph& g, double delta, SamplingMode mode,
                                       const std::vector<Variant>& variants) {
  std::vector<BoundReport> rows;
  const int n = g.node_count();
  if (n < 2) return rows;

  if (is_complete_graph(g)) {
    const auto alphas = complete_alphas(n);
    for (Variant v : variants)
      rows.push_back(make_report(n, alphas, delta, mode, v, complete_graph_bound(n, delta, v)));
  }

  // Cheeger and spectral routes assume edge-uniform sampling.
  const double phi = graph_phi(g);
  const double l2 = lambda2(g).lambda2;
  for (Variant v : variants) {
    const std::int64_t m_hat = effective_edge_count(g.edge_count(), v);
    rows.push_back(make_report(n, cheeger_lower_alphas(phi, m_hat, n), delta,
                               SamplingMode::EdgeUniform, v,
                               cheeger_bound(phi, g.edge_count(), n, delta, v)));
    rows.push_back(make_report(n, cheeger_lower_alphas(std::sqrt(2.0 * l2), m_hat, n), delta,
                               SamplingMode::EdgeUniform, v,
                               spectral_bound(l2, g.edge_count(), n, delta, v)));
  }
  return rows;
}

void cmd_diffusion(const GraphSource& src, std::int64_t trials, std::uint64_t seed,
                   SamplingMode mode, double delta, const std::string& start, Variant variant,
                   const fs::path& out_dir) {
  const Graph g = src.resolve();
  TrialsConfig cfg;
  cfg.trials = trials;
  cfg.base_seed = seed;
  cfg.mode = mode;
  cfg.start = parse_start(start);
  const auto t_finals = run_trials_raw(g, cfg);
  const auto stats = compute_stats(g.node_count(), t_finals, cfg.quantile_probs);

  {
    auto out = open_output(out_dir / "trials.csv");
    write_trials_csv(t_finals, out);
  }
  {
    auto out = open_output(out_dir / "stats.csv");
    write_stats_csv(stats, out);
  }
  {
    auto out = open_output(out_dir / "bounds.csv");
    out << bound_report_header() << '\n';
    const int n = g.node_count();
    if (n >= 2) {
      if (is_complete_graph(g)) {
        write_bound_report_row(make_report(n, complete_alphas(n), delta, mode, variant,
                                           complete_graph_bound(n, delta, variant)),
                               out);
      } else {
        const double phi = graph_phi(g);
        const std::int64_t m_hat = effective_edge_count(g.edge_count(), variant);
        write_bound_report_row(
            make_report(n, cheeger_lower_alphas(phi, m_hat, n), delta, SamplingMode::EdgeUniform,
                        variant, cheeger_bound(phi, g.edge_count(), n, delta, variant)),
            out);
      }
    }
  }
}

void cmd_bounds_report(const GraphSource& src, double delta, SamplingMode mode,
                       const std::optional<Variant>& only_variant, const std::string& out_path) {
  const Graph g = src.resolve();
  std::vector<Variant> variants =
      only_variant ? std::vector<Variant>{*only_variant}
                   : std::vector<Variant>{Variant::Principal, Variant::PaperLiteral};
  std::ostringstream body;
  body << bound_report_header() << '\n';
  for (const auto& row : build_reports(g, delta, mode, variants))
    write_bound_report_row(row, body);
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_output(out_path);
    out << body.str();
  }
}

// ---------------------------------------------------------------------------
// gossip-trace

std::vector<double> trace_values(const std::string& init, int n, double consensus_value,
                                 std::uint64_t seed) {
  std::vector<double> values(n, 0.0);
  if (init == "spike") {
    values[0] = static_cast<double>(n);  // average is exactly 1
  } else if (init == "consensus") {
    std::fill(values.begin(), values.end(), consensus_value);
  } else if (init == "random") {
    Rng rng(derive_stream_seed(seed, 1));
    for (auto& v : values) v = rng.next_double();
  } else {
    throw std::runtime_error("unknown init: " + init);
  }
  return values;
}

void cmd_gossip_trace(const GraphSource& src, std::int64_t steps, std::uint64_t seed,
                      SamplingMode mode, std::int64_t record_every, const std::string& init,
                      double consensus_value, bool force_matrix, const std::string& out_path) {
  const Graph g = src.resolve();
  TraceConfig cfg;
  cfg.values = trace_values(init, g.node_count(), consensus_value, seed);
  cfg.weights.assign(g.node_count(), 1.0);
  cfg.mode = mode;
  cfg.steps = steps > 0 ? steps : 50LL * g.node_count();
  cfg.seed = derive_stream_seed(seed, 0);
  cfg.record_every = record_every;
  cfg.force_matrix = force_matrix;
  const ErrorSeries series = run_trace(g, cfg);
  if (out_path.empty()) {
    write_error_series_csv(series, std::cout);
  } else {
    auto out = open_output(out_path);
    write_error_series_csv(series, out);
  }
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceConfig {
  std::string fig;
  fs::path out_dir;
  std::vector<int> sizes = {10, 20, 50, 100, 200, 500, 1000};
  std::int64_t trials = 50;
  double delta = 0.05;
  std::uint64_t seed = 42;
  SamplingMode sampling = SamplingMode::NodeUniform;
  std::string start = "uniform";
  std::int64_t steps = 0;  // fig3; 0 = 50 N
  std::int64_t record_every = 10;
  bool svg = false;
};

void reproduce_fig1(const ReproduceConfig& rc) {
  auto out = open_output(rc.out_dir / "fig1.csv");
  out << "n,trials,delta,sampling,mean,std,q95,mean_per_node,exact_expectation,exact_per_node,"
         "bound_principal,bound_principal_per_node,bound_paper_literal,bound_paper_literal_per_"
         "node\n";
  plot::Series s_mean{"empirical mean per node", {}};
  plot::Series s_exact{"exact expectation per node", {}};
  plot::Series s_principal{"bound per node (principal)", {}};
  plot::Series s_paper{"bound per node (paper-literal)", {}};
  for (int n : rc.sizes) {
    const Graph g = gen_complete(n);
    TrialsConfig cfg;
    cfg.trials = rc.trials;
    cfg.base_seed = derive_stream_seed(rc.seed, static_cast<std::uint64_t>(n));
    cfg.mode = rc.sampling;
    cfg.start = parse_start(rc.start);
    const auto stats = run_trials(g, cfg);
    const double exact = expectation_from_alphas(complete_alphas(n));
    const double b_principal = complete_graph_bound(n, rc.delta, Variant::Principal);
    const double b_paper = complete_graph_bound(n, rc.delta, Variant::PaperLiteral);
    out << n << ',' << rc.trials << ',' << csv::format_double(rc.delta) << ','
        << to_string(rc.sampling) << ',' << csv::format_double(stats.mean) << ','
        << csv::format_double(stats.stddev) << ',' << csv::format_double(stats.quantiles.at(0.95))
        << ',' << csv::format_double(stats.per_node_mean) << ',' << csv::format_double(exact)
        << ',' << csv::format_double(exact / n) << ',' << csv::format_double(b_principal) << ','
        << csv::format_double(b_principal / n) << ',' << csv::format_double(b_paper) << ','
        << csv::format_double(b_paper / n) << '\n';
    s_mean.points.emplace_back(n, stats.per_node_mean);
    s_exact.points.emplace_back(n, exact / n);
    s_principal.points.emplace_back(n, b_principal / n);
    s_paper.points.emplace_back(n, b_paper / n);
  }
  if (rc.svg) {
    auto svg = open_output(rc.out_dir / "fig1.svg");
    plot::write_line_chart(svg, "Diffusion time per node, complete graphs", "N",
                           "T_N / N", {s_mean, s_exact, s_principal, s_paper});
  }
}

void reproduce_fig2(const ReproduceConfig& rc) {
  auto out = open_output(rc.out_dir / "fig2.csv");
  out << "n,trials,delta,sampling,mean,std,q95,mean_per_node,oracle_expectation,phi,"
         "bound_directed,bound_paper_literal\n";
  plot::Series s_mean{"empirical mean", {}};
  plot::Series s_oracle{"exact expectation", {}};
  plot::Series s_directed{"Cheeger bound (directed count)", {}};
  plot::Series s_paper{"Cheeger bound (paper-literal)", {}};
  for (int n : rc.sizes) {
    const Graph g = gen_chain(n);
    TrialsConfig cfg;
    cfg.trials = rc.trials;
    cfg.base_seed = derive_stream_seed(rc.seed, static_cast<std::uint64_t>(n));
    cfg.mode = rc.sampling;
    cfg.start = parse_start(rc.start);
    const auto stats = run_trials(g, cfg);
    // the oracle follows the start policy: start average under uniform
    double oracle = 0.0;
    if (cfg.start.fixed_node) {
      oracle = oracle_chain_expectation(n, *cfg.start.fixed_node, rc.sampling);
    } else {
      const auto per_start = oracle_chain_expectations(n, rc.sampling);
      for (double e : per_start) oracle += e;
      oracle /= n;
    }
    const double phi = 2.0 / n;
    const double b_directed = cheeger_bound(phi, n - 1, n, rc.delta, Variant::Principal);
    const double b_paper = cheeger_bound(phi, n - 1, n, rc.delta, Variant::PaperLiteral);
    out << n << ',' << rc.trials << ',' << csv::format_double(rc.delta) << ','
        << to_string(rc.sampling) << ',' << csv::format_double(stats.mean) << ','
        << csv::format_double(stats.stddev) << ',' << csv::format_double(stats.quantiles.at(0.95))
        << ',' << csv::format_double(stats.per_node_mean) << ',' << csv::format_double(oracle)
        << ',' << csv::format_double(phi) << ',' << csv::format_double(b_directed) << ','
        << csv::format_double(b_paper) << '\n';
    s_mean.points.emplace_back(n, stats.mean);
    s_oracle.points.emplace_back(n, oracle);
    s_directed.points.emplace_back(n, b_directed);
    s_paper.points.emplace_back(n, b_paper);
  }
  if (rc.svg) {
    auto svg = open_output(rc.out_dir / "fig2.svg");
    plot::write_line_chart(svg, "Diffusion time, chain graphs", "N", "T_N",
                           {s_mean, s_oracle, s_directed, s_paper}, /*log_y=*/true);
  }
}

void reproduce_fig3(const ReproduceConfig& rc) {
  const int n = 100;
  const Graph g = gen_complete(n);
  TraceConfig cfg;
  cfg.values = trace_values("spike", n, 1.0, rc.seed);
  cfg.weights.assign(n, 1.0);
  cfg.mode = rc.sampling;
  cfg.steps = rc.steps > 0 ? rc.steps : 50LL * n;
  cfg.seed = derive_stream_seed(rc.seed, 0);
  cfg.record_every = rc.record_every;
  const ErrorSeries series = run_trace(g, cfg);
  {
    auto out = open_output(rc.out_dir / "fig3.csv");
    write_error_series_csv(series, out);
  }
  if (rc.svg) {
    plot::Series s_err{"error", {}}, s_b{"B(t)", {}}, s_thm{"theorem bound", {}};
    for (const auto& r : series.records) {
      if (r.error) s_err.points.emplace_back(static_cast<double>(r.t), *r.error);
      if (r.bound_b) s_b.points.emplace_back(static_cast<double>(r.t), *r.bound_b);
      if (r.bound_theorem)
        s_thm.points.emplace_back(static_cast<double>(r.t), *r.bound_theorem);
    }
    auto svg = open_output(rc.out_dir / "fig3.svg");
    plot::write_line_chart(svg, "Averaging error and bounds, complete graph N=100", "t",
                           "L2 error", {s_err, s_b, s_thm}, /*log_y=*/true);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous push-only gossip: simulation and diffusion-time bounds"};
  app.require_subcommand(1);

  // graph-gen
  auto* gen = app.add_subcommand("graph-gen", "generate a graph and write its edge list");
  std::string gen_kind;
  int gen_nodes = 0;
  int gen_attach = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("kind", gen_kind, "complete | chain | ba")
      ->required()
      ->check(CLI::IsMember({"complete", "chain", "ba"}));
  gen->add_option("--nodes", gen_nodes, "node count")->required();
  gen->add_option("--attach", gen_attach, "edges per new node (ba)");
  gen->add_option("--seed", gen_seed, "generator seed (ba)");
  gen->add_option("--out", gen_out, "output file (stdout when omitted)");
  gen->callback([&] {
    Graph g = gen_kind == "complete" ? gen_complete(gen_nodes)
              : gen_kind == "chain"  ? gen_chain(gen_nodes)
                                     : gen_barabasi_albert(gen_nodes, gen_attach, gen_seed);
    if (gen_out.empty()) {
      save_edgelist(g, std::cout);
    } else {
      auto out = open_output(gen_out);
      save_edgelist(g, out);
    }
  });

  // diffusion
  auto* diff = app.add_subcommand("diffusion", "Monte Carlo diffusion times plus bound report");
  GraphSource diff_src;
  add_graph_options(diff, diff_src);
  std::int64_t diff_trials = 50;
  std::uint64_t diff_seed = 42;
  std::string diff_sampling = "node-uniform";
  double diff_delta = 0.05;
  std::string diff_start = "uniform";
  std::string diff_variant = "principal";
  std::string diff_out;
  diff->add_option("--trials", diff_trials, "number of trials");
  diff->add_option("--seed", diff_seed, "base seed");
  diff->add_option("--sampling", diff_sampling)->check(CLI::IsMember({"node-uniform", "edge-uniform"}));
  diff->add_option("--delta", diff_delta, "failure probability for bounds");
  diff->add_option("--start", diff_start, "start node id, or 'uniform'");
  diff->add_option("--variant", diff_variant)->check(CLI::IsMember({"principal", "paper-literal"}));
  diff->add_option("--out", diff_out, "output directory")->required();
  diff->callback([&] {
    cmd_diffusion(diff_src, diff_trials, diff_seed, parse_sampling_mode(diff_sampling), diff_delta,
                  diff_start, parse_variant(diff_variant), diff_out);
  });

  // bounds-report
  auto* rep = app.add_subcommand("bounds-report", "analytic bound report for a graph");
  GraphSource rep_src;
  add_graph_options(rep, rep_src);
  double rep_delta = 0.05;
  std::string rep_sampling = "node-uniform";
  std::string rep_variant;
  std::string rep_out;
  rep->add_option("--delta", rep_delta, "failure probability");
  rep->add_option("--sampling", rep_sampling)->check(CLI::IsMember({"node-uniform", "edge-uniform"}));
  rep->add_option("--variant", rep_variant, "restrict to one variant")
      ->check(CLI::IsMember({"principal", "paper-literal"}));
  rep->add_option("--out", rep_out, "output file (stdout when omitted)");
  rep->callback([&] {
    std::optional<Variant> only;
    if (!rep_variant.empty()) only = parse_variant(rep_variant);
    cmd_bounds_report(rep_src, rep_delta, parse_sampling_mode(rep_sampling), only, rep_out);
  });

  // gossip-trace
  auto* trace = app.add_subcommand("gossip-trace", "averaging trace with error and bounds");
  GraphSource trace_src;
  add_graph_options(trace, trace_src);
  std::int64_t trace_steps = 0;
  std::uint64_t trace_seed = 42;
  std::string trace_sampling = "node-uniform";
  std::int64_t trace_record = 10;
  std::string trace_init = "spike";
  double trace_value = 1.0;
  bool trace_force = false;
  std::string trace_out;
  trace->add_option("--steps", trace_steps, "message count (default 50 N)");
  trace->add_option("--seed", trace_seed, "event stream seed");
  trace->add_option("--sampling", trace_sampling)->check(CLI::IsMember({"node-uniform", "edge-uniform"}));
  trace->add_option("--record-every", trace_record, "record period in steps");
  trace->add_option("--init", trace_init, "spike | consensus | random")
      ->check(CLI::IsMember({"spike", "consensus", "random"}));
  trace->add_option("--consensus-value", trace_value, "value for --init consensus");
  trace->add_flag("--force-matrix", trace_force, "track the product matrix past the size guard");
  trace->add_option("--out", trace_out, "output file (stdout when omitted)");
  trace->callback([&] {
    cmd_gossip_trace(trace_src, trace_steps, trace_seed, parse_sampling_mode(trace_sampling),
                     trace_record, trace_init, trace_value, trace_force, trace_out);
  });

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "canned experiments fig1 | fig2 | fig3");
  ReproduceConfig rc;
  std::string repro_sampling = "node-uniform";
  std::string repro_out;
  repro->add_option("--fig", rc.fig, "fig1 | fig2 | fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  repro->add_option("--out", repro_out, "output directory")->required();
  repro->add_option("--sizes", rc.sizes, "size grid for fig1/fig2");
  repro->add_option("--trials", rc.trials, "trials per size");
  repro->add_option("--delta", rc.delta, "failure probability for bounds");
  repro->add_option("--seed", rc.seed, "base seed");
  repro->add_option("--sampling", repro_sampling)->check(CLI::IsMember({"node-uniform", "edge-uniform"}));
  repro->add_option("--start", rc.start, "start node id, or 'uniform' (fig1/fig2)");
  repro->add_option("--steps", rc.steps, "fig3 step count (default 50 N)");
  repro->add_option("--record-every", rc.record_every, "fig3 record period");
  repro->add_flag("--svg", rc.svg, "also write SVG plots");
  repro->callback([&] {
    rc.out_dir = repro_out;
    rc.sampling = parse_sampling_mode(repro_sampling);
    if (rc.fig == "fig1") {
      reproduce_fig1(rc);
    } else if (rc.fig == "fig2") {
      reproduce_fig2(rc);
    } else {
      reproduce_fig3(rc);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
