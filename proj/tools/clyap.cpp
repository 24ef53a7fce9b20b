#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "clyap/coeff.hpp"
#include "clyap/cumulants.hpp"
#include "clyap/error.hpp"
#include "clyap/estimator.hpp"
#include "clyap/graph.hpp"
#include "clyap/io.hpp"
#include "clyap/sampler.hpp"
#include "clyap/study.hpp"

namespace fs = std::filesystem;
using clyap::io::json;

namespace {

constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw clyap::InvalidArgument("--orders expects a comma separated list of integers, got '" + text + "'");
    }
  }
  return out;
}

struct GraphArgs {
  std::string file;
  std::string edges;
  int d = 0;
  bool self_loops = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", file, "Graph JSON file {d, edges: [[a,b],...]} with one-based labels");
    cmd->add_option("--edges", edges, "Comma separated edge list such as \"1->2,2->3\"");
    cmd->add_option("--d", d, "Number of nodes for --edges (default: largest label)");
    cmd->add_flag("--self-loops", self_loops, "Add a self-loop at every node");
  }

  std::optional<clyap::DirectedGraph> load() const {
    if (!file.empty() && !edges.empty()) throw clyap::InvalidArgument("use either --graph or --edges, not both");
    std::optional<clyap::DirectedGraph> g;
    if (!file.empty()) {
      g = clyap::io::graph_from_json(clyap::io::read_json_file(file));
    } else if (!edges.empty()) {
      const auto list = clyap::parse_edge_list(edges);
      int n = d;
      for (const auto& e : list) n = std::max({n, e.from + 1, e.to + 1});
      if (d > 0 && n > d) throw clyap::InvalidArgument("edge label exceeds --d");
      g = clyap::DirectedGraph(n, list);
    }
    if (g && self_loops) {
      for (int i = 0; i < g->num_nodes(); ++i) g->add_edge(i, i);
    }
    return g;
  }
};

void emit(const json& j, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  fs::create_directories(out_dir);
  clyap::io::write_json_file(fs::path(out_dir) / name, j);
  std::cerr << "wrote " << (fs::path(out_dir) / name).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical continuous Lyapunov models: simulation, drift estimation and identifiability"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string orders_text = "2,3";
  std::string out_dir;
  std::string config_path;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a steady-state sample and write it as CSV");
  clyap::StudyConfig sim_cfg;
  int sim_d = 3;
  int sim_n = 1000;
  double sim_gamma = 10.0;
  double sim_rho = 0.2;
  sim->add_option("--config", config_path, "Study config JSON supplying d, gamma, rho, lambda, mu, nu");
  sim->add_option("--d", sim_d, "Dimension");
  sim->add_option("--n", sim_n, "Number of draws");
  sim->add_option("--gamma", sim_gamma, "Skew strength of the drift");
  sim->add_option("--rho", sim_rho, "Equicorrelation of the drift");
  sim->add_option("--lambda", sim_cfg.lambda, "Jump rate per coordinate");
  sim->add_option("--mu", sim_cfg.mu, "Beta jump mean");
  sim->add_option("--nu", sim_cfg.nu, "Beta jump precision");
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", out_dir, "Output directory (sample.csv, drift.json)")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the normalized drift from a sample CSV");
  std::string sample_path;
  bool skip_header = false;
  bool with_variance = false;
  GraphArgs est_graph;
  std::string cumulants_path;
  est->add_option("sample", sample_path, "Sample CSV, one observation per line");
  est->add_option("--cumulants", cumulants_path,
                  "JSON {\"tensors\": [...]} of cumulant tensors to use instead of a sample");
  est->add_option("--orders", orders_text, "Cumulant orders, e.g. 2,3 or 2,3,4");
  est->add_flag("--skip-header", skip_header, "Ignore the first line of the CSV");
  est->add_flag("--variance", with_variance, "Add the plug-in total asymptotic variance");
  est->add_option("--out", out_dir, "Write estimate.json here instead of stdout");
  est_graph.attach(est);

  // identifiability
  auto* ident = app.add_subcommand("identifiability", "Certify identifiability of a graph by rank checks");
  GraphArgs id_graph;
  int r = 3;
  int trials = 100;
  bool known_cr = false;
  id_graph.attach(ident);
  ident->add_option("--r", r, "Higher cumulant order");
  ident->add_option("--trials", trials, "Random parameter draws");
  ident->add_option("--seed", seed, "Random seed");
  ident->add_flag("--known-cr", known_cr, "Check the square system with known higher-order Levy cumulants");
  ident->add_option("--out", out_dir, "Write identifiability.json here instead of stdout");

  // study
  auto* study = app.add_subcommand("study", "Run the replication study and write CSV summaries");
  bool full_grid = false;
  bool svg = false;
  int replications = 0;
  std::optional<std::uint64_t> study_seed;
  study->add_option("--config", config_path, "Study config JSON");
  study->add_flag("--full-grid", full_grid, "Start from the full grid instead of the desk-scale default");
  study->add_option("--seed", study_seed, "Master seed (overrides the config)");
  study->add_option("--orders", orders_text, "Cumulant orders (overrides the config when given)");
  study->add_option("--replications", replications, "Replications per setting (overrides the config)");
  study->add_option("--out", out_dir, "Output directory (overrides the config)");
  study->add_flag("--svg", svg, "Also write an SVG chart of the scaled errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUser;
  }

  try {
    if (*sim) {
      if (!config_path.empty()) {
        const auto cfg = clyap::StudyConfig::from_json(clyap::io::read_json_file(config_path));
        sim_cfg = cfg;
        sim_d = cfg.d_list.front();
        sim_gamma = cfg.gamma_list.front();
        sim_rho = cfg.rho_list.front();
        if (sim->count("--seed") == 0) seed = cfg.seed;
      }
      if (sim_n < 1) throw clyap::InvalidArgument("--n must be >= 1");
      const auto m = clyap::construct_M({sim_d, sim_gamma, sim_rho});
      const auto levy = clyap::LevySpec::uniform_beta(sim_d, sim_cfg.lambda, sim_cfg.mu, sim_cfg.nu);
      const auto sample = clyap::sample_steady_state(m, levy, sim_n, seed, sim_cfg.trunc_tol);
      fs::create_directories(out_dir);
      clyap::io::write_sample_csv(fs::path(out_dir) / "sample.csv", sample);
      clyap::io::write_json_file(fs::path(out_dir) / "drift.json",
                                 {{"m", clyap::io::matrix_to_json(m)},
                                  {"m_normalized", clyap::io::matrix_to_json(m / m.norm())},
                                  {"d", sim_d},
                                  {"n", sim_n},
                                  {"gamma", sim_gamma},
                                  {"rho", sim_rho},
                                  {"lambda", sim_cfg.lambda},
                                  {"mu", sim_cfg.mu},
                                  {"nu", sim_cfg.nu},
                                  {"seed", seed}});
      std::cerr << "wrote " << sim_n << " draws to " << (fs::path(out_dir) / "sample.csv").string() << '\n';
    } else if (*est) {
      if (sample_path.empty() == cumulants_path.empty()) {
        throw clyap::InvalidArgument("estimate needs exactly one of a sample CSV or --cumulants");
      }
      const auto graph = est_graph.load();
      json j;
      if (!cumulants_path.empty()) {
        std::vector<clyap::SymmetricTensor> tensors;
        const json doc = clyap::io::read_json_file(cumulants_path);
        if (!doc.contains("tensors") || !doc["tensors"].is_array()) {
          throw clyap::InvalidArgument("cumulant file must hold a \"tensors\" array");
        }
        std::vector<int> orders;
        for (const auto& t : doc["tensors"]) {
          tensors.push_back(clyap::io::tensor_from_json(t));
          orders.push_back(tensors.back().order());
        }
        clyap::estimator_orders(orders);
        if (graph && graph->num_nodes() != tensors.front().dim()) {
          throw clyap::InvalidArgument("graph size does not match the cumulant dimension");
        }
        const auto result = clyap::estimate_drift(tensors, graph);
        j = clyap::io::estimate_to_json(result);
        j["orders"] = orders;
      } else {
        const auto orders = clyap::estimator_orders(parse_orders(orders_text));
        const auto sample = clyap::io::read_sample_csv(sample_path, skip_header);
        if (graph && graph->num_nodes() != sample.d()) {
          throw clyap::InvalidArgument("graph has " + std::to_string(graph->num_nodes()) +
                                       " nodes but the sample has " + std::to_string(sample.d()) + " columns");
        }
        const auto cv = clyap::empirical_cumulants(sample, orders);
        std::vector<clyap::SymmetricTensor> tensors;
        for (int k : orders) tensors.push_back(cv.block(k));
        const auto sys = clyap::drift_system(tensors, graph);
        const auto result = clyap::least_singular_vector(sys, sample.d());
        double total_var = -1.0;
        std::string note;
        if (with_variance) {
          try {
            const auto omega = clyap::estimate_omega(sample, orders);
            total_var = clyap::asymptotic_covariance(result.m_hat, sys, omega, orders).total_variance;
          } catch (const clyap::InvalidArgument& ex) {
            note = ex.what();
          }
        }
        j = clyap::io::estimate_to_json(result, total_var);
        j["n"] = sample.n();
        j["orders"] = orders;
        if (!note.empty()) j["variance_note"] = note;
      }
      emit(j, out_dir, "estimate.json");
    } else if (*ident) {
      const auto graph = id_graph.load();
      if (!graph) throw clyap::InvalidArgument("identifiability needs --graph or --edges");
      json j;
      if (known_cr) {
        j = clyap::io::report_to_json(clyap::known_cr_identifiability_check(*graph, r, trials, seed));
      } else {
        j = clyap::io::report_to_json(clyap::generic_identifiability_check(*graph, r, trials, seed));
      }
      emit(j, out_dir, "identifiability.json");
    } else if (*study) {
      clyap::StudyConfig cfg = full_grid ? clyap::StudyConfig::full_grid() : clyap::StudyConfig{};
      if (!config_path.empty()) {
        json j = clyap::io::read_json_file(config_path);
        if (full_grid) {
          json base = cfg.to_json();
          base.update(j);
          j = base;
        }
        cfg = clyap::StudyConfig::from_json(j);
      }
      if (study_seed) cfg.seed = *study_seed;
      if (study->count("--orders") > 0) cfg.orders = parse_orders(orders_text);
      if (replications > 0) cfg.replications = replications;
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (svg) cfg.svg = true;
      cfg.validate();
      const auto result = clyap::run_study(cfg, [](const std::string& msg) { std::cerr << msg << '\n'; });
      clyap::write_study_outputs(result, cfg);
      for (const auto& rec : result.records) {
        std::cerr << "d=" << rec.d << " gamma=" << rec.gamma << " rho=" << rec.rho << " n=" << rec.n
                  << " scaled_rmse=" << rec.scaled_rmse << " asymptotic_rmse=" << rec.asymptotic_rmse
                  << " scaled_bias=" << rec.scaled_bias << '\n';
      }
      std::cerr << "wrote results to " << cfg.output_dir << '\n';
    }
  } catch (const clyap::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const clyap::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const clyap::NonStable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const clyap::Infeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const clyap::DegenerateSpectrum& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
