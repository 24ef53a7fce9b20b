#include "clyap/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "clyap/error.hpp"
#include "clyap/estimator.hpp"
#include "clyap/io.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/parallel.hpp"
#include "clyap/sampler.hpp"

namespace clyap {

using nlohmann::json;

void StudyConfig::validate() const {
  if (d_list.empty() || n_list.empty() || gamma_list.empty() || rho_list.empty()) {
    throw InvalidArgument("study grids must be nonempty");
  }
  if (replications < 1) throw InvalidArgument("replications must be >= 1");
  for (int d : d_list) {
    if (d < 2) throw InvalidArgument("study dimension must be >= 2");
    for (double rho : rho_list) DriftSpec{d, gamma_list.front(), rho}.validate();
  }
  for (int n : n_list) {
    if (n < 2) throw InvalidArgument("sample sizes must be >= 2");
  }
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  beta_raw_moment(mu, nu, 1);
  estimator_orders(orders);
  if (r < 3) throw InvalidArgument("r must be >= 3");
  if (omega_sample_size < 2) throw InvalidArgument("omega_sample_size must be >= 2");
  if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) throw InvalidArgument("trunc_tol must lie in (0, 1)");
}

StudyConfig StudyConfig::full_grid() {
  StudyConfig c;
  c.d_list = {3, 6, 12};
  c.gamma_list = {5.0, 10.0, 15.0};
  c.rho_list = {0.2, 0.8};
  return c;
}

namespace {

template <class T>
std::vector<T> scalar_or_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

StudyConfig StudyConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("study config must be a JSON object");
  StudyConfig c;
  static const std::set<std::string> known{"d",      "n",     "n_list",       "gamma",      "gamma_list",
                                           "rho",    "rho_list", "lambda",    "mu",         "nu",
                                           "replications", "N", "seed",       "orders",     "r",
                                           "output_dir", "omega_sample_size", "trunc_tol", "svg", "threads"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) throw InvalidArgument("unknown study config key '" + key + "'");
      if (key == "d") c.d_list = scalar_or_list<int>(value);
      else if (key == "n" || key == "n_list") c.n_list = scalar_or_list<int>(value);
      else if (key == "gamma" || key == "gamma_list") c.gamma_list = scalar_or_list<double>(value);
      else if (key == "rho" || key == "rho_list") c.rho_list = scalar_or_list<double>(value);
      else if (key == "lambda") c.lambda = value.get<double>();
      else if (key == "mu") c.mu = value.get<double>();
      else if (key == "nu") c.nu = value.get<double>();
      else if (key == "replications" || key == "N") c.replications = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "orders") c.orders = value.get<std::vector<int>>();
      else if (key == "r") c.r = value.get<int>();
      else if (key == "output_dir") c.output_dir = value.get<std::string>();
      else if (key == "omega_sample_size") c.omega_sample_size = value.get<int>();
      else if (key == "trunc_tol") c.trunc_tol = value.get<double>();
      else if (key == "svg") c.svg = value.get<bool>();
      else if (key == "threads") c.threads = value.get<unsigned>();
    }
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed study config: ") + ex.what());
  }
  c.validate();
  return c;
}

json StudyConfig::to_json() const {
  return {{"d", d_list},       {"n", n_list},
          {"gamma", gamma_list}, {"rho", rho_list},
          {"lambda", lambda},  {"mu", mu},
          {"nu", nu},          {"replications", replications},
          {"seed", seed},      {"orders", orders},
          {"r", r},            {"output_dir", output_dir},
          {"omega_sample_size", omega_sample_size}, {"trunc_tol", trunc_tol},
          {"svg", svg},        {"threads", threads}};
}

namespace {

struct Model {
  int d = 0;
  double gamma = 0.0;
  double rho = 0.0;
  Eigen::MatrixXd m;
  Eigen::MatrixXd m_unit;
  LevySpec levy;
  double asymptotic_rmse = 0.0;
};

Model prepare_model(const StudyConfig& cfg, int d, double gamma, double rho, std::uint64_t seed,
                    unsigned threads) {
  Model model{d, gamma, rho, {}, {}, LevySpec::uniform_beta(d, cfg.lambda, cfg.mu, cfg.nu), 0.0};
  model.m = construct_M({d, gamma, rho});
  const Eigen::MatrixXd& m = model.m;
  model.m_unit = m / m.norm();

  const auto orders = estimator_orders(cfg.orders);
  std::vector<SymmetricTensor> population;
  for (int k : orders) {
    population.push_back(solve_lyapunov(m, SymmetricTensor::diagonal(k, model.levy.cumulant_diagonal(k))));
  }
  const auto sys = drift_system(population);
  const auto aux = sample_steady_state(m, model.levy, cfg.omega_sample_size, seed, cfg.trunc_tol, threads);
  const auto omega = estimate_omega(aux, orders);
  model.asymptotic_rmse = std::sqrt(std::max(0.0, asymptotic_covariance(m, sys, omega, orders).total_variance));
  return model;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg, const StudyProgress& progress) {
  cfg.validate();
  const unsigned threads = cfg.threads == 0 ? default_threads() : cfg.threads;
  const auto orders = estimator_orders(cfg.orders);

  std::vector<Model> models;
  for (int d : cfg.d_list) {
    for (double gamma : cfg.gamma_list) {
      for (double rho : cfg.rho_list) {
        const auto index = static_cast<std::uint64_t>(models.size());
        if (progress) {
          std::ostringstream msg;
          msg << "model d=" << d << " gamma=" << gamma << " rho=" << rho << ": asymptotic covariance from "
              << cfg.omega_sample_size << " draws";
          progress(msg.str());
        }
        models.push_back(prepare_model(cfg, d, gamma, rho, mix_seed(mix_seed(cfg.seed, index), 0xA5A5), threads));
      }
    }
  }

  const std::size_t n_count = cfg.n_list.size();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t total = models.size() * n_count * reps;
  StudyResult result;
  result.estimates.resize(total);
  if (progress) progress("running " + std::to_string(total) + " replications");

  parallel_for(
      total,
      [&](std::size_t task) {
        const std::size_t s = task / (n_count * reps);
        const std::size_t ni = (task / reps) % n_count;
        const std::size_t l = task % reps;
        const Model& model = models[s];
        ReplicationRecord& rec = result.estimates[task];
        rec.d = model.d;
        rec.gamma = model.gamma;
        rec.rho = model.rho;
        rec.n = cfg.n_list[ni];
        rec.replication = static_cast<int>(l) + 1;
        rec.seed = mix_seed(mix_seed(mix_seed(cfg.seed, s), ni + 1), l);
        const auto sample = sample_steady_state(model.m, model.levy, rec.n, rec.seed, cfg.trunc_tol, 1);
        try {
          const auto est = estimate_drift(sample, orders);
          rec.m_hat = est.m_hat;
          rec.sigma_min = est.sigma_min;
          rec.gap = est.gap;
          rec.stable = est.stable;
          rec.squared_error = (est.m_hat - model.m_unit).squaredNorm();
          rec.cos_angle = (est.m_hat.array() * model.m_unit.array()).sum();
        } catch (const DegenerateSpectrum&) {
          rec.failed = true;
          rec.m_hat = Eigen::MatrixXd::Constant(model.d, model.d, std::nan(""));
        }
      },
      threads);

  for (std::size_t s = 0; s < models.size(); ++s) {
    const Model& model = models[s];
    for (std::size_t ni = 0; ni < n_count; ++ni) {
      StudyRecord rec;
      rec.d = model.d;
      rec.gamma = model.gamma;
      rec.rho = model.rho;
      rec.n = cfg.n_list[ni];
      rec.asymptotic_rmse = model.asymptotic_rmse;
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(model.d, model.d);
      std::vector<const ReplicationRecord*> ok;
      for (std::size_t l = 0; l < reps; ++l) {
        const auto& e = result.estimates[(s * n_count + ni) * reps + l];
        if (e.failed) {
          ++rec.failures;
          continue;
        }
        ok.push_back(&e);
        mean += e.m_hat;
        rec.mse += e.squared_error;
        rec.mean_sigma_min += e.sigma_min;
        rec.mean_gap += e.gap;
        if (!e.stable) ++rec.unstable_estimates;
      }
      rec.replications = static_cast<int>(ok.size());
      if (!ok.empty()) {
        const double cnt = static_cast<double>(ok.size());
        mean /= cnt;
        rec.mse /= cnt;
        rec.mean_sigma_min /= cnt;
        rec.mean_gap /= cnt;
        for (const auto* e : ok) rec.total_variance_term += (e->m_hat - mean).squaredNorm();
        rec.total_variance_term /= cnt;
        rec.total_squared_bias = (mean - model.m_unit).squaredNorm();
        const double root_n = std::sqrt(static_cast<double>(rec.n));
        rec.scaled_rmse = root_n * std::sqrt(rec.mse);
        rec.scaled_bias = root_n * std::sqrt(rec.total_squared_bias);
      }
      result.records.push_back(rec);
    }
  }
  return result;
}

std::string summary_csv_header() {
  return "d,gamma,rho,n,replications,failures,mse,total_variance_term,total_squared_bias,"
         "scaled_rmse,scaled_bias,asymptotic_rmse,mean_sigma_min,mean_gap,unstable_estimates";
}

std::string estimates_csv_header() {
  return "d,gamma,rho,n,replication,seed,failed,sigma_min,gap,stable,squared_error,cos_angle,m_hat";
}

namespace {

using io::format_double;

void write_svg(const StudyResult& result, const std::filesystem::path& path) {
  const double width = 720.0;
  const double height = 440.0;
  const double left = 70.0;
  const double right = 200.0;
  const double top = 30.0;
  const double bottom = 50.0;
  double xmin = 1e300, xmax = -1e300, ymax = 0.0;
  for (const auto& r : result.records) {
    xmin = std::min(xmin, std::log2(static_cast<double>(r.n)));
    xmax = std::max(xmax, std::log2(static_cast<double>(r.n)));
    ymax = std::max({ymax, r.scaled_rmse, r.scaled_bias, r.asymptotic_rmse});
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.1;
  const auto px = [&](double n) { return left + (std::log2(n) - xmin) / (xmax - xmin) * (width - left - right); };
  const auto py = [&](double y) { return height - bottom - y / ymax * (height - top - bottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  std::set<int> ns;
  for (const auto& r : result.records) ns.insert(r.n);
  for (int n : ns) {
    svg << "<text x=\"" << px(n) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << n
        << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = ymax * t / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << format_double(std::round(y * 100) / 100)
        << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">n (log scale)</text>\n";

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::size_t series = 0;
  double legend_y = top;
  for (std::size_t i = 0; i < result.records.size();) {
    std::size_t j = i;
    while (j < result.records.size() && result.records[j].d == result.records[i].d &&
           result.records[j].gamma == result.records[i].gamma && result.records[j].rho == result.records[i].rho) {
      ++j;
    }
    const char* color = colors[series % 6];
    std::ostringstream rmse, bias;
    for (std::size_t k = i; k < j; ++k) {
      const auto& r = result.records[k];
      rmse << px(r.n) << ',' << py(r.scaled_rmse) << ' ';
      bias << px(r.n) << ',' << py(r.scaled_bias) << ' ';
    }
    const auto& first = result.records[i];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << rmse.str() << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-dasharray=\"5,4\" points=\"" << bias.str()
        << "\"/>\n";
    svg << "<line x1=\"" << px(result.records[i].n) << "\" y1=\"" << py(first.asymptotic_rmse) << "\" x2=\""
        << px(result.records[j - 1].n) << "\" y2=\"" << py(first.asymptotic_rmse) << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"1,3\"/>\n";
    svg << "<text x=\"" << width - right + 10 << "\" y=\"" << legend_y + 12 << "\" fill=\"" << color << "\">d="
        << first.d << " gamma=" << first.gamma << " rho=" << first.rho << "</text>\n";
    legend_y += 16;
    ++series;
    i = j;
  }
  svg << "<text x=\"" << width - right + 10 << "\" y=\"" << legend_y + 20
      << "\">solid: scaled RMSE</text>\n<text x=\"" << width - right + 10 << "\" y=\"" << legend_y + 34
      << "\">dashed: scaled bias</text>\n<text x=\"" << width - right + 10 << "\" y=\"" << legend_y + 48
      << "\">dotted: asymptotic</text>\n";
  svg << "</svg>\n";
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << svg.str();
}

}  // namespace

void write_study_outputs(const StudyResult& result, const StudyConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / kSummaryCsv);
    if (!out) throw InvalidArgument("cannot write " + (dir / kSummaryCsv).string());
    out << summary_csv_header() << '\n';
    for (const auto& r : result.records) {
      out << r.d << ',' << format_double(r.gamma) << ',' << format_double(r.rho) << ',' << r.n << ','
          << r.replications << ',' << r.failures << ',' << format_double(r.mse) << ','
          << format_double(r.total_variance_term) << ',' << format_double(r.total_squared_bias) << ','
          << format_double(r.scaled_rmse) << ',' << format_double(r.scaled_bias) << ','
          << format_double(r.asymptotic_rmse) << ',' << format_double(r.mean_sigma_min) << ','
          << format_double(r.mean_gap) << ',' << r.unstable_estimates << '\n';
    }
  }
  {
    std::ofstream out(dir / kEstimatesCsv);
    if (!out) throw InvalidArgument("cannot write " + (dir / kEstimatesCsv).string());
    out << estimates_csv_header() << '\n';
    for (const auto& e : result.estimates) {
      std::string m;
      for (Eigen::Index i = 0; i < e.m_hat.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.m_hat.cols(); ++j) {
          if (!m.empty()) m += ';';
          m += format_double(e.m_hat(i, j));
        }
      }
      out << e.d << ',' << format_double(e.gamma) << ',' << format_double(e.rho) << ',' << e.n << ','
          << e.replication << ',' << e.seed << ',' << (e.failed ? 1 : 0) << ',' << format_double(e.sigma_min)
          << ',' << format_double(e.gap) << ',' << (e.stable ? 1 : 0) << ',' << format_double(e.squared_error)
          << ',' << format_double(e.cos_angle) << ',' << m << '\n';
    }
  }
  if (config.svg) write_svg(result, dir / kPlotSvg);
}

}  // namespace clyap
