// Acceptance suite: one PASS/FAIL line per criterion. Pass a criterion number
// to run only that one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "clyap/coeff.hpp"
#include "clyap/cumulants.hpp"
#include "clyap/error.hpp"
#include "clyap/estimator.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/sampler.hpp"
#include "clyap/study.hpp"
#include "fixtures.hpp"

using namespace clyap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_rel(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd example_drift(double zeta) {
  Eigen::MatrixXd m(2, 2);
  m << -1.0 / (3.0 * zeta), 0.0, 1.0, -1.0 / (3.0 * zeta);
  return m;
}

Outcome example_closed_forms() {
  double worst = 0.0;
  for (double z : {0.5, 1.0, 2.0}) {
    const auto m = example_drift(z);
    const auto s = solve_lyapunov(m, SymmetricTensor::diagonal(2, Eigen::VectorXd::Ones(2)));
    const auto k = solve_lyapunov(m, SymmetricTensor::diagonal(3, Eigen::VectorXd::Ones(2)));
    const double h = 1.5;
    const double checks[][2] = {
        {s.get(MultiIndex{0, 0}), h * z},
        {s.get(MultiIndex{0, 1}), h * h * z * z},
        {s.get(MultiIndex{1, 1}), h * z + 2 * h * h * h * z * z * z},
        {k.get(MultiIndex{0, 0, 0}), z},
        {k.get(MultiIndex{0, 0, 1}), z * z},
        {k.get(MultiIndex{0, 1, 1}), 2 * z * z * z},
        {k.get(MultiIndex{1, 1, 1}), z + 6 * std::pow(z, 4)},
    };
    for (const auto& c : checks) worst = std::max(worst, std::abs(c[0] - c[1]));
  }
  std::ostringstream os;
  os << "max abs error " << worst;
  return {worst <= 1e-10, os.str()};
}

Outcome example_determinant() {
  std::vector<double> zetas;
  for (int i = 0; i < 10; ++i) zetas.push_back(0.5 + 0.2 * i);
  const auto c = interpolate_witness_determinant(DirectedGraph::complete(2), 3, zetas);
  std::vector<double> target(c.size(), 0.0);
  target[4] = 0.75;
  target[7] = 1.5;
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(c[i] - target[i]));
  std::ostringstream os;
  os << "interpolated det =";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-8) os << ' ' << (c[i] > 0 ? "+" : "") << c[i] << "*z^" << i;
  }
  os << "; target 1.5*z^7 + 0.75*z^4; max coefficient error " << worst;
  return {worst <= 1e-8, os.str()};
}

Outcome forsum_exhaustive() {
  int checked = 0;
  for (int d = 1; d <= 8; ++d) {
    for (int q = 0; q <= d - 1; ++q) {
      for (int r = 3; r <= 5; ++r) {
        if (!forsum_identity_check(d, q, r)) {
          return {false, "identity fails at d=" + std::to_string(d) + " q=" + std::to_string(q) +
                             " r=" + std::to_string(r)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " exact equalities"};
}

DirectedGraph random_polytree(int d, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (int v = 1; v < d; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    const int u = parent(rng);
    if (std::bernoulli_distribution(0.5)(rng)) {
      edges.push_back({u, v});
    } else {
      edges.push_back({v, u});
    }
  }
  // Relabel so the orientation pattern is not tied to insertion order.
  std::vector<int> perm(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& e : edges) e = {perm[static_cast<std::size_t>(e.from)], perm[static_cast<std::size_t>(e.to)]};
  return DirectedGraph::with_self_loops(d, edges);
}

Outcome trek_oracle() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> zeta(0.3, 2.0);
  double worst = 0.0;
  int cases = 0;
  for (int d = 1; d <= 5; ++d) {
    for (int t = 0; t < 50; ++t) {
      const auto g = random_polytree(d, rng);
      const double z = zeta(rng);
      for (int r : {3, 4}) {
        const auto closed = trek_closed_form(g, z, r);
        const auto solved = forward_map(trek_witness_parameters(g, z, r));
        worst = std::max({worst, max_rel(closed.sigma.vec_u(), solved.sigma.vec_u()),
                          max_rel(closed.kappa.vec_u(), solved.kappa.vec_u())});
        ++cases;
      }
    }
  }
  std::ostringstream os;
  os << cases << " cases, max rel error " << worst;
  return {worst <= 1e-9, os.str()};
}

Outcome rank_laws() {
  const int trials = 100;
  bool ok = true;
  std::ostringstream os;
  const auto report = [&](const std::string& name, const DirectedGraph& g, int r, std::uint64_t seed) {
    const auto rep = generic_identifiability_check(g, r, trials, seed);
    bool all_below = true;
    for (int rank : rep.ranks) all_below = all_below && rank <= rep.expected_rank;
    const bool good = all_below && rep.hits >= 95;
    ok = ok && good;
    os << name << ' ' << rep.hits << '/' << trials << "@" << rep.expected_rank << (all_below ? "" : "(exceeded)")
       << "; ";
  };
  report("fig1", fixtures::fig1(), 3, 1);
  report("fig2", fixtures::fig2(), 3, 2);
  for (int d = 2; d <= 4; ++d) report("K" + std::to_string(d), DirectedGraph::complete(d), 3, 10 + d);
  report("two-cycles", fixtures::two_cycles(), 3, 20);
  report("three-parts", DirectedGraph::with_self_loops(5, {{0, 1}, {1, 0}, {2, 3}}), 3, 21);
  report("fig4-left", fixtures::fig4_left(), 3, 30);
  report("fig4-right", fixtures::fig4_right(), 3, 31);
  return {ok, os.str()};
}

Outcome known_cr_graphs() {
  const std::vector<std::pair<std::string, DirectedGraph>> graphs{
      {"fig1", fixtures::fig1()},
      {"fig2", fixtures::fig2()},
      {"K2", DirectedGraph::complete(2)},
      {"K3", DirectedGraph::complete(3)},
      {"K4", DirectedGraph::complete(4)},
      {"path4", fixtures::path(4)},
      {"two-cycles", fixtures::two_cycles()},
      {"three-parts", DirectedGraph::with_self_loops(5, {{0, 1}, {1, 0}, {2, 3}})},
      {"loops-only", DirectedGraph::with_self_loops(3, {})},
  };
  bool ok = true;
  std::ostringstream os;
  for (const auto& [name, g] : graphs) {
    for (int r : {3, 4}) {
      const auto rep = known_cr_identifiability_check(g, r);
      ok = ok && rep.identifiable;
      if (!rep.identifiable) os << name << " r=" << r << " not certified; ";
    }
  }
  if (ok) os << graphs.size() << " graphs certified for r=3,4";
  return {ok, os.str()};
}

Outcome jacobian_check() {
  std::mt19937_64 rng(707);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto theta = fixtures::random_theta(DirectedGraph::complete(3), 3, rng);
    const auto pair = forward_map(theta);
    const auto a = drift_system({pair.sigma, pair.kappa}).matrix;
    Eigen::MatrixXd h(a.rows(), a.cols());
    for (auto& x : h.reshaped()) x = nd(rng);
    h /= h.norm();
    const SingularVectorJacobian jac(a);
    const double eps = 1e-6;
    const auto vec = [](const Eigen::MatrixXd& m) { return Eigen::VectorXd(m.reshaped()); };
    const Eigen::VectorXd fd = (vec(least_singular_vector(Eigen::MatrixXd(a + eps * h)).m_hat) -
                                vec(least_singular_vector(Eigen::MatrixXd(a - eps * h)).m_hat)) /
                               (2 * eps);
    const Eigen::VectorXd an = jac.apply(h);
    worst = std::max(worst, (fd - an).norm() / an.norm());
  }
  std::ostringstream os;
  os << "max rel error " << worst;
  return {worst <= 1e-5, os.str()};
}

Outcome estimator_exactness() {
  std::mt19937_64 rng(808);
  const std::vector<DirectedGraph> graphs{fixtures::fig1(), fixtures::fig2(), DirectedGraph::complete(2),
                                          DirectedGraph::complete(3), DirectedGraph::complete(4),
                                          fixtures::path(3),   fixtures::fig4_left()};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto& g = graphs[static_cast<std::size_t>(t) % graphs.size()];
    const auto theta = fixtures::random_theta(g, 3, rng);
    const auto pair = forward_map(theta);
    const auto est = estimate_drift({pair.sigma, pair.kappa});
    worst = std::max(worst, (est.m_hat - theta.m / theta.m.norm()).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max abs error " << worst;
  return {worst <= 1e-8, os.str()};
}

Outcome sampler_oracles() {
  const DriftSpec spec{3, 10.0, 0.2};
  const double lambda = 0.5, mu = 0.8, nu = 1.0;
  const auto m = construct_M(spec);
  const auto levy = LevySpec::uniform_beta(3, lambda, mu, nu);
  const int n = 100000;
  const auto s = sample_steady_state(m, levy, n, 909);

  double worst = 0.0;  // largest deviation in standard-error units
  const Eigen::VectorXd mean_truth = -m.partialPivLu().solve(levy.cumulant_diagonal(1));
  const Eigen::VectorXd mean = s.rows.colwise().mean();
  const Eigen::MatrixXd centered = s.rows.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(mean(i) - mean_truth(i)) / std::sqrt(cov(i, i) / n));

  const auto orders = std::vector<int>{2, 3};
  const auto cv = empirical_cumulants(s, orders);
  const auto omega = estimate_omega(s, orders);
  const auto sigma = closed_form_sigma(spec, lambda, mu, nu);
  const auto kappa = solve_lyapunov(m, SymmetricTensor::diagonal(3, levy.cumulant_diagonal(3)));
  const auto truth = CumulantVector::from_tensors({SymmetricTensor::from_matrix(sigma), kappa});
  for (Eigen::Index j = 0; j < cv.values.size(); ++j) {
    worst = std::max(worst, std::abs(cv.values(j) - truth.values(j)) / std::sqrt(omega(j, j) / n));
  }
  std::ostringstream os;
  os << "largest deviation " << worst << " standard errors (mean, covariance, third cumulants)";
  return {worst <= 4.0, os.str()};
}

Outcome desk_study() {
  StudyConfig cfg;
  cfg.d_list = {3};
  cfg.gamma_list = {10.0};
  cfg.rho_list = {0.2};
  cfg.n_list = {1000, 2000, 4000, 8000};
  cfg.replications = 100;
  cfg.orders = {2, 3};
  cfg.seed = 2024;
  const auto result = run_study(cfg);
  const auto& first = result.records.front();
  const auto& last = result.records.back();
  const double ratio = last.scaled_rmse / last.asymptotic_rmse;
  const bool decreasing = last.scaled_bias < first.scaled_bias;
  std::ostringstream os;
  os << "scaled bias " << first.scaled_bias << " (n=1000) -> " << last.scaled_bias << " (n=8000); scaled_rmse "
     << last.scaled_rmse << " / asymptotic " << last.asymptotic_rmse << " = " << ratio << "; failures "
     << first.failures + last.failures;
  return {decreasing && ratio >= 0.7 && ratio <= 1.3, os.str()};
}

Outcome two_point_cases() {
  double worst = 0.0;
  const auto check = [&](double c2, double cr, int r) {
    const auto j = two_point_jump(c2, cr, r);
    worst = std::max({worst, std::abs(jump_raw_moment(j, 2) - c2), std::abs(jump_raw_moment(j, r) - cr)});
  };
  check(1.0, 2.0, 3);    // |cr| >= c2^(r/2), odd r
  check(2.0, -7.0, 5);
  check(0.5, 3.0, 4);    // |cr| >= c2^(r/2), even r
  check(1.0, 0.5, 3);    // |cr| <  c2^(r/2), odd r
  check(3.0, -1.0, 5);
  bool rejected = true;
  for (const auto& [c2, cr] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 3.9}, {1.0, -2.0}}) {
    try {
      two_point_jump(c2, cr, 4);
      rejected = false;
    } catch (const Infeasible&) {
    }
  }
  std::ostringstream os;
  os << "max moment error " << worst << (rejected ? "; even-r infeasible region rejected" : "; infeasible input accepted");
  return {worst <= 1e-12 && rejected, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "example closed forms", 1.0, example_closed_forms},
      {2, "example determinant", 0.0, example_determinant},
      {3, "binomial sum identity", 1.0, forsum_exhaustive},
      {4, "trek closed form vs solver", 0.0, trek_oracle},
      {5, "rank laws", 30.0, rank_laws},
      {6, "known higher-order Levy cumulants", 0.0, known_cr_graphs},
      {7, "singular vector Jacobian", 0.0, jacobian_check},
      {8, "estimator exactness", 0.0, estimator_exactness},
      {9, "sampler oracles", 60.0, sampler_oracles},
      {10, "desk-scale study", 600.0, desk_study},
      {11, "two-point jump laws", 0.0, two_point_cases},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      out.pass = false;
      out.detail += "; exceeded time limit";
    }
    all_pass = all_pass && out.pass;
    std::printf("criterion %2d %-36s %s  %s  (%.2fs)\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
