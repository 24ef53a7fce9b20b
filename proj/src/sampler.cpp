#include "clyap/sampler.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "clyap/error.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/parallel.hpp"

namespace clyap {

void LevySpec::validate() const {
  if (lambdas.size() < 1) throw InvalidArgument("LevySpec: no coordinates");
  if (static_cast<std::size_t>(lambdas.size()) != jumps.size()) {
    throw InvalidArgument("LevySpec: one jump law per rate");
  }
  if ((lambdas.array() <= 0.0).any() || !lambdas.allFinite()) {
    throw InvalidArgument("LevySpec: rates must be positive");
  }
  for (const auto& j : jumps) validate_jump(j);
}

LevySpec LevySpec::uniform_beta(int d, double lambda, double mu, double nu) {
  LevySpec spec{Eigen::VectorXd::Constant(d, lambda),
                std::vector<JumpDistribution>(static_cast<std::size_t>(d), BetaJump{mu, nu})};
  spec.validate();
  return spec;
}

Eigen::VectorXd LevySpec::cumulant_diagonal(int k) const { return compound_poisson_cumulants(lambdas, jumps, k); }

void DriftSpec::validate() const {
  if (d < 2) throw InvalidArgument("DriftSpec: d must be >= 2");
  if (!std::isfinite(gamma)) throw InvalidArgument("DriftSpec: gamma must be finite");
  if (!(rho > -1.0 / (d - 1) && rho < 1.0)) {
    throw InvalidArgument("DriftSpec: rho must lie in (-1/(d-1), 1)");
  }
}

Eigen::MatrixXd construct_M(const DriftSpec& spec) {
  spec.validate();
  const int d = spec.d;
  Eigen::MatrixXd skew = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      skew(i, j) = 1.0;
      skew(j, i) = -1.0;
    }
  }
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(d, d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd m = (spec.gamma * skew - d * id) * (id - spec.eta() * ones);
  if (!is_stable(m)) throw NonStable("construct_M: resulting drift is not stable");
  return m;
}

Eigen::MatrixXd closed_form_sigma(const DriftSpec& spec, double lambda, double mu, double nu) {
  spec.validate();
  if (!(lambda > 0.0)) throw InvalidArgument("closed_form_sigma: lambda must be positive");
  beta_raw_moment(mu, nu, 1);  // domain check
  const int d = spec.d;
  const double eta = spec.eta();
  const double c = lambda * mu * (mu * nu + 1.0) / (2.0 * d * (nu + 1.0));
  return c * (Eigen::MatrixXd::Identity(d, d) + eta / (1.0 - d * eta) * Eigen::MatrixXd::Ones(d, d));
}

namespace {

double draw_jump(const JumpDistribution& law, std::mt19937_64& rng) {
  if (const auto* b = std::get_if<BetaJump>(&law)) {
    std::gamma_distribution<double> ga(b->mu * b->nu, 1.0);
    std::gamma_distribution<double> gb((1.0 - b->mu) * b->nu, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
  }
  if (const auto* t = std::get_if<TwoPointJump>(&law)) {
    std::bernoulli_distribution coin(t->p);
    return coin(rng) ? t->a : t->b;
  }
  return std::get<ConstantJump>(law).c;
}

}  // namespace

SampleBatch sample_steady_state(const Eigen::MatrixXd& m, const LevySpec& levy, int n,
                                std::uint64_t seed, double trunc_tol, unsigned threads) {
  levy.validate();
  const int d = levy.dim();
  if (m.rows() != d || m.cols() != d) throw InvalidArgument("sample_steady_state: M must be d x d");
  if (n < 1) throw InvalidArgument("sample_steady_state: n must be >= 1");
  if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) throw InvalidArgument("trunc_tol must lie in (0, 1)");
  if (!is_stable(m)) throw NonStable("sample_steady_state: M is not stable");

  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw IllConditionedEigenvectors("eigendecomposition failed");
  const Eigen::MatrixXcd q = es.eigenvectors();
  const Eigen::VectorXcd delta = es.eigenvalues();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < kMaxEigvecCond)) {
    throw IllConditionedEigenvectors("eigenvector matrix condition number " + std::to_string(cond) +
                                     " exceeds 1e8");
  }
  const Eigen::MatrixXcd qinv = q.partialPivLu().inverse();
  const double horizon = std::log(trunc_tol) / delta.real().maxCoeff();
  const double total_rate = levy.lambdas.sum();
  const std::vector<double> weights(levy.lambdas.data(), levy.lambdas.data() + d);

  SampleBatch out{Eigen::MatrixXd(n, d)};
  std::vector<double> residue(static_cast<std::size_t>(n), 0.0);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(seed, t));
        std::exponential_distribution<double> gap(total_rate);
        std::discrete_distribution<int> coord(weights.begin(), weights.end());
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(d);
        for (double s = gap(rng); s <= horizon; s += gap(rng)) {
          const int c = coord(rng);
          const double jump = draw_jump(levy.jumps[static_cast<std::size_t>(c)], rng);
          y += ((delta * s).array().exp() * qinv.col(c).array() * jump).matrix();
        }
        const Eigen::VectorXcd x = q * y;
        out.rows.row(static_cast<Eigen::Index>(t)) = x.real().transpose();
        residue[t] = x.imag().cwiseAbs().maxCoeff() / (1.0 + x.real().cwiseAbs().maxCoeff());
      },
      threads == 0 ? default_threads() : threads);
  for (double r : residue) {
    if (r > 1e-8) throw Error("sample_steady_state: imaginary residue " + std::to_string(r) + " above 1e-8");
  }
  return out;
}

TwoPointJump two_point_jump(double c2, double cr, int r) {
  if (r < 3) throw InvalidArgument("two_point_jump: r must be >= 3");
  if (!(c2 > 0.0)) throw InvalidArgument("two_point_jump: c2 must be positive");
  if (cr == 0.0 || !std::isfinite(cr)) throw InvalidArgument("two_point_jump: cr must be nonzero");
  const bool even = r % 2 == 0;
  const double bound = std::pow(c2, r / 2.0);
  if (std::abs(cr) >= bound) {
    if (even && cr < 0.0) throw Infeasible("two_point_jump: even moment cannot be negative");
    const double a = std::copysign(std::pow(std::abs(cr / c2), 1.0 / (r - 2)), cr);
    const double p = c2 * std::pow(std::abs(c2 / cr), 2.0 / (r - 2));
    return {a, 0.0, p};
  }
  if (even) {
    throw Infeasible("two_point_jump: even r requires |cr| >= c2^(r/2)");
  }
  const double root = std::sqrt(c2);
  return {root, -root, 0.5 * (1.0 + cr / bound)};
}

}  // namespace clyap
