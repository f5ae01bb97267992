#include "sadet/system.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>
#include <random>

#include "sadet/attack.hpp"

namespace sadet::model {

LtiSystem::LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw DimensionError("LtiSystem: A must be square and non-empty");
  if (B.rows() != A.rows() || B.cols() == 0)
    throw DimensionError("LtiSystem: B must be n x m with m >= 1");
  if (C.cols() != A.rows() || C.rows() == 0)
    throw DimensionError("LtiSystem: C must be p x n with p >= 1");
}

LtiSystem discretize_zoh(const ContinuousLti& cs) {
  const Eigen::Index n = cs.Ac.rows();
  const Eigen::Index m = cs.Bc.cols();
  if (cs.Ac.cols() != n || cs.Bc.rows() != n || cs.Cc.cols() != n)
    throw DimensionError("discretize_zoh: inconsistent continuous-time dimensions");
  if (!(cs.sample_period > 0.0))
    throw std::invalid_argument("discretize_zoh: sample_period must be > 0");

  // exp([Ac Bc; 0 0] * Ts) = [A B; 0 I]
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = cs.Ac * cs.sample_period;
  aug.topRightCorner(n, m) = cs.Bc * cs.sample_period;
  const Eigen::MatrixXd e = aug.exp();
  return LtiSystem(e.topLeftCorner(n, n), e.topRightCorner(n, m), cs.Cc);
}

Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs, const attack::AttackModel* atk) {
  const int n = sys.n();
  const int N = static_cast<int>(inputs.cols());
  if (x0.size() != n) throw DimensionError("simulate: x0 has wrong dimension");
  if (inputs.rows() != sys.m())
    throw DimensionError("simulate: input rows do not match the system input count");
  if (N < 1) throw DimensionError("simulate: need at least one input sample");
  if (atk) atk->validate(N);

  Trajectory traj;
  traj.inputs = inputs;
  traj.states.resize(n, N);
  traj.states.col(0) = x0;
  for (int k = 0; k + 1 < N; ++k)
    traj.states.col(k + 1) = sys.A * traj.states.col(k) + sys.B * inputs.col(k);

  traj.outputs_clean = sys.C * traj.states;
  traj.outputs_observed = traj.outputs_clean;
  if (atk) {
    for (int k = 0; k < N; ++k)
      traj.outputs_observed.col(k) += attack::eval_attack(*atk, sys, traj.states, k);
  }
  return traj;
}

Eigen::MatrixXd extended_observability(const LtiSystem& sys, const SensorSet& sensors,
                                       int depth) {
  if (depth < 1) throw std::invalid_argument("extended_observability: depth must be >= 1");
  if (sensors.ambient() != sys.p())
    throw DimensionError("extended_observability: sensor set does not match the system");
  const auto rows = sensors.row_indices();
  const int s = static_cast<int>(rows.size());
  Eigen::MatrixXd Cs(s, sys.n());
  for (int i = 0; i < s; ++i) Cs.row(i) = sys.C.row(rows[static_cast<std::size_t>(i)]);

  Eigen::MatrixXd obs(static_cast<Eigen::Index>(s) * depth, sys.n());
  Eigen::MatrixXd block = Cs;
  for (int i = 0; i < depth; ++i) {
    obs.middleRows(static_cast<Eigen::Index>(i) * s, s) = block;
    if (i + 1 < depth) block = block * sys.A;
  }
  return obs;
}

Eigen::MatrixXd toeplitz_io(const LtiSystem& sys, const SensorSet& sensors, int depth) {
  if (depth < 1) throw std::invalid_argument("toeplitz_io: depth must be >= 1");
  if (sensors.ambient() != sys.p())
    throw DimensionError("toeplitz_io: sensor set does not match the system");
  const auto rows = sensors.row_indices();
  const int s = static_cast<int>(rows.size());
  const int m = sys.m();
  Eigen::MatrixXd Cs(s, sys.n());
  for (int i = 0; i < s; ++i) Cs.row(i) = sys.C.row(rows[static_cast<std::size_t>(i)]);

  // markov[j] = Cs A^j B
  std::vector<Eigen::MatrixXd> markov(static_cast<std::size_t>(depth > 1 ? depth - 1 : 0));
  if (depth > 1) {
    Eigen::MatrixXd CsAk = Cs;
    for (int j = 0; j + 1 < depth; ++j) {
      markov[static_cast<std::size_t>(j)] = CsAk * sys.B;
      CsAk = CsAk * sys.A;
    }
  }

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s) * depth,
                                            static_cast<Eigen::Index>(m) * depth);
  for (int i = 1; i < depth; ++i)
    for (int j = 0; j < i; ++j)
      H.block(static_cast<Eigen::Index>(i) * s, static_cast<Eigen::Index>(j) * m, s, m) =
          markov[static_cast<std::size_t>(i - j - 1)];
  return H;
}

int sparse_observability_degree(const LtiSystem& sys, const linalg::RankTolerance& tol) {
  const int n = sys.n();
  const int p = sys.p();
  for (int s = 0; s <= p - 1; ++s) {
    for (const auto& gamma : subsets_up_to(p, s)) {
      if (gamma.size() != s) continue;  // smaller sets were checked at earlier s
      const Eigen::MatrixXd obs = extended_observability(sys, gamma.complement(), n);
      if (obs.rows() == 0 || linalg::numerical_rank(obs, tol) != n) return s - 1;
    }
  }
  return p - 1;
}

ContinuousLti three_inertia(const ThreeInertiaParams& prm) {
  Eigen::MatrixXd Ac(6, 6);
  Ac << 0, 1, 0, 0, 0, 0,
      -prm.k1 / prm.J1, -prm.b1 / prm.J1, prm.k1 / prm.J1, 0, 0, 0,
      0, 0, 0, 1, 0, 0,
      prm.k1 / prm.J2, 0, -(prm.k1 + prm.k2) / prm.J2, -prm.b2 / prm.J2, prm.k2 / prm.J2, 0,
      0, 0, 0, 0, 0, 1,
      0, 0, prm.k2 / prm.J3, 0, -prm.k2 / prm.J3, -prm.b3 / prm.J3;
  Eigen::MatrixXd Bc(6, 1);
  Bc << 0, 1.0 / prm.J1, 0, 0, 0, 0;
  Eigen::MatrixXd Cc(5, 6);
  Cc << 1, 0, 0, 0, 0, 0,
      0, 0, 1, 0, 0, 0,
      0, 0, 0, 0, 1, 0,
      1, 0, -1, 0, 0, 0,
      0, 0, 1, 0, -1, 0;
  return ContinuousLti{Ac, Bc, Cc, prm.sample_period};
}

namespace {

// Box-Muller on raw mt19937_64 draws; std::normal_distribution is not
// guaranteed to produce the same stream across standard libraries.
double standard_gaussian(std::mt19937_64& gen) {
  const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Eigen::MatrixXd sine_with_noise_input(int length, double amplitude, double omega,
                                      double noise_std, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("sine_with_noise_input: length must be >= 1");
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd u(1, length);
  for (int k = 0; k < length; ++k)
    u(0, k) = amplitude * std::sin(omega * k) + noise_std * standard_gaussian(gen);
  return u;
}

}  // namespace sadet::model
