#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sadet/linalg.hpp"
#include "sadet/types.hpp"

namespace sadet::attack {
struct AttackModel;
}

namespace sadet::model {

/// Discrete-time LTI system x(k+1) = A x(k) + B u(k), y(k) = C x(k).
struct LtiSystem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd C;  // p x n

  LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c);

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }
};

/// Continuous-time model together with the sampling period used to
/// discretize it.
struct ContinuousLti {
  Eigen::MatrixXd Ac;
  Eigen::MatrixXd Bc;
  Eigen::MatrixXd Cc;
  double sample_period{0.0};  // seconds
};

/// Simulated run: states and both the clean and the observed (possibly
/// attacked) output sequences, stored column-per-sample.
struct Trajectory {
  Eigen::MatrixXd inputs;            // m x N
  Eigen::MatrixXd states;            // n x N
  Eigen::MatrixXd outputs_clean;     // p x N, C x(k)
  Eigen::MatrixXd outputs_observed;  // p x N, C x(k) + a(k)

  int length() const { return static_cast<int>(inputs.cols()); }
};

/// Zero-order-hold discretization via the augmented matrix exponential:
/// A = exp(Ac Ts), B = (integral of exp(Ac s) ds over one period) Bc.
LtiSystem discretize_zoh(const ContinuousLti& cs);

/// Roll the system forward from x0 under the given input sequence,
/// optionally injecting a sensor attack into the observed outputs. The
/// state evolution never depends on the attack.
Trajectory simulate(const LtiSystem& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs,
                    const attack::AttackModel* attack = nullptr);

/// Stacked observability matrix [C_S; C_S A; ...; C_S A^(depth-1)] for the
/// sensor rows in `sensors`. An empty set gives a 0-row matrix.
Eigen::MatrixXd extended_observability(const LtiSystem& sys, const SensorSet& sensors,
                                       int depth);

/// Lower block-triangular input-to-output map of depth q: block (i,j) is
/// C_S A^(i-j-1) B for i > j and zero otherwise.
Eigen::MatrixXd toeplitz_io(const LtiSystem& sys, const SensorSet& sensors, int depth);

/// Largest s such that the pair (A, C restricted to any complement of at
/// most s sensors) stays observable; -1 if the full system is already
/// unobservable. Exhaustive over subsets.
int sparse_observability_degree(const LtiSystem& sys,
                                const linalg::RankTolerance& tol = {});

/// Rotational three-body chain: drive motor plus two inertias coupled by
/// torsional shafts, measuring the three angular positions and the two
/// shaft twist angles.
struct ThreeInertiaParams {
  double J1{0.01}, J2{0.01}, J3{0.01};  // inertias
  double b1{0.007}, b2{0.007}, b3{0.007};  // damping
  double k1{1.37}, k2{1.37};  // torsional stiffness
  double sample_period{0.1};  // seconds
};

ContinuousLti three_inertia(const ThreeInertiaParams& params = {});

/// Benchmark input: amplitude * sin(omega * k) plus zero-mean Gaussian
/// noise, reproducible from the seed on any platform.
Eigen::MatrixXd sine_with_noise_input(int length, double amplitude, double omega,
                                      double noise_std, std::uint64_t seed);

}  // namespace sadet::model
