#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace smdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a model or policy file fails validation.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite-horizon MDP instance whose transitions are observed one action at
// a time within each decision epoch.
//
// Conventions used throughout the library:
//   - n states, m actions per state; action k is also "phase" k, the sub-step
//     of an epoch at which the realized transition of action k is observed.
//   - N reward stages, hence N-1 decision epochs. Epochs are 0-based in code;
//     file formats and reports use 1-based indices.
//   - kernel(t, i)(j, k) is the probability of landing in state j when action
//     k is taken from state i at epoch t. Each column is a distribution over
//     destination states.
struct ModelSpec {
  int n = 0;  // number of states
  int m = 0;  // number of actions / phases per state
  int N = 0;  // number of reward stages (N - 1 decision epochs)

  // kernels[t][i] is the n x m kernel for state i at epoch t. Time-invariant
  // models store a single epoch block (kernels.size() == 1) shared by all t.
  std::vector<std::vector<Matrix>> kernels;

  std::vector<Matrix> stage_rewards;  // stage_rewards[t](i, k), t = 0..N-2
  Vector terminal_rewards;            // indexed by state
  Vector initial_dist;                // distribution over the n states
  double gamma = 1.0;                 // in (0, 1]; folded into rewards at load

  bool time_invariant() const { return kernels.size() == 1; }
  int num_epochs() const { return N - 1; }

  const Matrix& kernel(int t, int i) const {
    return kernels[time_invariant() ? 0 : static_cast<std::size_t>(t)]
                  [static_cast<std::size_t>(i)];
  }
};

// Acceptance probabilities of a sequential policy. accept[t][i](j, k) is the
// probability of accepting an observed transition to state j at phase k, from
// state i at epoch t. The last phase is forced: column m-1 is all ones.
struct SequentialPolicy {
  std::vector<std::vector<Matrix>> accept;

  int num_epochs() const { return static_cast<int>(accept.size()); }
};

// Per-epoch, per-state distribution over actions (the baseline model).
struct StandardPolicy {
  std::vector<Matrix> probs;  // probs[t](i, k)

  int num_epochs() const { return static_cast<int>(probs.size()); }
};

// Optimal value vectors V_t for t = 1..N (stored 0-based; values[N-1] is the
// terminal stage and equals the terminal rewards).
struct ValueTable {
  std::vector<Vector> values;
};

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Checks the ModelSpec invariants (stochastic kernel columns, stochastic
// initial distribution, finite rewards, consistent dimensions). Reports every
// violation with 1-based indices; never throws.
ValidationReport validate_model(const ModelSpec& spec);

// Scales stage rewards by gamma^t and terminal rewards by gamma^(N-1), then
// sets gamma to 1. Solvers and the simulator assume this has been applied;
// the model loader applies it automatically.
ModelSpec apply_discount(ModelSpec spec);

namespace detail {
inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}
}  // namespace detail

// Probability that the phase-k candidate transition is accepted, given that
// phases before k were rejected: the inner product of kernel column k with
// acceptance column k.
template <class DerivedG, class DerivedP>
double accept_prob(const Eigen::MatrixBase<DerivedG>& kernel,
                   const Eigen::MatrixBase<DerivedP>& accept, Index k) {
  detail::require(kernel.rows() == accept.rows() && kernel.cols() == accept.cols(),
                  "accept_prob: kernel/acceptance shape mismatch");
  detail::require(k >= 0 && k < kernel.cols(), "accept_prob: phase out of range");
  return kernel.col(k).dot(accept.col(k));
}

// Probability of ultimately taking each action within one epoch: action k is
// taken when phases before k reject and phase k accepts. Sums to 1 because
// the last phase is forced.
template <class DerivedG, class DerivedP>
Vector action_choice_probs(const Eigen::MatrixBase<DerivedG>& kernel,
                           const Eigen::MatrixBase<DerivedP>& accept) {
  detail::require(kernel.rows() == accept.rows() && kernel.cols() == accept.cols(),
                  "action_choice_probs: kernel/acceptance shape mismatch");
  const Index m = kernel.cols();
  Vector probs(m);
  double reach = 1.0;  // probability that phases 0..k-1 all rejected
  for (Index k = 0; k < m; ++k) {
    const double q = kernel.col(k).dot(accept.col(k));
    probs[k] = reach * q;
    reach *= 1.0 - q;
  }
  return probs;
}

// One column of the induced state-transition matrix: the probability of
// landing in each destination state when the epoch plays out under the given
// acceptance matrix. Column-stochastic by construction.
template <class DerivedG, class DerivedP>
Vector transition_column(const Eigen::MatrixBase<DerivedG>& kernel,
                         const Eigen::MatrixBase<DerivedP>& accept) {
  detail::require(kernel.rows() == accept.rows() && kernel.cols() == accept.cols(),
                  "transition_column: kernel/acceptance shape mismatch");
  const Index m = kernel.cols();
  Vector column = Vector::Zero(kernel.rows());
  double reach = 1.0;
  for (Index k = 0; k < m; ++k) {
    column += reach * kernel.col(k).cwiseProduct(accept.col(k));
    reach *= 1.0 - kernel.col(k).dot(accept.col(k));
  }
  return column;
}

// Advances a state density by one epoch: x' = M x. Rejects inputs that are
// not stochastic within 1e-9.
template <class DerivedX, class DerivedM>
Vector propagate(const Eigen::MatrixBase<DerivedX>& density,
                 const Eigen::MatrixBase<DerivedM>& transition) {
  detail::require(transition.rows() == transition.cols() &&
                      density.size() == transition.rows(),
                  "propagate: dimension mismatch");
  detail::require(density.minCoeff() >= -1e-9 &&
                      std::abs(density.sum() - 1.0) <= 1e-9,
                  "propagate: density is not a distribution");
  for (Index i = 0; i < transition.cols(); ++i) {
    detail::require(transition.col(i).minCoeff() >= -1e-9 &&
                        std::abs(transition.col(i).sum() - 1.0) <= 1e-9,
                    "propagate: matrix is not column-stochastic");
  }
  return transition * density;
}

struct PolicyEvaluation {
  double value = 0.0;
  std::vector<Vector> densities;  // state density at each stage, 0..N-1
};

// Exact expected total reward of a sequential policy: the sum over stages of
// density-weighted expected stage rewards, plus the terminal term.
PolicyEvaluation evaluate_policy(const ModelSpec& spec,
                                 const SequentialPolicy& policy);

// Embeds a deterministic standard policy into the sequential model: when
// action k* is prescribed, phases before k* reject everything and phase k*
// onward accepts everything, so the observed transitions are ignored.
// Randomized standard policies are rejected.
SequentialPolicy embed_standard(const StandardPolicy& policy);

}  // namespace smdp
