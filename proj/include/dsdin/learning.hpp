#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace dsdin::opt {

struct ReturnParams {
  double beta = 0.5;
  double dt = 0.01;
  std::size_t horizon = 1000;
};

/// Left Riemann sum of exp(-beta * tau) * r(tau) over [0, horizon * dt),
/// with r(tau) read from rewards[k] for tau in [k*dt, (k+1)*dt).
double discounted_return(const std::vector<double>& rewards, const ReturnParams& params);

struct RewardOutcome {
  double probability = 1.0;
  double value = 0.0;
};

/// Finite MDP. transition[s][a][s'] are probabilities; rewards may be
/// stochastic through `outcomes[s][a]` (empty means the expected value is
/// always paid).
struct TabularMdp {
  std::size_t states = 0;
  std::size_t actions = 0;
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<std::vector<double>> reward;
  std::vector<std::vector<std::vector<RewardOutcome>>> outcomes;

  /// Throws BadFormat on shape errors, negative entries or rows not summing
  /// to 1 within 1e-12.
  void validate() const;
  double expected_reward(std::size_t s, std::size_t a) const { return reward[s][a]; }
};

/// Device group: N devices with M wear states each (M-1 = broken), joint
/// state space M^N. Action 0 idles; action i maintains device i-1, taking it
/// offline for the step and resetting it to state 0. Working devices serve
/// up to `capacity` requests each; arrivals per step are
/// Binomial(max_requests, arrival_p). Reward = requests served.
struct DeviceGroupSpec {
  std::size_t devices = 2;
  std::size_t wear_states = 3;
  double wear_p = 0.2;
  std::size_t capacity = 1;
  std::size_t max_requests = 2;
  double arrival_p = 0.5;
};

TabularMdp make_device_group(const DeviceGroupSpec& spec);

/// Text form: `states S`, `actions A`, then one line per (s, a):
///   t <s> <a> <reward> <p_0> ... <p_{S-1}>
/// or a single `device N M wear capacity max_requests arrival_p` line.
/// '#' starts a comment.
TabularMdp parse_mdp(std::string_view text);

class QTable {
 public:
  QTable() = default;
  QTable(std::size_t states, std::size_t actions, double init = 0.0)
      : states_(states), actions_(actions), q_(states * actions, init), visits_(states * actions, 0) {}

  std::size_t states() const noexcept { return states_; }
  std::size_t actions() const noexcept { return actions_; }
  double& at(std::size_t s, std::size_t a) { return q_[s * actions_ + a]; }
  double at(std::size_t s, std::size_t a) const { return q_[s * actions_ + a]; }
  std::uint64_t& visits(std::size_t s, std::size_t a) { return visits_[s * actions_ + a]; }
  double max_value(std::size_t s) const;
  /// Lowest-index maximiser.
  std::size_t greedy(std::size_t s) const;
  std::vector<std::size_t> greedy_policy() const;
  const std::vector<double>& values() const noexcept { return q_; }

  bool operator==(const QTable&) const = default;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> q_;
  std::vector<std::uint64_t> visits_;
};

/// Q(s,a) += alpha * (r + gamma * Q(s',a') - Q(s,a))
void sarsa_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s2, std::size_t a2, double alpha,
                  double gamma);
/// Q(s,a) += alpha * (r + gamma * max_b Q(s',b) - Q(s,a))
void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s2, double alpha, double gamma);

enum class Mode { OnPolicy, OffPolicy };

struct TrainConfig {
  Mode mode = Mode::OffPolicy;
  std::size_t episodes = 500;
  std::size_t steps_per_episode = 100;
  std::uint64_t seed = 1;
  double gamma = 0.5;
  double alpha = 0.1;          // used when decaying_alpha is false
  bool decaying_alpha = true;  // alpha = 1 / (1 + visits(s,a))
  double epsilon = 0.2;
  /// When positive, epsilon decays as epsilon * h / (h + step).
  double epsilon_halflife = 0.0;
};

/// Seeded epsilon-greedy rollouts from uniformly drawn start states.
QTable train(const TabularMdp& mdp, QTable q, const TrainConfig& config);

/// Bellman optimality fixed point on expected rewards. Throws
/// NoConvergence when the sup-norm change stays above `tol` after
/// `max_iterations` sweeps.
QTable value_iteration(const TabularMdp& mdp, double gamma, double tol = 1e-12, std::size_t max_iterations = 100'000);

/// Bit-stable helpers shared with tests: uniform double in [0, 1) and a
/// uniform index below n, both drawn from a 64-bit Mersenne twister.
double unit_draw(std::mt19937_64& rng);
std::size_t index_draw(std::mt19937_64& rng, std::size_t n);

}  // namespace dsdin::opt
