#include "dsdin/learning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dsdin/error.hpp"

namespace dsdin::opt {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t index_draw(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n));
}

double discounted_return(const std::vector<double>& rewards, const ReturnParams& p) {
  if (!(p.beta > 0) || !(p.dt > 0)) throw Error(Errc::BadFormat, "beta and dt must be positive");
  if (rewards.size() < p.horizon) throw Error(Errc::BadFormat, "reward sequence shorter than the horizon");
  double sum = 0.0;
  for (std::size_t k = 0; k < p.horizon; ++k) sum += std::exp(-p.beta * static_cast<double>(k) * p.dt) * rewards[k];
  return sum * p.dt;
}

void TabularMdp::validate() const {
  if (states == 0 || actions == 0) throw Error(Errc::BadFormat, "empty MDP");
  if (transition.size() != states || reward.size() != states) throw Error(Errc::BadFormat, "MDP state count mismatch");
  if (!outcomes.empty() && outcomes.size() != states) throw Error(Errc::BadFormat, "outcome table shape");
  for (std::size_t s = 0; s < states; ++s) {
    if (transition[s].size() != actions || reward[s].size() != actions)
      throw Error(Errc::BadFormat, "MDP action count mismatch");
    for (std::size_t a = 0; a < actions; ++a) {
      const auto& row = transition[s][a];
      if (row.size() != states) throw Error(Errc::BadFormat, "transition row length");
      double total = 0.0;
      for (double p : row) {
        if (p < 0) throw Error(Errc::BadFormat, "negative probability");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::BadFormat, "transition row does not sum to 1");
      if (reward[s][a] < 0) throw Error(Errc::BadFormat, "negative reward");
    }
  }
}

namespace {

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
}

std::size_t sample_row(const std::vector<double>& row, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] <= 0) continue;
    last = i;
    acc += row[i];
    if (u < acc) return i;
  }
  return last;
}

}  // namespace

TabularMdp make_device_group(const DeviceGroupSpec& spec) {
  if (spec.devices == 0 || spec.wear_states < 2) throw Error(Errc::BadFormat, "device group needs N >= 1, M >= 2");
  std::size_t total = 1;
  for (std::size_t i = 0; i < spec.devices; ++i) {
    total *= spec.wear_states;
    if (total > 1000) throw Error(Errc::BadFormat, "joint state space above 1000");
  }
  const std::size_t m = spec.wear_states;
  const std::size_t broken = m - 1;

  TabularMdp mdp;
  mdp.states = total;
  mdp.actions = spec.devices + 1;
  mdp.transition.assign(total, std::vector<std::vector<double>>(mdp.actions, std::vector<double>(total, 0.0)));
  mdp.reward.assign(total, std::vector<double>(mdp.actions, 0.0));
  mdp.outcomes.assign(total, std::vector<std::vector<RewardOutcome>>(mdp.actions));

  std::vector<std::size_t> dev(spec.devices);
  for (std::size_t s = 0; s < total; ++s) {
    for (std::size_t i = 0, x = s; i < spec.devices; ++i, x /= m) dev[i] = x % m;
    for (std::size_t a = 0; a < mdp.actions; ++a) {
      std::size_t working = 0;
      // Per-device next-state distributions.
      std::vector<std::vector<double>> next(spec.devices, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < spec.devices; ++i) {
        const bool maintained = a == i + 1;
        if (!maintained && dev[i] != broken) ++working;
        if (maintained) {
          next[i][0] = 1.0;
        } else if (dev[i] == broken) {
          next[i][broken] = 1.0;
        } else {
          next[i][dev[i] + 1] += spec.wear_p;
          next[i][dev[i]] += 1.0 - spec.wear_p;
        }
      }
      for (std::size_t s2 = 0; s2 < total; ++s2) {
        double p = 1.0;
        for (std::size_t i = 0, x = s2; i < spec.devices; ++i, x /= m) p *= next[i][x % m];
        mdp.transition[s][a][s2] = p;
      }
      const std::size_t limit = working * spec.capacity;
      std::vector<double> served(std::min(limit, spec.max_requests) + 1, 0.0);
      for (std::size_t k = 0; k <= spec.max_requests; ++k)
        served[std::min(k, limit)] += binomial_pmf(spec.max_requests, k, spec.arrival_p);
      double expected = 0.0;
      for (std::size_t v = 0; v < served.size(); ++v) {
        if (served[v] <= 0) continue;
        mdp.outcomes[s][a].push_back({served[v], static_cast<double>(v)});
        expected += served[v] * static_cast<double>(v);
      }
      mdp.reward[s][a] = expected;
    }
  }
  // Renormalise products so each row sums to 1 to machine precision.
  for (auto& per_state : mdp.transition)
    for (auto& row : per_state) {
      double t = 0.0;
      for (double p : row) t += p;
      for (double& p : row) p /= t;
    }
  return mdp;
}

TabularMdp parse_mdp(std::string_view text) {
  TabularMdp mdp;
  bool have_rows = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) { return Error(Errc::BadFormat, "line " + std::to_string(lineno) + ": " + why); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "device") {
      DeviceGroupSpec spec;
      if (!(ls >> spec.devices >> spec.wear_states >> spec.wear_p >> spec.capacity >> spec.max_requests >> spec.arrival_p))
        throw fail("device needs N M wear capacity max_requests arrival_p");
      return make_device_group(spec);
    } else if (kw == "states") {
      if (!(ls >> mdp.states)) throw fail("states needs a count");
    } else if (kw == "actions") {
      if (!(ls >> mdp.actions)) throw fail("actions needs a count");
    } else if (kw == "t") {
      if (mdp.states == 0 || mdp.actions == 0) throw fail("declare states and actions first");
      if (!have_rows) {
        mdp.transition.assign(mdp.states, std::vector<std::vector<double>>(mdp.actions, std::vector<double>(mdp.states, 0.0)));
        mdp.reward.assign(mdp.states, std::vector<double>(mdp.actions, 0.0));
        have_rows = true;
      }
      std::size_t s = 0, a = 0;
      double r = 0;
      if (!(ls >> s >> a >> r) || s >= mdp.states || a >= mdp.actions) throw fail("bad transition header");
      mdp.reward[s][a] = r;
      for (auto& p : mdp.transition[s][a])
        if (!(ls >> p)) throw fail("transition row too short");
    } else {
      throw fail("unknown directive '" + kw + "'");
    }
  }
  mdp.validate();
  return mdp;
}

double QTable::max_value(std::size_t s) const { return at(s, greedy(s)); }

std::size_t QTable::greedy(std::size_t s) const {
  std::size_t best = 0;
  for (std::size_t a = 1; a < actions_; ++a)
    if (at(s, a) > at(s, best)) best = a;
  return best;
}

std::vector<std::size_t> QTable::greedy_policy() const {
  std::vector<std::size_t> pi(states_);
  for (std::size_t s = 0; s < states_; ++s) pi[s] = greedy(s);
  return pi;
}

void sarsa_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s2, std::size_t a2, double alpha,
                  double gamma) {
  q.at(s, a) += alpha * (r + gamma * q.at(s2, a2) - q.at(s, a));
}

void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s2, double alpha, double gamma) {
  q.at(s, a) += alpha * (r + gamma * q.max_value(s2) - q.at(s, a));
}

QTable train(const TabularMdp& mdp, QTable q, const TrainConfig& cfg) {
  mdp.validate();
  if (q.states() != mdp.states || q.actions() != mdp.actions) throw Error(Errc::BadFormat, "Q table shape");
  std::mt19937_64 rng(cfg.seed);
  std::uint64_t step = 0;

  auto epsilon = [&] {
    if (cfg.epsilon_halflife <= 0) return cfg.epsilon;
    return cfg.epsilon * cfg.epsilon_halflife / (cfg.epsilon_halflife + static_cast<double>(step));
  };
  auto choose = [&](std::size_t s) {
    if (unit_draw(rng) < epsilon()) return index_draw(rng, mdp.actions);
    return q.greedy(s);
  };
  auto sample = [&](std::size_t s, std::size_t a) {
    const std::size_t s2 = sample_row(mdp.transition[s][a], unit_draw(rng));
    double r = mdp.reward[s][a];
    if (!mdp.outcomes.empty() && !mdp.outcomes[s][a].empty()) {
      const double u = unit_draw(rng);
      double acc = 0.0;
      for (const auto& o : mdp.outcomes[s][a]) {
        r = o.value;
        acc += o.probability;
        if (u < acc) break;
      }
    }
    return std::pair{s2, r};
  };
  auto step_size = [&](std::size_t s, std::size_t a) {
    auto& n = q.visits(s, a);
    const double alpha = cfg.decaying_alpha ? 1.0 / (1.0 + static_cast<double>(n)) : cfg.alpha;
    ++n;
    return alpha;
  };

  for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
    std::size_t s = index_draw(rng, mdp.states);
    std::size_t a = choose(s);
    for (std::size_t t = 0; t < cfg.steps_per_episode; ++t, ++step) {
      const auto [s2, r] = sample(s, a);
      const double alpha = step_size(s, a);
      std::size_t a2;
      if (cfg.mode == Mode::OnPolicy) {
        a2 = choose(s2);
        sarsa_update(q, s, a, r, s2, a2, alpha, cfg.gamma);
      } else {
        q_update(q, s, a, r, s2, alpha, cfg.gamma);
        a2 = choose(s2);
      }
      s = s2;
      a = a2;
    }
  }
  return q;
}

QTable value_iteration(const TabularMdp& mdp, double gamma, double tol, std::size_t max_iterations) {
  mdp.validate();
  if (!(gamma >= 0 && gamma < 1)) throw Error(Errc::BadFormat, "discount must lie in [0, 1)");
  QTable q(mdp.states, mdp.actions);
  std::vector<double> v(mdp.states, 0.0);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double delta = 0.0;
    QTable next(mdp.states, mdp.actions);
    for (std::size_t s = 0; s < mdp.states; ++s)
      for (std::size_t a = 0; a < mdp.actions; ++a) {
        double x = mdp.reward[s][a];
        for (std::size_t s2 = 0; s2 < mdp.states; ++s2) x += gamma * mdp.transition[s][a][s2] * v[s2];
        next.at(s, a) = x;
        delta = std::max(delta, std::abs(x - q.at(s, a)));
      }
    q = std::move(next);
    for (std::size_t s = 0; s < mdp.states; ++s) v[s] = q.max_value(s);
    if (delta <= tol) return q;
  }
  throw Error(Errc::NoConvergence, "value iteration");
}

}  // namespace dsdin::opt
