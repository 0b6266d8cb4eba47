#include "dsdin/bp.hpp"

#include <sstream>
#include <string>

#include "dsdin/error.hpp"

namespace dsdin::opt {

namespace {

struct Adjacent {
  std::size_t other;
  std::size_t edge;
};

double potential(const PairPotential& e, const std::vector<std::size_t>& domain, std::size_t from, std::size_t xf,
                 std::size_t xt) {
  // Table is indexed [x_a][x_b]; `from` says which end xf belongs to.
  return from == e.a ? e.table[xf * domain[e.b] + xt] : e.table[xt * domain[e.b] + xf];
}

void normalise(std::vector<double>& v) {
  double t = 0.0;
  for (double x : v) t += x;
  for (double& x : v) x /= t;
}

}  // namespace

std::vector<std::vector<double>> bp_marginals(const FactorTree& g) {
  const std::size_t n = g.domain.size();
  if (n == 0) throw Error(Errc::BadFormat, "empty factor graph");
  if (g.unary.size() != n) throw Error(Errc::BadFormat, "one unary potential per variable");
  for (std::size_t v = 0; v < n; ++v) {
    if (g.domain[v] == 0 || g.unary[v].size() != g.domain[v]) throw Error(Errc::BadFormat, "unary shape");
    for (double x : g.unary[v])
      if (!(x > 0)) throw Error(Errc::BadFormat, "potentials must be positive");
  }
  if (g.edges.size() != n - 1) throw Error(Errc::NotATree, "a tree on n variables has n-1 edges");

  std::vector<std::vector<Adjacent>> adj(n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.a >= n || e.b >= n || e.a == e.b) throw Error(Errc::NotATree, "bad edge endpoints");
    if (e.table.size() != g.domain[e.a] * g.domain[e.b]) throw Error(Errc::BadFormat, "edge table shape");
    for (double x : e.table)
      if (!(x > 0)) throw Error(Errc::BadFormat, "potentials must be positive");
    adj[e.a].push_back({e.b, i});
    adj[e.b].push_back({e.a, i});
  }

  // BFS order from variable 0; n-1 edges plus connectivity means a tree.
  std::vector<std::size_t> order{0}, parent(n, n), parent_edge(n, n);
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t v = order[i];
    for (const auto& [u, e] : adj[v]) {
      if (seen[u]) continue;
      seen[u] = true;
      parent[u] = v;
      parent_edge[u] = e;
      order.push_back(u);
    }
  }
  if (order.size() != n) throw Error(Errc::NotATree, "graph is disconnected");

  // up[v]: message v -> parent; down[v]: message parent -> v.
  std::vector<std::vector<double>> up(n), down(n);
  auto product_except = [&](std::size_t v, std::size_t skip) {
    std::vector<double> b = g.unary[v];
    for (const auto& [u, e] : adj[v]) {
      if (u == skip) continue;
      const auto& m = parent[u] == v ? up[u] : down[v];
      for (std::size_t x = 0; x < b.size(); ++x) b[x] *= m[x];
    }
    return b;
  };
  auto send = [&](std::size_t from, std::size_t to, std::size_t edge, const std::vector<double>& belief) {
    std::vector<double> m(g.domain[to], 0.0);
    for (std::size_t xt = 0; xt < m.size(); ++xt)
      for (std::size_t xf = 0; xf < belief.size(); ++xf)
        m[xt] += belief[xf] * potential(g.edges[edge], g.domain, from, xf, xt);
    normalise(m);
    return m;
  };

  for (std::size_t i = n; i-- > 1;) {
    const std::size_t v = order[i];
    up[v] = send(v, parent[v], parent_edge[v], product_except(v, parent[v]));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t v = order[i];
    down[v] = send(parent[v], v, parent_edge[v], product_except(parent[v], v));
  }

  std::vector<std::vector<double>> marginals(n);
  for (std::size_t v = 0; v < n; ++v) {
    marginals[v] = product_except(v, n);
    normalise(marginals[v]);
  }
  return marginals;
}

FactorTree parse_factor_tree(std::string_view text) {
  FactorTree g;
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
    if (kw == "var") {
      std::size_t d = 0;
      if (!(ls >> d) || d == 0) throw fail("var needs a positive domain size");
      std::vector<double> u(d);
      for (auto& x : u)
        if (!(ls >> x)) throw fail("var needs one unary value per state");
      g.domain.push_back(d);
      g.unary.push_back(std::move(u));
    } else if (kw == "edge") {
      PairPotential e;
      if (!(ls >> e.a >> e.b) || e.a >= g.domain.size() || e.b >= g.domain.size())
        throw fail("edge endpoints must name declared variables");
      e.table.resize(g.domain[e.a] * g.domain[e.b]);
      for (auto& x : e.table)
        if (!(ls >> x)) throw fail("edge table too short");
      g.edges.push_back(std::move(e));
    } else {
      throw fail("unknown directive '" + kw + "'");
    }
  }
  return g;
}

}  // namespace dsdin::opt
