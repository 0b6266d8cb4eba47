#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace dsdin::opt {

struct PairPotential {
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<double> table;  // domain[a] x domain[b], row-major
};

/// Pairwise factor graph that must form a tree over its variables.
struct FactorTree {
  std::vector<std::size_t> domain;
  std::vector<std::vector<double>> unary;
  std::vector<PairPotential> edges;
};

/// Exact marginals by two-pass sum-product (leaves to root, root to
/// leaves). Throws NotATree for cycles or disconnected graphs and BadFormat
/// for shape errors or non-positive potentials.
std::vector<std::vector<double>> bp_marginals(const FactorTree& graph);

/// Text form: `var <domain> <u_0> ... <u_{d-1}>` lines in variable order,
/// then `edge <a> <b> <row-major table>` lines. '#' starts a comment.
FactorTree parse_factor_tree(std::string_view text);

}  // namespace dsdin::opt
