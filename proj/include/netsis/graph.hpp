#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "netsis/types.hpp"

namespace netsis {

/// Weighted directed graph. `weights(i, j)` holds a_ij, the weight of the
/// edge from node j to node i — rows are destinations. This is the transpose
/// of the convention used by many graph libraries, so edge-list lines
/// "src dst w" land in weights(dst, src).
struct Graph {
    Matrix weights;
    std::vector<std::string> node_labels;  // empty, or one label per node

    [[nodiscard]] Index n() const { return weights.rows(); }
};

/// Parses "src dst weight" lines (weight optional, default 1.0). Node ids are
/// 0-based integers, '#' starts a comment, duplicate edges accumulate, and
/// the node count is 1 + the largest id seen.
[[nodiscard]] Graph parse_edge_list(std::string_view text);
[[nodiscard]] Graph parse_edge_list(std::istream& in);

/// Inverse of parse_edge_list: one line per nonzero edge, sorted by
/// (dst, src), weights printed with 17 significant digits.
[[nodiscard]] std::string serialize_edge_list(const Graph& g);

/// Scales every row of the weight matrix so it sums to 1. Requires every node
/// to have at least one incoming edge.
[[nodiscard]] Graph normalize_in_weights(const Graph& g);

struct SccAnalysis {
    bool is_strongly_connected = false;
    /// Components sorted by smallest member id; members sorted ascending.
    std::vector<std::vector<Index>> components;
    /// Largest component (ties broken by smallest minimum node id).
    std::vector<Index> largest_component_nodes;
    /// Induced subgraph on the largest component, nodes relabeled densely in
    /// ascending original order; original ids are kept as node labels.
    Graph largest_component_subgraph;
};

[[nodiscard]] SccAnalysis strongly_connected_analysis(const Graph& g);
[[nodiscard]] bool is_strongly_connected(const Graph& g);

/// Deterministic random strongly connected graph: a directed Hamiltonian
/// cycle 0 -> 1 -> ... -> n-1 -> 0 plus each remaining non-self-loop edge
/// independently with probability extra_edge_prob. All weights are 1.0.
/// n == 1 yields a single self-loop.
[[nodiscard]] Graph random_strongly_connected(Index n, double extra_edge_prob,
                                              std::uint64_t seed);

}  // namespace netsis
