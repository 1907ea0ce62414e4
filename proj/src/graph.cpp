#include "netsis/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "netsis/error.hpp"
#include "netsis/prng.hpp"

namespace netsis {

namespace {

// Dense matrices keep the toolkit simple at desk scale; refuse ids that
// would silently allocate gigabytes.
constexpr Index kMaxNodeId = 1 << 20;

struct EdgeRecord {
    Index src = 0;
    Index dst = 0;
    double weight = 1.0;
};

[[nodiscard]] bool parse_node_id(std::string_view token, Index& out) {
    long long value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return false;
    if (value < 0 || value > kMaxNodeId) return false;
    out = static_cast<Index>(value);
    return true;
}

[[nodiscard]] bool parse_weight(std::string_view token, double& out) {
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), out);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return false;
    return std::isfinite(out);
}

[[nodiscard]] std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
    std::vector<EdgeRecord> edges;
    Index max_id = -1;

    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        begin = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }

        if (tokens.size() != 2 && tokens.size() != 3)
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_no) + ": expected 'src dst [weight]', got " +
                            std::to_string(tokens.size()) + " tokens");

        EdgeRecord edge;
        if (!parse_node_id(tokens[0], edge.src) || !parse_node_id(tokens[1], edge.dst))
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_no) + ": node ids must be integers in [0, " +
                            std::to_string(kMaxNodeId) + "]");
        if (tokens.size() == 3) {
            if (!parse_weight(tokens[2], edge.weight))
                throw Error(ErrorCode::MalformedLine,
                            "line " + std::to_string(line_no) + ": non-numeric weight '" +
                                std::string(tokens[2]) + "'");
            if (edge.weight < 0.0)
                throw Error(ErrorCode::NegativeWeight,
                            "line " + std::to_string(line_no) + ": negative weight " +
                                std::to_string(edge.weight),
                            std::nullopt, edge.weight);
        }
        max_id = std::max({max_id, edge.src, edge.dst});
        edges.push_back(edge);

        if (end == text.size()) break;
    }

    if (edges.empty())
        throw Error(ErrorCode::EmptyGraph, "edge list contains no edges");

    Graph g;
    g.weights = Matrix::Zero(max_id + 1, max_id + 1);
    for (const auto& e : edges) g.weights(e.dst, e.src) += e.weight;
    return g;
}

Graph parse_edge_list(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    return parse_edge_list(std::string_view(text));
}

std::string serialize_edge_list(const Graph& g) {
    std::string out;
    char line[96];
    for (Index dst = 0; dst < g.n(); ++dst) {
        for (Index src = 0; src < g.n(); ++src) {
            const double w = g.weights(dst, src);
            if (w == 0.0) continue;
            const int len = std::snprintf(line, sizeof(line), "%lld %lld %.17g\n",
                                          static_cast<long long>(src),
                                          static_cast<long long>(dst), w);
            out.append(line, static_cast<std::size_t>(len));
        }
    }
    return out;
}

Graph normalize_in_weights(const Graph& g) {
    Graph out = g;
    for (Index i = 0; i < g.n(); ++i) {
        const double row_sum = g.weights.row(i).sum();
        if (row_sum <= 0.0)
            throw Error(ErrorCode::ZeroInDegree,
                        "node " + std::to_string(i) + " has no incoming edges", i);
        out.weights.row(i) /= row_sum;
    }
    return out;
}

namespace {

// Iterative Tarjan over the zero pattern (edge j -> i iff weights(i, j) > 0).
[[nodiscard]] std::vector<std::vector<Index>> tarjan_components(const Matrix& w) {
    const Index n = w.rows();
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            if (w(i, j) > 0.0) adj[static_cast<std::size_t>(j)].push_back(i);

    constexpr Index kUnvisited = -1;
    std::vector<Index> index(static_cast<std::size_t>(n), kUnvisited);
    std::vector<Index> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<Index> stack;
    std::vector<std::vector<Index>> components;
    Index counter = 0;

    struct Frame {
        Index node;
        std::size_t child;
    };
    std::vector<Frame> frames;

    for (Index root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
        frames.push_back({root, 0});
        index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;

        while (!frames.empty()) {
            Frame& frame = frames.back();
            const auto v = static_cast<std::size_t>(frame.node);
            if (frame.child < adj[v].size()) {
                const Index wnode = adj[v][frame.child++];
                const auto wi = static_cast<std::size_t>(wnode);
                if (index[wi] == kUnvisited) {
                    index[wi] = lowlink[wi] = counter++;
                    stack.push_back(wnode);
                    on_stack[wi] = 1;
                    frames.push_back({wnode, 0});
                } else if (on_stack[wi]) {
                    lowlink[v] = std::min(lowlink[v], index[wi]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    std::vector<Index> component;
                    for (;;) {
                        const Index u = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(u)] = 0;
                        component.push_back(u);
                        if (u == frame.node) break;
                    }
                    std::sort(component.begin(), component.end());
                    components.push_back(std::move(component));
                }
                const Index done = frame.node;
                frames.pop_back();
                if (!frames.empty()) {
                    const auto p = static_cast<std::size_t>(frames.back().node);
                    lowlink[p] = std::min(lowlink[p], lowlink[static_cast<std::size_t>(done)]);
                }
            }
        }
    }
    return components;
}

}  // namespace

SccAnalysis strongly_connected_analysis(const Graph& g) {
    SccAnalysis result;
    result.components = tarjan_components(g.weights);
    std::sort(result.components.begin(), result.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    result.is_strongly_connected = result.components.size() == 1;

    const auto largest = std::max_element(
        result.components.begin(), result.components.end(),
        [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a.front() > b.front();  // tie: prefer smaller minimum id
        });
    result.largest_component_nodes = *largest;

    const auto& nodes = result.largest_component_nodes;
    const auto m = static_cast<Index>(nodes.size());
    Graph sub;
    sub.weights = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            sub.weights(i, j) = g.weights(nodes[static_cast<std::size_t>(i)],
                                          nodes[static_cast<std::size_t>(j)]);
    sub.node_labels.reserve(nodes.size());
    for (const Index orig : nodes)
        sub.node_labels.push_back(g.node_labels.empty()
                                      ? std::to_string(orig)
                                      : g.node_labels[static_cast<std::size_t>(orig)]);
    result.largest_component_subgraph = std::move(sub);
    return result;
}

bool is_strongly_connected(const Graph& g) {
    return tarjan_components(g.weights).size() == 1;
}

Graph random_strongly_connected(Index n, double extra_edge_prob, std::uint64_t seed) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "node count must be >= 1");
    if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "extra_edge_prob must lie in [0, 1]");

    Graph g;
    g.weights = Matrix::Zero(n, n);
    if (n == 1) {
        g.weights(0, 0) = 1.0;
        return g;
    }

    for (Index i = 0; i < n; ++i) g.weights((i + 1) % n, i) = 1.0;

    SplitMix64 rng(seed);
    for (Index dst = 0; dst < n; ++dst) {
        for (Index src = 0; src < n; ++src) {
            if (src == dst) continue;
            if (g.weights(dst, src) != 0.0) continue;  // cycle edge
            if (rng.uniform01() < extra_edge_prob) g.weights(dst, src) = 1.0;
        }
    }
    return g;
}

}  // namespace netsis
