#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/errors.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed {

// Unordered edge {a, b}; canonical form stores the smaller label first.
struct Edge {
    int a = 0;
    int b = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string edge_label(int a, int b) {
    return "{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

// Finite simple graph on vertex labels 1..n. The edge list is canonical
// (smaller endpoint first, sorted lexicographically), so edge indices are
// deterministic and usable as bit positions. Immutable after construction.
class Graph {
public:
    Graph() = default;

    // Validates a raw edge list: rejects self loops, duplicate unordered
    // pairs, and endpoints outside 1..n; returns the canonical graph.
    static Graph validate(int n, const std::vector<std::pair<int, int>>& raw_edges) {
        if (n < 0)
            throw Error(errc::invalid_parameters, "vertex count must be nonnegative");
        std::vector<Edge> edges;
        edges.reserve(raw_edges.size());
        for (const auto& [a, b] : raw_edges) {
            if (a == b)
                throw Error(errc::self_loop, "edge " + edge_label(a, b));
            if (a < 1 || a > n || b < 1 || b > n)
                throw Error(errc::label_out_of_range,
                            "edge " + edge_label(a, b) + " with n=" + std::to_string(n));
            edges.push_back({std::min(a, b), std::max(a, b)});
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i] == edges[i - 1])
                throw Error(errc::duplicate_edge, "edge " + edge_label(edges[i].a, edges[i].b));
        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        return g;
    }

    int vertex_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    bool has_label(int v) const { return v >= 1 && v <= n_; }

    void require_label(int v) const {
        if (!has_label(v))
            throw Error(errc::label_out_of_range,
                        "vertex " + std::to_string(v) + " with n=" + std::to_string(n_));
    }

    // 1-based adjacency lists; index 0 unused.
    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n_ + 1);
        for (const Edge& e : edges_) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
        return adj;
    }

    int component_count() const {
        UnionFind uf(n_ + 1);
        for (const Edge& e : edges_) uf.unite(e.a, e.b);
        return uf.components() - 1;  // index 0 is not a vertex
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

// Acyclicity test: |E| + #components = n.
inline bool is_forest(const Graph& g) {
    return g.edge_count() + g.component_count() == g.vertex_count();
}

// A validated acyclic graph.
class Forest {
public:
    explicit Forest(Graph g) : graph_(std::move(g)) {
        if (!is_forest(graph_))
            throw Error(errc::not_a_forest,
                        "graph with " + std::to_string(graph_.edge_count()) + " edges and " +
                            std::to_string(graph_.component_count()) + " components on " +
                            std::to_string(graph_.vertex_count()) + " vertices");
    }

    const Graph& graph() const { return graph_; }

private:
    Graph graph_;
};

// The path 1-2-...-n.
inline Graph path_graph(int n) {
    if (n < 1) throw Error(errc::invalid_parameters, "path needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
    return Graph::validate(n, edges);
}

// The unique simple path from u to v (inclusive; u == v yields {u}), or
// nullopt when the terminals lie in different components.
inline std::optional<std::vector<int>> unique_path(const Forest& f, int u, int v) {
    const Graph& g = f.graph();
    g.require_label(u);
    g.require_label(v);
    if (u == v) return std::vector<int>{u};

    auto adj = g.adjacency();
    std::vector<int> parent(g.vertex_count() + 1, 0);
    std::vector<int> queue{u};
    parent[u] = u;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int w = queue[head];
        if (w == v) break;
        for (int x : adj[w]) {
            if (parent[x] == 0) {
                parent[x] = w;
                queue.push_back(x);
            }
        }
    }
    if (parent[v] == 0) return std::nullopt;

    std::vector<int> path;
    for (int w = v; w != u; w = parent[w]) path.push_back(w);
    path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace bunkbed
