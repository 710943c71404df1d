#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trop/errors.hpp"

namespace trop {

struct FamilyQuotient;

// Finite multigraph: vertex ids plus unordered id pairs. Loops and parallel
// edges are allowed. The canonical string is an isomorphism-stable encoding
// used as a memoization key throughout the Hopf/Birkhoff layers.
class Graph {
  public:
    Graph() = default;
    Graph(std::vector<int> vertices, std::vector<std::pair<int, int>> edges);

    static Graph empty() { return Graph(); }
    static Graph single_edge() { return Graph({0, 1}, {{0, 1}}); }
    static Graph path(int n_edges);      // n_edges+1 vertices in a line
    static Graph cycle(int n);           // n >= 1; n == 1 is a loop
    static Graph banana(int n_edges);    // two vertices, n parallel edges
    static Graph complete(int n);
    static Graph star(int leaves);

    const std::vector<int>& vertices() const { return verts_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int n_vertices() const { return int(verts_.size()); }
    int n_edges() const { return int(edges_.size()); }
    bool is_empty() const { return verts_.empty() && edges_.empty(); }

    bool has_vertex(int v) const;

    // Neighbors of v through non-loop edges (deduplicated, sorted).
    std::vector<int> neighbors(int v) const;

    // Vertex sets of connected components (isolated vertices are their own
    // components), sorted for determinism.
    std::vector<std::vector<int>> components() const;
    bool is_connected() const;

    // Splits into connected components as stand-alone graphs.
    std::vector<Graph> component_graphs() const;

    // Subgraph spanned by an edge subset; vertices are the endpoints only.
    Graph edge_subgraph(const std::vector<int>& edge_indices) const;

    // Induced subgraph on a vertex subset: those vertices plus every edge
    // with both endpoints inside.
    Graph induced_subgraph(const std::vector<int>& vertex_subset) const;

    // Contraction of the subgraph spanned by an edge subset: the subset's
    // edges are deleted, each connected component of the subset collapses
    // to a single vertex (the minimal id of the component), surviving edges
    // are re-attached, and edges joining two vertices of the same collapsed
    // component become loops. With drop_isolated, vertices left without
    // incident edges are removed (the Hopf-quotient convention).
    Graph contract(const std::vector<int>& edge_indices, bool drop_isolated = true) const;

    // Contraction of the induced subgraph on a vertex subset, collapsing
    // each connected component of the induced graph. Isolated vertices and
    // blob vertices are kept.
    FamilyQuotient contract_vertices(const std::vector<int>& vertex_subset) const;

    Graph disjoint_union(const Graph& other) const;  // relabels other on id clash

    // Isomorphism-stable canonical encoding: iterative degree refinement,
    // exhaustive search within the remaining color classes (fallback
    // capped at 10 vertices).
    const std::string& canonical_string() const;
    bool is_isomorphic(const Graph& other) const;

    // All spanning trees as sorted edge-index sets, enumerated by recursive
    // deletion-contraction (loops never enter a tree; parallel edges give
    // distinct trees). Empty when the graph is disconnected.
    std::vector<std::vector<int>> spanning_trees() const;

    std::string to_json() const;
    static Graph from_json(const std::string& json_text);

  private:
    std::vector<int> verts_;                   // sorted unique ids
    std::vector<std::pair<int, int>> edges_;   // normalized (min,max) pairs
    mutable std::optional<std::string> canon_;
};

// Result of contracting an induced subgraph: the quotient plus the
// representative ids of collapsed components (blob vertices) and the
// untouched original vertices.
struct FamilyQuotient {
    Graph graph;
    std::vector<int> blob_vertices;
    std::vector<int> surviving_vertices;
};

}  // namespace trop
