#include "trop/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trop {

namespace {

// Union-find over arbitrary int ids; the minimal id of a class is its root.
class UnionFind {
  public:
    int find(int x) {
        auto it = parent_.find(x);
        if (it == parent_.end()) {
            parent_[x] = x;
            return x;
        }
        if (it->second == x) return x;
        return it->second = find(it->second);
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::map<int, int> parent_;
};

}  // namespace

Graph::Graph(std::vector<int> vertices, std::vector<std::pair<int, int>> edges)
    : verts_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(verts_.begin(), verts_.end());
    verts_.erase(std::unique(verts_.begin(), verts_.end()), verts_.end());
    for (auto& [a, b] : edges_) {
        if (a > b) std::swap(a, b);
        if (!has_vertex(a) || !has_vertex(b))
            throw DomainError("edge endpoint is not a vertex");
    }
    std::sort(edges_.begin(), edges_.end());
}

Graph Graph::path(int n_edges) {
    std::vector<int> vs(n_edges + 1);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n_edges; ++i) es.push_back({i, i + 1});
    return Graph(vs, es);
}

Graph Graph::cycle(int n) {
    if (n == 1) return Graph({0}, {{0, 0}});
    std::vector<int> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
    return Graph(vs, es);
}

Graph Graph::banana(int n_edges) {
    std::vector<std::pair<int, int>> es(size_t(n_edges), {0, 1});
    return Graph({0, 1}, es);
}

Graph Graph::complete(int n) {
    std::vector<int> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.push_back({i, j});
    return Graph(vs, es);
}

Graph Graph::star(int leaves) {
    std::vector<int> vs(leaves + 1);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<std::pair<int, int>> es;
    for (int i = 1; i <= leaves; ++i) es.push_back({0, i});
    return Graph(vs, es);
}

bool Graph::has_vertex(int v) const {
    return std::binary_search(verts_.begin(), verts_.end(), v);
}

std::vector<int> Graph::neighbors(int v) const {
    std::set<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v && b != v) out.insert(b);
        if (b == v && a != v) out.insert(a);
    }
    return {out.begin(), out.end()};
}

std::vector<std::vector<int>> Graph::components() const {
    UnionFind uf;
    for (int v : verts_) uf.find(v);
    for (const auto& [a, b] : edges_) uf.unite(a, b);
    std::map<int, std::vector<int>> by_root;
    for (int v : verts_) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [root, vs] : by_root) out.push_back(std::move(vs));
    return out;
}

bool Graph::is_connected() const { return components().size() <= 1; }

std::vector<Graph> Graph::component_graphs() const {
    std::vector<Graph> out;
    for (const auto& comp : components()) {
        std::set<int> in(comp.begin(), comp.end());
        std::vector<std::pair<int, int>> es;
        for (const auto& e : edges_)
            if (in.count(e.first)) es.push_back(e);
        out.emplace_back(comp, es);
    }
    return out;
}

Graph Graph::edge_subgraph(const std::vector<int>& edge_indices) const {
    std::set<int> vs;
    std::vector<std::pair<int, int>> es;
    for (int i : edge_indices) {
        if (i < 0 || i >= n_edges()) throw DomainError("edge index out of range");
        es.push_back(edges_[size_t(i)]);
        vs.insert(es.back().first);
        vs.insert(es.back().second);
    }
    return Graph({vs.begin(), vs.end()}, es);
}

Graph Graph::induced_subgraph(const std::vector<int>& vertex_subset) const {
    std::set<int> in(vertex_subset.begin(), vertex_subset.end());
    for (int v : vertex_subset)
        if (!has_vertex(v)) throw DomainError("induced subgraph vertex not in graph");
    std::vector<std::pair<int, int>> es;
    for (const auto& e : edges_)
        if (in.count(e.first) && in.count(e.second)) es.push_back(e);
    return Graph(vertex_subset, es);
}

Graph Graph::contract(const std::vector<int>& edge_indices, bool drop_isolated) const {
    std::set<int> chosen(edge_indices.begin(), edge_indices.end());
    UnionFind uf;
    for (int v : verts_) uf.find(v);
    for (int i : edge_indices) {
        if (i < 0 || i >= n_edges()) throw DomainError("edge index out of range");
        uf.unite(edges_[size_t(i)].first, edges_[size_t(i)].second);
    }
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n_edges(); ++i) {
        if (chosen.count(i)) continue;
        es.push_back({uf.find(edges_[size_t(i)].first), uf.find(edges_[size_t(i)].second)});
    }
    std::set<int> vs;
    if (drop_isolated) {
        for (const auto& [a, b] : es) {
            vs.insert(a);
            vs.insert(b);
        }
    } else {
        for (int v : verts_) vs.insert(uf.find(v));
    }
    return Graph({vs.begin(), vs.end()}, es);
}

FamilyQuotient Graph::contract_vertices(const std::vector<int>& vertex_subset) const {
    Graph inside = induced_subgraph(vertex_subset);
    std::set<int> in(vertex_subset.begin(), vertex_subset.end());
    UnionFind uf;
    for (int v : verts_) uf.find(v);
    for (const auto& [a, b] : inside.edges()) uf.unite(a, b);

    FamilyQuotient out;
    std::set<int> blob;
    for (const auto& comp : inside.components()) blob.insert(uf.find(comp.front()));
    out.blob_vertices = {blob.begin(), blob.end()};

    std::vector<std::pair<int, int>> es;
    for (const auto& e : edges_) {
        if (in.count(e.first) && in.count(e.second)) continue;  // subgraph edge, deleted
        es.push_back({uf.find(e.first), uf.find(e.second)});
    }
    std::set<int> vs;
    for (int v : verts_) vs.insert(uf.find(v));
    out.graph = Graph({vs.begin(), vs.end()}, es);
    for (int v : verts_)
        if (!in.count(v)) out.surviving_vertices.push_back(v);
    return out;
}

Graph Graph::disjoint_union(const Graph& other) const {
    int shift = 0;
    if (!verts_.empty() && !other.verts_.empty())
        shift = std::max(0, verts_.back() - other.verts_.front() + 1);
    std::vector<int> vs = verts_;
    for (int v : other.verts_) vs.push_back(v + shift);
    std::vector<std::pair<int, int>> es = edges_;
    for (const auto& [a, b] : other.edges_) es.push_back({a + shift, b + shift});
    return Graph(vs, es);
}

namespace {

// Iterative color refinement: start from (loop count, degree), refine by
// the multiset of neighbor colors until the partition stabilizes.
std::vector<int> refine_colors(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> loops(static_cast<size_t>(n), 0);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& [a, b] : edges) {
        if (a == b) {
            loops[size_t(a)]++;
        } else {
            adj[size_t(a)].push_back(b);
            adj[size_t(b)].push_back(a);
        }
    }
    std::vector<int> color(static_cast<size_t>(n));
    {
        std::vector<std::pair<int, int>> sig(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v)
            sig[size_t(v)] = {loops[size_t(v)], int(adj[size_t(v)].size())};
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v)
            color[size_t(v)] = int(
                std::lower_bound(sorted.begin(), sorted.end(), sig[size_t(v)]) - sorted.begin());
    }
    for (int round = 0; round < n; ++round) {
        std::vector<std::pair<int, std::vector<int>>> sig(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> nb;
            for (int u : adj[size_t(v)]) nb.push_back(color[size_t(u)]);
            std::sort(nb.begin(), nb.end());
            sig[size_t(v)] = {color[size_t(v)], std::move(nb)};
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v)
            next[size_t(v)] = int(
                std::lower_bound(sorted.begin(), sorted.end(), sig[size_t(v)]) - sorted.begin());
        if (next == color) break;
        color = next;
    }
    return color;
}

std::string encode(int n, const std::vector<std::pair<int, int>>& edges,
                   const std::vector<int>& pos) {
    std::vector<std::pair<int, int>> enc;
    enc.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        int pa = pos[size_t(a)], pb = pos[size_t(b)];
        enc.push_back({std::min(pa, pb), std::max(pa, pb)});
    }
    std::sort(enc.begin(), enc.end());
    std::ostringstream os;
    os << "V" << n << ";";
    for (const auto& [a, b] : enc) os << a << "-" << b << ",";
    return os.str();
}

}  // namespace

const std::string& Graph::canonical_string() const {
    if (canon_) return *canon_;
    const int n = n_vertices();
    if (n == 0) {
        canon_ = "V0;";
        return *canon_;
    }
    std::map<int, int> idx;
    for (int i = 0; i < n; ++i) idx[verts_[size_t(i)]] = i;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(edges_.size());
    for (const auto& [a, b] : edges_) edges.push_back({idx[a], idx[b]});

    std::vector<int> color = refine_colors(n, edges);

    {
        std::map<int, int> class_size;
        for (int c : color) class_size[c]++;
        double perms = 1;
        for (auto& [c, s] : class_size)
            for (int k = 2; k <= s; ++k) perms *= k;
        if (perms > 4e6) throw CapError("canonical form search space too large");
    }

    // enumerate vertex orders compatible with the color classes and keep
    // the lexicographically smallest edge encoding
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        return std::make_pair(color[size_t(a)], a) < std::make_pair(color[size_t(b)], b);
    });
    std::string best;
    std::vector<int> pos(static_cast<size_t>(n));
    do {
        bool sorted_colors = true;
        for (int i = 1; i < n && sorted_colors; ++i)
            sorted_colors = color[size_t(perm[size_t(i - 1)])] <= color[size_t(perm[size_t(i)])];
        if (!sorted_colors) continue;
        for (int i = 0; i < n; ++i) pos[size_t(perm[size_t(i)])] = i;
        std::string enc = encode(n, edges, pos);
        if (best.empty() || enc < best) best = std::move(enc);
    } while (std::next_permutation(perm.begin(), perm.end()));

    canon_ = std::move(best);
    return *canon_;
}

bool Graph::is_isomorphic(const Graph& other) const {
    return canonical_string() == other.canonical_string();
}

namespace {

struct DcEdge {
    int u, v, orig;
};

void spanning_rec(std::vector<DcEdge> edges, int n_active, std::vector<int>& picked,
                  std::vector<std::vector<int>>& out) {
    if (n_active == 1) {
        std::vector<int> tree = picked;
        std::sort(tree.begin(), tree.end());
        out.push_back(std::move(tree));
        return;
    }
    size_t pivot = edges.size();
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].u != edges[i].v) {
            pivot = i;
            break;
        }
    if (pivot == edges.size()) return;  // several vertices, no connecting edge left
    DcEdge e = edges[pivot];

    // delete branch: trees avoiding e
    std::vector<DcEdge> del = edges;
    del.erase(del.begin() + long(pivot));
    spanning_rec(std::move(del), n_active, picked, out);

    // contract branch: trees through e
    std::vector<DcEdge> con;
    con.reserve(edges.size() - 1);
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i == pivot) continue;
        DcEdge f = edges[i];
        if (f.u == e.v) f.u = e.u;
        if (f.v == e.v) f.v = e.u;
        con.push_back(f);
    }
    picked.push_back(e.orig);
    spanning_rec(std::move(con), n_active - 1, picked, out);
    picked.pop_back();
}

}  // namespace

std::vector<std::vector<int>> Graph::spanning_trees() const {
    if (n_vertices() == 0) return {};
    std::vector<DcEdge> es;
    for (int i = 0; i < n_edges(); ++i)
        es.push_back({edges_[size_t(i)].first, edges_[size_t(i)].second, i});
    std::vector<int> picked;
    std::vector<std::vector<int>> out;
    spanning_rec(std::move(es), n_vertices(), picked, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::string Graph::to_json() const {
    nlohmann::json j;
    j["vertices"] = verts_;
    auto& je = j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : edges_) je.push_back({a, b});
    return j.dump();
}

Graph Graph::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::vector<int> vs;
    std::vector<std::pair<int, int>> es;
    if (j.contains("vertices")) vs = j["vertices"].get<std::vector<int>>();
    if (j.contains("edges"))
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2) throw DomainError("edge must be a pair");
            int a = e[0].get<int>(), b = e[1].get<int>();
            es.push_back({a, b});
            // vertex list may be left implicit
            if (std::find(vs.begin(), vs.end(), a) == vs.end()) vs.push_back(a);
            if (std::find(vs.begin(), vs.end(), b) == vs.end()) vs.push_back(b);
        }
    return Graph(vs, es);
}

}  // namespace trop
