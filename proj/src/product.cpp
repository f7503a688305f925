#include "raag/product.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace raag {

namespace {

int factor_edge_index(const Tree& t, int a, int b) {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(t.edges.begin(), t.edges.end(), std::make_pair(a, b));
    if (it == t.edges.end() || *it != std::make_pair(a, b))
        throw std::runtime_error("product: projection is not a factor edge");
    return static_cast<int>(it - t.edges.begin());
}

}  // namespace

int ProductGraph::pi1_edge(int e) const {
    return factor_edge_index(left, left_of(edges[e].src), left_of(edges[e].dst));
}

int ProductGraph::pi2_edge(int e) const {
    return factor_edge_index(right, right_of(edges[e].src), right_of(edges[e].dst));
}

std::vector<int> ProductGraph::component_vertices(int component) const {
    if (component_of_vertex.empty())
        throw std::invalid_argument("product: degenerate (a factor has no edges)");
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (component_of_vertex[v] == component) out.push_back(v);
    return out;
}

std::vector<int> ProductGraph::component_edges(int component) const {
    if (component_of_vertex.empty())
        throw std::invalid_argument("product: degenerate (a factor has no edges)");
    std::vector<int> out;
    for (auto& e : edges)
        if (component_of_edge[e.id] == component) out.push_back(e.id);
    return out;
}

ProductGraph direct_product(const Tree& left, const Tree& right) {
    ProductGraph p;
    p.left = left;
    p.right = right;
    p.out_edges.assign(p.vertex_count(), {});

    // (i1,j1) ~ (i2,j2) iff i1~i2 in left and j1~j2 in right; each factor-edge
    // pair contributes the two unoriented product edges of Weichsel's product.
    for (auto& le : left.edges) {
        for (auto& re : right.edges) {
            int corners[2][2] = {{p.vertex_index(le.first, re.first),
                                  p.vertex_index(le.second, re.second)},
                                 {p.vertex_index(le.first, re.second),
                                  p.vertex_index(le.second, re.first)}};
            for (auto& c : corners) {
                int u = std::min(c[0], c[1]), v = std::max(c[0], c[1]);
                int id = static_cast<int>(p.edges.size());
                p.edges.push_back({id, u, v, id + 1});
                p.edges.push_back({id + 1, v, u, id});
                p.out_edges[u].push_back(id);
                p.out_edges[v].push_back(id + 1);
            }
        }
    }

    if (left.edges.empty() || right.edges.empty()) return p;  // degenerate, untagged

    std::vector<int> comp(p.vertex_count(), 0);
    std::queue<int> q;
    comp[p.vertex_index(0, 0)] = 1;
    q.push(p.vertex_index(0, 0));
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : p.out_edges[v]) {
            int w = p.edges[e].dst;
            if (comp[w] == 0) {
                comp[w] = 1;
                q.push(w);
            }
        }
    }
    int seed2 = -1;
    for (int v = 0; v < p.vertex_count(); ++v)
        if (comp[v] == 0) {
            seed2 = v;
            break;
        }
    if (seed2 >= 0) {
        comp[seed2] = 2;
        q.push(seed2);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e : p.out_edges[v]) {
                int w = p.edges[e].dst;
                if (comp[w] == 0) {
                    comp[w] = 2;
                    q.push(w);
                }
            }
        }
    }
    for (int v = 0; v < p.vertex_count(); ++v)
        if (comp[v] == 0) throw std::runtime_error("product: more than two components");
    p.component_of_vertex = std::move(comp);
    p.component_of_edge.resize(p.edges.size());
    for (auto& e : p.edges) p.component_of_edge[e.id] = p.component_of_vertex[e.src];
    return p;
}

EdgePreimageIndex preimage_index(const ProductGraph& p) {
    EdgePreimageIndex idx;
    idx.pi1_class.assign(p.left.edges.size(), {});
    idx.pi2_class.assign(p.right.edges.size(), {});
    idx.at_vertex_pi1.assign(p.vertex_count(),
                             std::vector<std::vector<int>>(p.left.edges.size()));
    idx.at_vertex_pi2.assign(p.vertex_count(),
                             std::vector<std::vector<int>>(p.right.edges.size()));
    for (auto& e : p.edges) {
        int e1 = p.pi1_edge(e.id);
        int e2 = p.pi2_edge(e.id);
        idx.pi1_class[e1].push_back(e.id);
        idx.pi2_class[e2].push_back(e.id);
        idx.at_vertex_pi1[e.src][e1].push_back(e.id);
        idx.at_vertex_pi2[e.src][e2].push_back(e.id);
    }
    return idx;
}

std::string product_dot(const ProductGraph& p) {
    std::ostringstream out;
    out << "graph product {\n";
    for (int v = 0; v < p.vertex_count(); ++v) {
        out << "  v" << v << " [label=\"(" << p.left.name_of(p.left_of(v)) << ","
            << p.right.name_of(p.right_of(v)) << ")\"];\n";
    }
    for (auto& e : p.edges) {
        if (e.id > e.inv) continue;
        const char* color =
            p.component_of_edge.empty() ? "black"
                                        : (p.component_of_edge[e.id] == 1 ? "black" : "red");
        out << "  v" << e.src << " -- v" << e.dst << " [color=" << color << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace raag
