#pragma once

#include <string>
#include <vector>

#include "raag/tree.hpp"

namespace raag {

/// Direct (tensor) product of two reduced trees, with oriented edges and
/// the fixed-point-free inverse pairing. Vertex (i, j) has index i*right.n + j.
struct ProductGraph {
    Tree left;   // reduced tree of the first factor
    Tree right;  // reduced tree of the second factor

    struct OrientedEdge {
        int id;
        int src;  // vertex index
        int dst;
        int inv;  // id of the inverse edge
    };

    std::vector<OrientedEdge> edges;
    std::vector<std::vector<int>> out_edges;  // per vertex, ids of edges beginning there
    std::vector<int> component_of_vertex;     // 1 or 2
    std::vector<int> component_of_edge;

    int vertex_count() const { return left.vertex_count * right.vertex_count; }
    int vertex_index(int i, int j) const { return i * right.vertex_count + j; }
    int left_of(int v) const { return v / right.vertex_count; }
    int right_of(int v) const { return v % right.vertex_count; }

    // unoriented factor-edge indices of the projections of an oriented edge
    int pi1_edge(int e) const;
    int pi2_edge(int e) const;

    std::vector<int> component_vertices(int component) const;
    std::vector<int> component_edges(int component) const;
};

// Requires both factors nonempty; components need >= 1 edge in each factor.
ProductGraph direct_product(const Tree& left, const Tree& right);

/// Preimage lists of the two projections, globally per factor edge and
/// locally per (product vertex, incident factor-edge direction).
struct EdgePreimageIndex {
    // [factor edge index] -> oriented product edge ids (both orientations)
    std::vector<std::vector<int>> pi1_class;
    std::vector<std::vector<int>> pi2_class;
    // [vertex][factor edge index] -> oriented edges beginning at the vertex
    // whose projection is that factor edge (empty when not incident)
    std::vector<std::vector<std::vector<int>>> at_vertex_pi1;
    std::vector<std::vector<std::vector<int>>> at_vertex_pi2;
};

EdgePreimageIndex preimage_index(const ProductGraph& p);

std::string product_dot(const ProductGraph& p);

}  // namespace raag
