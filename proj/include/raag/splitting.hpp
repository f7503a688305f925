#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "raag/covers.hpp"
#include "raag/system.hpp"
#include "raag/tree.hpp"

namespace raag {

/// Finite graph with per-vertex free ranks and the L/l labels of a
/// graph-of-groups skeleton. `over` fields carry the delta-projection into a
/// reduced tree when the skeleton came from a cover.
struct SplittingSkeleton {
    struct Vertex {
        int rank = 0;
        long long label_L = 0;  // 0 when labels are absent
        int over = -1;
        std::vector<int> cover_component;
    };
    struct Edge {
        int a = 0, b = 0;
        long long l_a = 0, l_b = 0;
        int over_a = -1, over_b = -1;
        std::vector<int> cover_component;
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    bool has_labels = false;

    std::map<int, int> rank_census() const;
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;  // (neighbor, edge idx)
};

// The graph of groups X: diamonds glued in the sequence
// (D_k, D_1, D_{k-1}, D_2, ..., D_{k-1}, D_1, D_k); ranks only.
SplittingSkeleton build_X(int k);

// Quotient skeleton computed from the cover: psi-vertices over each non-leaf
// v are the components of the subgraph spanned by the letters of
// A ∩ ({v} ∪ N(v)); psi-edges over (u,v) the components over A ∩ {u,v}.
// letter_of maps each vertex of A (original ids in gamma) to its cover letter.
SplittingSkeleton quotient_graph(const Tree& gamma, const std::vector<int>& retraction_letters,
                                 const std::map<int, int>& letter_of, const CoverGraph& cover);

// Backtracking isomorphism search over color-refined rank (and label) classes.
std::optional<std::vector<int>> labelled_iso(const SplittingSkeleton& a,
                                             const SplittingSkeleton& b, bool with_labels);

// Deterministic enumeration; stops when fn returns true.
bool for_each_iso(const SplittingSkeleton& a, const SplittingSkeleton& b, bool with_labels,
                  const std::function<bool(const std::vector<int>&)>& fn);

// P_{4k+2} with the vertex names A, D1, C1, B1, C1', D2, ..., Dk+1, E.
Tree p4k2_tree(int k);

SplittingSkeleton psi_H(int k);  // quotient of tkk:k through the cover S
SplittingSkeleton psi_K(int k);  // quotient of P_{4k+2} through the cover Z

struct MLabels {
    int component = 0;
    std::vector<Integer> assignment;  // over bundle.systems[component-1].vars
};

// Edge labels M_kl summed over the psi-edges of each product-edge type.
MLabels m_labels(const SplittingSkeleton& h, const SplittingSkeleton& kk,
                 const std::vector<int>& phi, const SystemBundle& bundle);

// Per-edge ratio check: L/l agree at all four ends and give a positive integer.
bool proportions_ok(const SplittingSkeleton& h, const SplittingSkeleton& kk,
                    const std::vector<int>& phi);

struct CrossValidation {
    bool found = false;
    std::vector<int> phi;
    MLabels labels;
    bool q_ratio_ok = false;
    int isos_tried = 0;
};

// Searches rank-respecting isomorphisms psi_H -> psi_K until the induced
// m-labels satisfy the generated component system.
CrossValidation cross_validate(int k, const SystemBundle& bundle);

std::string skeleton_json(const SplittingSkeleton& s);

}  // namespace raag
