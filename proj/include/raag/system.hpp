#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "raag/product.hpp"
#include "raag/rational.hpp"
#include "raag/tree.hpp"

namespace raag {

/// One of the four labels of an oriented product edge.
struct VarId {
    int edge = 0;  // oriented product edge id
    int k = 1;     // in {1,2}
    int l = 1;     // in {1,2}

    auto operator<=>(const VarId&) const = default;
};

struct LinRow {
    std::vector<std::pair<int, std::int64_t>> terms;  // (var index, coefficient)
};

struct Implication {
    int trigger = 0;              // var index
    std::vector<int> consequent;  // var indices, nonempty, must sum > 0 if trigger > 0
};

/// Homogeneous integer equalities + nonnegativity on all variables +
/// strict-sum constraints + implications, for one product component.
struct LinearSystem {
    std::string left_spec, right_spec;
    int component = 0;
    std::vector<VarId> vars;
    std::vector<LinRow> equalities;
    std::vector<std::vector<int>> strict_sums;
    std::vector<Implication> implications;

    int var_index(const VarId& v) const;  // -1 when absent
};

/// Product graph, per-component systems and the D-multipliers, kept together
/// so reports and the R-label accessor can reach everything.
struct SystemBundle {
    std::string left_spec, right_spec;
    Tree left, right;  // original trees
    ReducedTree left_red, right_red;
    ProductGraph product;
    EdgePreimageIndex preimage;
    std::vector<int> d_left, d_right;  // big_d per reduced vertex
    std::array<LinearSystem, 2> systems;
};

LinearSystem build_component_system(const ProductGraph& p, const EdgePreimageIndex& idx,
                                    int component, const std::vector<int>& d_left,
                                    const std::vector<int>& d_right);

// Requires diameter >= 3 on both trees.
SystemBundle build_full_system(const Tree& left, const Tree& right,
                               const std::string& left_spec = "",
                               const std::string& right_spec = "");

struct CheckReport {
    struct Violation {
        std::string kind;  // "equality", "nonneg", "strict_sum", "implication"
        int index = 0;
        std::string detail;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Exact evaluation of every constraint; x must be total on s's variables.
CheckReport check_assignment(const LinearSystem& s, const std::vector<Integer>& x);
CheckReport check_assignment(const LinearSystem& s, const std::map<VarId, Integer>& x);

// The common value of the (ve1)/(ve2) chains at a component vertex, checked
// across every rewriting; throws if the assignment breaks a chain.
std::pair<Integer, Integer> r_labels(const SystemBundle& b, int component, int vertex,
                                     const std::vector<Integer>& x);

std::string emit_json(const LinearSystem& s);
LinearSystem parse_json(const std::string& text);

}  // namespace raag
