#pragma once

#include <string>
#include <utility>
#include <vector>

namespace raag {

/// Finite simplicial tree on dense 0-based vertex ids. Immutable after
/// construction through make_tree; names are cosmetic.
struct Tree {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // stored with u < v, sorted
    std::vector<std::string> names;         // empty, or one entry per vertex
    std::vector<std::vector<int>> adj;      // sorted neighbor lists

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool is_leaf(int v) const { return degree(v) == 1; }
    std::string name_of(int v) const;
};

// Validates connectedness, acyclicity and id range; throws std::invalid_argument.
Tree make_tree(int vertex_count, std::vector<std::pair<int, int>> edges,
               std::vector<std::string> names = {});

// Encoding of a diameter-4 tree: pivot degrees minus one with multiplicities,
// strictly increasing in d, plus the number q of hair vertices at the center.
struct Diam4Code {
    std::vector<std::pair<int, int>> pivot_spec;  // (d, k)
    int hair = 0;

    bool operator==(const Diam4Code&) const = default;
};

// Mini-language: path:N | tkk:K | t4:(d1,k1),...,(dl,kl);q | adj:u v u v ...
Tree parse_tree_spec(const std::string& text);

// One "u v" pair per line, '#' starts a comment.
Tree parse_adjacency_text(const std::string& text);

Tree build_path(int n_edges);
Tree build_tkk(int k);
Tree build_diam4(const Diam4Code& code);

int diameter(const Tree& t);

struct ReducedTree {
    Tree tree;
    std::vector<int> old_of_new;  // reduced id -> original id
    std::vector<int> new_of_old;  // original id -> reduced id, -1 for dropped leaves
};

// Deletes all degree-1 vertices with their edges, one pass. Requires diameter >= 2.
ReducedTree reduce(const Tree& t);

// Degree of v in the original tree minus one; v must be a non-leaf.
int big_d(const Tree& t, int v);

Diam4Code diam4_code(const Tree& t);
std::string format_diam4_code(const Diam4Code& code);

// AHU canonical form rooted at the tree center(s); equal strings iff isomorphic.
std::string canonical_form(const Tree& t);
bool isomorphic(const Tree& a, const Tree& b);

}  // namespace raag
