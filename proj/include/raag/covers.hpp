#pragma once

#include <map>
#include <string>
#include <vector>

namespace raag {

/// Basepointed cover of a bouquet of circles: one total permutation of the
/// vertex set per letter (Stallings graph of a finite-index free subgroup).
struct CoverGraph {
    int n = 0;
    int basepoint = 0;
    std::vector<std::string> alphabet;
    std::vector<std::vector<int>> perm;     // perm[letter][v]
    std::vector<std::string> vertex_names;  // optional

    int step(int v, int letter) const { return perm[letter][v]; }
    int letter_index(const std::string& name) const;  // -1 when absent
};

int cycle_length(const CoverGraph& c, int letter, int vertex);
std::vector<int> cycle_vertices(const CoverGraph& c, int letter, int vertex);
std::map<int, int> cycle_census(const CoverGraph& c, int letter);  // length -> count

// Components of the subgraph spanned by the given letters, as sorted vertex
// lists ordered by smallest member; singletons included.
std::vector<std::vector<int>> label_subgraph_components(const CoverGraph& c,
                                                        const std::vector<int>& letters);

struct ValidationReport {
    std::vector<std::string> violations;
    bool degenerate = false;  // the documented k = 1 completion of S
    bool ok() const { return violations.empty(); }
};

// Cover S over {a1, e1} of degree k(k+1); k = 1 uses the documented
// degenerate completion (extra e1-loop at the basepoint).
CoverGraph build_cover_S(int k);

/// Shortest-path parameters of the cover Z read off the loop placements.
struct AlphaBeta {
    int k = 0;
    // keyed by i in 2..k-1; inner vectors strictly increasing
    std::map<int, std::vector<int>> alpha;        // k-i entries
    std::map<int, std::vector<int>> beta;         // i-1 entries
    std::map<int, std::vector<int>> alpha_prime;  // i-2 entries
    std::map<int, std::vector<int>> beta_prime;   // k-i entries
};

struct ZCover {
    CoverGraph cover;
    AlphaBeta ab;
};

// Canonical cover Z over {C1..Ck, C1'..Ck'}: master cycle of length k(k+1),
// loops greedily on the lowest free non-basepoint vertex, long cycles
// threaded along the master cycle.
ZCover build_cover_Z(int k);

AlphaBeta alpha_beta(const CoverGraph& z, int k);

ValidationReport validate_cover(const CoverGraph& c);
ValidationReport validate_cover_S(const CoverGraph& c, int k);
ValidationReport validate_cover_Z(const CoverGraph& c, int k);

std::string cover_json(const CoverGraph& c);
CoverGraph cover_from_json(const std::string& text);
std::string cover_dot(const CoverGraph& c);

}  // namespace raag
