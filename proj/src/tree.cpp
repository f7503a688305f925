#include "raag/tree.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace raag {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::vector<int> bfs_dist(const Tree& t, int start, std::vector<int>* parent = nullptr) {
    std::vector<int> dist(t.vertex_count, -1);
    if (parent) parent->assign(t.vertex_count, -1);
    std::queue<int> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : t.adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                if (parent) (*parent)[w] = u;
                q.push(w);
            }
        }
    }
    return dist;
}

int farthest(const std::vector<int>& dist) {
    int best = 0;
    for (size_t v = 1; v < dist.size(); ++v)
        if (dist[v] > dist[best]) best = static_cast<int>(v);
    return best;
}

}  // namespace

std::string Tree::name_of(int v) const {
    if (!names.empty()) return names[v];
    return std::to_string(v);
}

Tree make_tree(int vertex_count, std::vector<std::pair<int, int>> edges,
               std::vector<std::string> names) {
    if (vertex_count < 1) fail("tree: vertex_count must be >= 1");
    if (static_cast<int>(edges.size()) != vertex_count - 1)
        fail("tree: edge count must equal vertex_count - 1");
    if (!names.empty() && static_cast<int>(names.size()) != vertex_count)
        fail("tree: names must be empty or one per vertex");
    for (auto& e : edges) {
        if (e.first == e.second) fail("tree: self-loop");
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 0 || e.second >= vertex_count) fail("tree: vertex id out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        fail("tree: duplicate edge");

    Tree t;
    t.vertex_count = vertex_count;
    t.edges = std::move(edges);
    t.names = std::move(names);
    t.adj.assign(vertex_count, {});
    for (auto& e : t.edges) {
        t.adj[e.first].push_back(e.second);
        t.adj[e.second].push_back(e.first);
    }
    for (auto& a : t.adj) std::sort(a.begin(), a.end());

    // connected + |E| = |V|-1 implies acyclic
    auto dist = bfs_dist(t, 0);
    for (int v = 0; v < vertex_count; ++v)
        if (dist[v] < 0) fail("tree: not connected");
    return t;
}

Tree build_path(int n_edges) {
    if (n_edges < 0) fail("path: need N >= 0");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_edges; ++i) edges.push_back({i, i + 1});
    return make_tree(n_edges + 1, std::move(edges));
}

Tree build_tkk(int k) {
    if (k < 1) fail("tkk: need K >= 1");
    // ids: 0..k-1 leaves a_1..a_k, k = b, k+1 = c, k+2 = d, k+3..2k+3 leaves e_1..e_{k+1}
    int b = k, c = k + 1, d = k + 2;
    int n = 2 * k + 4;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> names(n);
    for (int i = 0; i < k; ++i) {
        edges.push_back({i, b});
        names[i] = "a" + std::to_string(i + 1);
    }
    edges.push_back({b, c});
    edges.push_back({c, d});
    names[b] = "b";
    names[c] = "c";
    names[d] = "d";
    for (int j = 0; j <= k; ++j) {
        edges.push_back({d, d + 1 + j});
        names[d + 1 + j] = "e" + std::to_string(j + 1);
    }
    return make_tree(n, std::move(edges), std::move(names));
}

Tree build_diam4(const Diam4Code& code) {
    if (code.hair < 0) fail("t4: hair count must be >= 0");
    if (code.pivot_spec.empty()) fail("t4: need at least one (d,k) entry");
    int total_pivots = 0;
    int prev_d = 0;
    for (auto [d, k] : code.pivot_spec) {
        if (d <= prev_d) fail("t4: d values must be positive and strictly increasing");
        if (k < 1) fail("t4: k values must be positive");
        prev_d = d;
        total_pivots += k;
    }
    if (total_pivots < 2) fail("t4: need at least two pivots (diameter exactly 4)");
    std::vector<std::pair<int, int>> edges;
    int next = 1;  // center = 0
    for (auto [d, k] : code.pivot_spec) {
        for (int i = 0; i < k; ++i) {
            int pivot = next++;
            edges.push_back({0, pivot});
            for (int j = 0; j < d; ++j) edges.push_back({pivot, next++});
        }
    }
    for (int h = 0; h < code.hair; ++h) edges.push_back({0, next++});
    return make_tree(next, std::move(edges));
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        fail("parse error: bad " + what + " '" + s + "'");
    }
    if (pos != s.size()) fail("parse error: bad " + what + " '" + s + "'");
    return v;
}

std::string strip_comments(const std::string& text) {
    std::string out;
    bool in_comment = false;
    for (char ch : text) {
        if (ch == '#') in_comment = true;
        if (ch == '\n') in_comment = false;
        if (!in_comment) out.push_back(ch);
    }
    return out;
}

Tree parse_adj_tokens(const std::vector<std::string>& toks) {
    if (toks.empty()) fail("adj: no edges given");
    if (toks.size() % 2 != 0) fail("adj: odd number of vertex ids");
    std::vector<std::pair<int, int>> edges;
    int max_id = 0;
    for (size_t i = 0; i < toks.size(); i += 2) {
        int u = parse_int(toks[i], "vertex id");
        int v = parse_int(toks[i + 1], "vertex id");
        if (u < 0 || v < 0) fail("adj: negative vertex id");
        max_id = std::max(max_id, std::max(u, v));
        edges.push_back({u, v});
    }
    return make_tree(max_id + 1, std::move(edges));
}

Diam4Code parse_diam4_spec(const std::string& body) {
    // (d1,k1),...,(dl,kl);q
    auto semi = body.rfind(';');
    if (semi == std::string::npos) fail("t4: missing ';q' suffix");
    Diam4Code code;
    code.hair = parse_int(body.substr(semi + 1), "hair count");
    std::string list = body.substr(0, semi);
    size_t pos = 0;
    while (pos < list.size()) {
        if (list[pos] == ',') {
            ++pos;
            continue;
        }
        if (list[pos] != '(') fail("t4: expected '(' in pivot list");
        auto close = list.find(')', pos);
        if (close == std::string::npos) fail("t4: unbalanced '('");
        std::string pair = list.substr(pos + 1, close - pos - 1);
        auto comma = pair.find(',');
        if (comma == std::string::npos) fail("t4: expected '(d,k)'");
        int d = parse_int(pair.substr(0, comma), "pivot degree");
        int k = parse_int(pair.substr(comma + 1), "pivot count");
        code.pivot_spec.push_back({d, k});
        pos = close + 1;
    }
    if (code.pivot_spec.empty()) fail("t4: empty pivot list");
    return code;
}

}  // namespace

Tree parse_adjacency_text(const std::string& text) {
    return parse_adj_tokens(split_ws(strip_comments(text)));
}

Tree parse_tree_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) fail("tree spec: expected 'kind:...' in '" + text + "'");
    std::string kind = text.substr(0, colon);
    std::string body = text.substr(colon + 1);
    if (kind == "path") return build_path(parse_int(body, "path length"));
    if (kind == "tkk") return build_tkk(parse_int(body, "tkk parameter"));
    if (kind == "t4") return build_diam4(parse_diam4_spec(body));
    if (kind == "adj") return parse_adjacency_text(body);
    fail("tree spec: unknown kind '" + kind + "'");
}

int diameter(const Tree& t) {
    auto d0 = bfs_dist(t, 0);
    int u = farthest(d0);
    auto d1 = bfs_dist(t, u);
    return d1[farthest(d1)];
}

ReducedTree reduce(const Tree& t) {
    if (diameter(t) < 2) fail("reduce: diameter < 2 gives an empty reduction");
    ReducedTree r;
    r.new_of_old.assign(t.vertex_count, -1);
    for (int v = 0; v < t.vertex_count; ++v) {
        if (t.degree(v) >= 2) {
            r.new_of_old[v] = static_cast<int>(r.old_of_new.size());
            r.old_of_new.push_back(v);
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (auto& e : t.edges) {
        int a = r.new_of_old[e.first], b = r.new_of_old[e.second];
        if (a >= 0 && b >= 0) edges.push_back({a, b});
    }
    std::vector<std::string> names;
    if (!t.names.empty())
        for (int old : r.old_of_new) names.push_back(t.names[old]);
    r.tree = make_tree(static_cast<int>(r.old_of_new.size()), std::move(edges), std::move(names));
    return r;
}

int big_d(const Tree& t, int v) {
    if (v < 0 || v >= t.vertex_count) fail("big_d: vertex out of range");
    if (t.degree(v) < 2) fail("big_d: vertex is a leaf");
    return t.degree(v) - 1;
}

Diam4Code diam4_code(const Tree& t) {
    if (diameter(t) != 4) fail("diam4_code: tree diameter is not 4");
    auto d0 = bfs_dist(t, 0);
    int u = farthest(d0);
    std::vector<int> parent;
    auto d1 = bfs_dist(t, u, &parent);
    int w = farthest(d1);
    // walk two steps back from w toward u: the middle vertex of the diametral path
    int center = parent[parent[w]];
    Diam4Code code;
    std::map<int, int> by_d;
    for (int nb : t.adj[center]) {
        if (t.is_leaf(nb)) {
            ++code.hair;
        } else {
            for (int x : t.adj[nb])
                if (x != center && !t.is_leaf(x))
                    fail("diam4_code: internal error, non-leaf beyond a pivot");
            ++by_d[t.degree(nb) - 1];
        }
    }
    for (auto [d, k] : by_d) code.pivot_spec.push_back({d, k});
    return code;
}

std::string format_diam4_code(const Diam4Code& code) {
    std::ostringstream out;
    out << "t4:";
    for (size_t i = 0; i < code.pivot_spec.size(); ++i) {
        if (i) out << ",";
        out << "(" << code.pivot_spec[i].first << "," << code.pivot_spec[i].second << ")";
    }
    out << ";" << code.hair;
    return out.str();
}

namespace {

std::string ahu(const Tree& t, int root, int from) {
    std::vector<std::string> child_forms;
    for (int nb : t.adj[root])
        if (nb != from) child_forms.push_back(ahu(t, nb, root));
    std::sort(child_forms.begin(), child_forms.end());
    std::string s = "(";
    for (auto& c : child_forms) s += c;
    s += ")";
    return s;
}

std::vector<int> center_vertices(const Tree& t) {
    // repeatedly strip leaves; the last one or two vertices are the tree centers
    std::vector<int> deg(t.vertex_count);
    std::vector<int> layer;
    for (int v = 0; v < t.vertex_count; ++v) {
        deg[v] = t.degree(v);
        if (deg[v] <= 1) layer.push_back(v);
    }
    int remaining = t.vertex_count;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            --remaining;
            for (int nb : t.adj[v])
                if (--deg[nb] == 1) next.push_back(nb);
        }
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

}  // namespace

std::string canonical_form(const Tree& t) {
    std::string best;
    for (int c : center_vertices(t)) {
        std::string s = ahu(t, c, -1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

bool isomorphic(const Tree& a, const Tree& b) {
    return a.vertex_count == b.vertex_count && canonical_form(a) == canonical_form(b);
}

}  // namespace raag
