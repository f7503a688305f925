#include "raag/splitting.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace raag {

std::map<int, int> SplittingSkeleton::rank_census() const {
    std::map<int, int> out;
    for (auto& v : vertices) ++out[v.rank];
    return out;
}

std::vector<std::vector<std::pair<int, int>>> SplittingSkeleton::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(vertices.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        adj[edges[i].a].push_back({edges[i].b, static_cast<int>(i)});
        adj[edges[i].b].push_back({edges[i].a, static_cast<int>(i)});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

SplittingSkeleton build_X(int k) {
    if (k < 1) throw std::invalid_argument("build_X: need k >= 1");
    SplittingSkeleton x;
    int center_rank = k * k + k + 1;
    auto add_vertex = [&](int rank) {
        x.vertices.push_back({rank, 0, -1, {}});
        return static_cast<int>(x.vertices.size()) - 1;
    };
    auto add_edge = [&](int a, int b) { x.edges.push_back({a, b, 0, 0, -1, -1, {}}); };
    auto star = [&](int center) {
        for (int j = 1; j <= k; ++j) {
            int u = add_vertex(2);
            int leaf = add_vertex(k + 2);
            add_edge(center, u);
            add_edge(u, leaf);
        }
    };
    auto diamond = [&](int i, int from) {
        int to = add_vertex(center_rank);
        for (int j = 1; j <= i; ++j) {
            int u = add_vertex(2);
            add_edge(from, u);
            add_edge(u, to);
        }
        return to;
    };

    int cur = add_vertex(center_rank);
    star(cur);
    for (int j = 1; j <= k - 1; ++j) {
        cur = diamond(j, cur);
        cur = diamond(k - j, cur);
    }
    star(cur);
    return x;
}

namespace {

struct ComponentIndex {
    std::vector<int> comp_of;               // cover vertex -> component id
    std::vector<std::vector<int>> members;  // sorted

    explicit ComponentIndex(const CoverGraph& cover, const std::vector<int>& letters) {
        members = label_subgraph_components(cover, letters);
        comp_of.assign(cover.n, -1);
        for (size_t c = 0; c < members.size(); ++c)
            for (int v : members[c]) comp_of[v] = static_cast<int>(c);
    }
};

}  // namespace

SplittingSkeleton quotient_graph(const Tree& gamma, const std::vector<int>& retraction_letters,
                                 const std::map<int, int>& letter_of, const CoverGraph& cover) {
    auto cover_rep = validate_cover(cover);
    if (!cover_rep.ok())
        throw std::invalid_argument("quotient_graph: invalid cover: " + cover_rep.violations[0]);
    std::set<int> aset(retraction_letters.begin(), retraction_letters.end());
    if (aset.size() != retraction_letters.size())
        throw std::invalid_argument("quotient_graph: duplicate retraction letters");
    if (aset.size() != cover.alphabet.size() || letter_of.size() != aset.size())
        throw std::invalid_argument("quotient_graph: cover alphabet does not match A");
    std::set<int> used_letters;
    for (int a : retraction_letters) {
        auto it = letter_of.find(a);
        if (it == letter_of.end())
            throw std::invalid_argument("quotient_graph: letter map misses a vertex of A");
        if (it->second < 0 || it->second >= static_cast<int>(cover.alphabet.size()) ||
            !used_letters.insert(it->second).second)
            throw std::invalid_argument("quotient_graph: letter map is not a bijection onto the alphabet");
        if (a < 0 || a >= gamma.vertex_count)
            throw std::invalid_argument("quotient_graph: A contains a vertex outside gamma");
    }

    ReducedTree red = reduce(gamma);
    const Tree& gt = red.tree;
    SplittingSkeleton psi;
    psi.has_labels = true;

    // letter lists per reduced vertex: the vertex's own letter and the
    // letters among its original-tree neighbors
    auto own_letter = [&](int ov) {
        auto it = letter_of.find(ov);
        return it == letter_of.end() ? -1 : it->second;
    };
    auto neighbor_letters = [&](int ov) {
        std::vector<int> ls;
        for (int nb : gamma.adj[ov])
            if (int l = own_letter(nb); l >= 0) ls.push_back(l);
        std::sort(ls.begin(), ls.end());
        return ls;
    };

    // psi vertices over each reduced vertex, plus cover-vertex -> psi-vertex maps
    std::vector<std::vector<int>> psi_vertex_of(gt.vertex_count, std::vector<int>(cover.n, -1));
    for (int rv = 0; rv < gt.vertex_count; ++rv) {
        int ov = red.old_of_new[rv];
        std::vector<int> letters = neighbor_letters(ov);
        if (int l = own_letter(ov); l >= 0) {
            letters.push_back(l);
            std::sort(letters.begin(), letters.end());
        }
        ComponentIndex comps(cover, letters);
        ComponentIndex neigh(cover, neighbor_letters(ov));
        for (auto& comp : comps.members) {
            int n_c = static_cast<int>(neigh.members[neigh.comp_of[comp[0]]].size());
            for (int v : comp)
                if (static_cast<int>(neigh.members[neigh.comp_of[v]].size()) != n_c)
                    throw std::runtime_error(
                        "quotient_graph: neighbor-component size varies inside a psi-vertex");
            long long label = 1;
            if (int l = own_letter(ov); l >= 0) {
                label = cycle_length(cover, l, comp[0]);
                for (int v : comp)
                    if (cycle_length(cover, l, v) != label)
                        throw std::runtime_error(
                            "quotient_graph: cycle length varies inside a psi-vertex");
            }
            int rank = 1 + n_c * (gamma.degree(ov) - 1);
            if (rank < 2) throw std::runtime_error("quotient_graph: vertex rank below 2");
            int id = static_cast<int>(psi.vertices.size());
            psi.vertices.push_back({rank, label, rv, comp});
            for (int v : comp) psi_vertex_of[rv][v] = id;
        }
    }

    // minimal kappa >= 1 with x * u^kappa on the v-orbit of x (or back at x
    // when v carries no letter); bounded by the u-cycle length
    auto end_label = [&](int x, int u_letter, int v_letter) -> long long {
        if (u_letter < 0) return 1;
        std::set<int> target;
        if (v_letter >= 0)
            for (int w : cycle_vertices(cover, v_letter, x)) target.insert(w);
        else
            target.insert(x);
        int limit = cycle_length(cover, u_letter, x);
        int y = x;
        for (int kappa = 1; kappa <= limit; ++kappa) {
            y = cover.step(y, u_letter);
            if (target.count(y)) return kappa;
        }
        throw std::runtime_error("quotient_graph: no label exponent found");
    };

    for (auto& re : gt.edges) {
        int ra = re.first, rb = re.second;
        int oa = red.old_of_new[ra], ob = red.old_of_new[rb];
        std::vector<int> letters;
        if (int l = own_letter(oa); l >= 0) letters.push_back(l);
        if (int l = own_letter(ob); l >= 0) letters.push_back(l);
        std::sort(letters.begin(), letters.end());
        ComponentIndex comps(cover, letters);
        for (auto& comp : comps.members) {
            SplittingSkeleton::Edge e;
            e.a = psi_vertex_of[ra][comp[0]];
            e.b = psi_vertex_of[rb][comp[0]];
            e.over_a = ra;
            e.over_b = rb;
            e.cover_component = comp;
            e.l_a = end_label(comp[0], own_letter(oa), own_letter(ob));
            e.l_b = end_label(comp[0], own_letter(ob), own_letter(oa));
            for (int x : comp) {
                if (psi_vertex_of[ra][x] != e.a || psi_vertex_of[rb][x] != e.b)
                    throw std::runtime_error("quotient_graph: edge component not a refinement");
                if (end_label(x, own_letter(oa), own_letter(ob)) != e.l_a ||
                    end_label(x, own_letter(ob), own_letter(oa)) != e.l_b)
                    throw std::runtime_error(
                        "quotient_graph: edge label varies inside a psi-edge");
            }
            if (psi.vertices[e.a].label_L < e.l_a || psi.vertices[e.b].label_L < e.l_b)
                throw std::runtime_error("quotient_graph: L < l at an edge end");
            psi.edges.push_back(std::move(e));
        }
    }

    // connectivity of the skeleton
    std::vector<int> parent(psi.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto& e : psi.edges) {
        int a = find(e.a), b = find(e.b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    for (size_t v = 0; v < psi.vertices.size(); ++v)
        if (find(static_cast<int>(v)) != find(0))
            throw std::runtime_error("quotient_graph: skeleton not connected");
    return psi;
}

namespace {

struct IsoContext {
    const SplittingSkeleton& a;
    const SplittingSkeleton& b;
    bool with_labels;
    std::map<std::pair<int, int>, int> a_edge, b_edge;  // (u,v) -> edge idx
    std::vector<int> color_a, color_b;

    IsoContext(const SplittingSkeleton& a_, const SplittingSkeleton& b_, bool wl)
        : a(a_), b(b_), with_labels(wl) {
        build_edge_map(a, a_edge);
        build_edge_map(b, b_edge);
        refine();
    }

    static void build_edge_map(const SplittingSkeleton& s,
                               std::map<std::pair<int, int>, int>& m) {
        for (size_t i = 0; i < s.edges.size(); ++i) {
            auto key1 = std::make_pair(s.edges[i].a, s.edges[i].b);
            auto key2 = std::make_pair(s.edges[i].b, s.edges[i].a);
            if (m.count(key1) || s.edges[i].a == s.edges[i].b)
                throw std::invalid_argument("labelled_iso: multigraphs not supported");
            m[key1] = static_cast<int>(i);
            m[key2] = static_cast<int>(i);
        }
    }

    long long end_label_at(const SplittingSkeleton& s, int edge, int v) const {
        return s.edges[edge].a == v ? s.edges[edge].l_a : s.edges[edge].l_b;
    }

    // joint color refinement so colors are comparable across the two graphs
    void refine() {
        size_t na = a.vertices.size(), nb = b.vertices.size();
        std::vector<std::pair<long long, long long>> init;
        for (auto& v : a.vertices) init.push_back({v.rank, with_labels ? v.label_L : 0});
        for (auto& v : b.vertices) init.push_back({v.rank, with_labels ? v.label_L : 0});
        std::vector<std::pair<long long, long long>> sorted_init(init.begin(), init.end());
        std::sort(sorted_init.begin(), sorted_init.end());
        sorted_init.erase(std::unique(sorted_init.begin(), sorted_init.end()),
                          sorted_init.end());
        std::vector<int> color(na + nb);
        for (size_t i = 0; i < init.size(); ++i)
            color[i] = static_cast<int>(
                std::lower_bound(sorted_init.begin(), sorted_init.end(), init[i]) -
                sorted_init.begin());

        auto adj_a = a.adjacency();
        auto adj_b = b.adjacency();
        for (size_t round = 0; round < na + nb; ++round) {
            using Sig = std::pair<int, std::vector<std::tuple<long long, long long, int>>>;
            std::vector<Sig> sig(na + nb);
            auto fill = [&](const SplittingSkeleton& s, size_t off,
                            const std::vector<std::vector<std::pair<int, int>>>& adj) {
                for (size_t v = 0; v < s.vertices.size(); ++v) {
                    std::vector<std::tuple<long long, long long, int>> nbs;
                    for (auto [w, e] : adj[v]) {
                        long long lv = with_labels ? end_label_at(s, e, static_cast<int>(v)) : 0;
                        long long lw = with_labels ? end_label_at(s, e, w) : 0;
                        nbs.push_back({lv, lw, color[off + w]});
                    }
                    std::sort(nbs.begin(), nbs.end());
                    sig[off + v] = {color[off + v], std::move(nbs)};
                }
            };
            fill(a, 0, adj_a);
            fill(b, na, adj_b);
            std::vector<Sig> uniq(sig.begin(), sig.end());
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            std::vector<int> next(na + nb);
            for (size_t i = 0; i < sig.size(); ++i)
                next[i] = static_cast<int>(
                    std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
            if (next == color) break;
            color = std::move(next);
        }
        color_a.assign(color.begin(), color.begin() + na);
        color_b.assign(color.begin() + na, color.end());
    }

    bool colors_compatible() const {
        std::map<int, int> ca, cb;
        for (int c : color_a) ++ca[c];
        for (int c : color_b) ++cb[c];
        return ca == cb;
    }
};

}  // namespace

bool for_each_iso(const SplittingSkeleton& a, const SplittingSkeleton& b, bool with_labels,
                  const std::function<bool(const std::vector<int>&)>& fn) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
    IsoContext ctx(a, b, with_labels);
    if (!ctx.colors_compatible()) return false;
    size_t n = a.vertices.size();

    // assignment order: BFS-ish, most-constrained color class first
    std::vector<int> order;
    {
        std::vector<bool> placed(n, false);
        std::map<int, int> class_size;
        for (int c : ctx.color_a) ++class_size[c];
        auto adj = a.adjacency();
        for (size_t step = 0; step < n; ++step) {
            int best = -1;
            for (size_t v = 0; v < n; ++v) {
                if (placed[v]) continue;
                int assigned_nbs = 0;
                for (auto [w, e] : adj[v]) {
                    (void)e;
                    if (placed[w]) ++assigned_nbs;
                }
                if (best < 0) best = static_cast<int>(v);
                else {
                    int bn = 0;
                    for (auto [w, e] : adj[best]) {
                        (void)e;
                        if (placed[w]) ++bn;
                    }
                    if (assigned_nbs > bn ||
                        (assigned_nbs == bn &&
                         class_size[ctx.color_a[v]] < class_size[ctx.color_a[best]]))
                        best = static_cast<int>(v);
                }
            }
            placed[best] = true;
            order.push_back(best);
        }
    }

    std::vector<int> phi(n, -1), used(b.vertices.size(), 0);
    auto adj_a = a.adjacency();
    auto adj_b = b.adjacency();

    std::function<bool(size_t)> rec = [&](size_t depth) -> bool {
        if (depth == n) return fn(phi);
        int v = order[depth];
        for (size_t w = 0; w < b.vertices.size(); ++w) {
            if (used[w] || ctx.color_b[w] != ctx.color_a[v]) continue;
            bool ok = true;
            for (auto [u, e] : adj_a[v]) {
                if (phi[u] < 0) continue;
                auto it = ctx.b_edge.find({phi[u], static_cast<int>(w)});
                if (it == ctx.b_edge.end()) {
                    ok = false;
                    break;
                }
                if (with_labels) {
                    if (ctx.end_label_at(a, e, v) !=
                            ctx.end_label_at(b, it->second, static_cast<int>(w)) ||
                        ctx.end_label_at(a, e, u) != ctx.end_label_at(b, it->second, phi[u])) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            // degree match rules out missing edges on the image side
            if (adj_a[v].size() != adj_b[w].size()) continue;
            phi[v] = static_cast<int>(w);
            used[w] = 1;
            if (rec(depth + 1)) return true;
            phi[v] = -1;
            used[w] = 0;
        }
        return false;
    };
    return rec(0);
}

std::optional<std::vector<int>> labelled_iso(const SplittingSkeleton& a,
                                             const SplittingSkeleton& b, bool with_labels) {
    std::optional<std::vector<int>> out;
    for_each_iso(a, b, with_labels, [&](const std::vector<int>& phi) {
        out = phi;
        return true;
    });
    return out;
}

Tree p4k2_tree(int k) {
    if (k < 1) throw std::invalid_argument("p4k2_tree: need k >= 1");
    Tree t = build_path(4 * k + 2);
    t.names.assign(t.vertex_count, "");
    t.names[0] = "A";
    t.names[4 * k + 2] = "E";
    for (int i = 1; i <= k + 1; ++i) t.names[4 * i - 3] = "D" + std::to_string(i);
    for (int i = 1; i <= k; ++i) {
        t.names[4 * i - 2] = "C" + std::to_string(i);
        t.names[4 * i - 1] = "B" + std::to_string(i);
        t.names[4 * i] = "C" + std::to_string(i) + "'";
    }
    return t;
}

SplittingSkeleton psi_H(int k) {
    Tree gamma = build_tkk(k);
    CoverGraph s = build_cover_S(k);
    int a1 = 0;      // leaf a_1 in the build_tkk layout
    int e1 = k + 3;  // leaf e_1
    std::map<int, int> letter_of{{a1, s.letter_index("a1")}, {e1, s.letter_index("e1")}};
    return quotient_graph(gamma, {a1, e1}, letter_of, s);
}

SplittingSkeleton psi_K(int k) {
    Tree gamma = p4k2_tree(k);
    ZCover z = build_cover_Z(k);
    std::vector<int> A;
    std::map<int, int> letter_of;
    for (int i = 1; i <= k; ++i) {
        int ci = 4 * i - 2, cpi = 4 * i;
        A.push_back(ci);
        A.push_back(cpi);
        letter_of[ci] = z.cover.letter_index("C" + std::to_string(i));
        letter_of[cpi] = z.cover.letter_index("C" + std::to_string(i) + "'");
    }
    return quotient_graph(gamma, A, letter_of, z.cover);
}

MLabels m_labels(const SplittingSkeleton& h, const SplittingSkeleton& kk,
                 const std::vector<int>& phi, const SystemBundle& bundle) {
    if (!h.has_labels || !kk.has_labels)
        throw std::invalid_argument("m_labels: both skeletons need labels");
    std::map<std::pair<int, int>, int> prod_edge;
    for (auto& e : bundle.product.edges) prod_edge[{e.src, e.dst}] = e.id;
    std::map<std::pair<int, int>, int> kk_edge;
    for (size_t i = 0; i < kk.edges.size(); ++i) {
        kk_edge[{kk.edges[i].a, kk.edges[i].b}] = static_cast<int>(i);
        kk_edge[{kk.edges[i].b, kk.edges[i].a}] = static_cast<int>(i);
    }
    auto delta = [&](int hv) {
        return bundle.product.vertex_index(h.vertices[hv].over, kk.vertices[phi[hv]].over);
    };

    std::map<std::tuple<int, int, int>, Integer> acc;  // (edge, k, l) -> value
    int component = 0;
    for (auto& f : h.edges) {
        int pa = delta(f.a), pb = delta(f.b);
        auto it_ab = prod_edge.find({pa, pb});
        if (it_ab == prod_edge.end())
            throw std::invalid_argument("m_labels: phi is not type-consistent");
        int e_ab = it_ab->second;
        int e_ba = bundle.product.edges[e_ab].inv;
        int comp = bundle.product.component_of_edge[e_ab];
        if (component == 0) component = comp;
        if (component != comp)
            throw std::invalid_argument("m_labels: delta image spans two components");
        auto it_kk = kk_edge.find({phi[f.a], phi[f.b]});
        if (it_kk == kk_edge.end())
            throw std::invalid_argument("m_labels: phi does not map an edge to an edge");
        const auto& g = kk.edges[it_kk->second];
        long long lp_a = (g.a == phi[f.a]) ? g.l_a : g.l_b;  // l' at the phi(a) end
        long long lp_b = (g.a == phi[f.b]) ? g.l_a : g.l_b;
        Integer L_a = h.vertices[f.a].label_L, L_b = h.vertices[f.b].label_L;
        Integer Lp_a = kk.vertices[phi[f.a]].label_L, Lp_b = kk.vertices[phi[f.b]].label_L;

        acc[{e_ab, 1, 1}] += L_a * f.l_b;
        acc[{e_ab, 1, 2}] += L_a * lp_b;
        acc[{e_ab, 2, 1}] += Lp_a * f.l_b;
        acc[{e_ab, 2, 2}] += Lp_a * lp_b;
        acc[{e_ba, 1, 1}] += L_b * f.l_a;
        acc[{e_ba, 1, 2}] += L_b * lp_a;
        acc[{e_ba, 2, 1}] += Lp_b * f.l_a;
        acc[{e_ba, 2, 2}] += Lp_b * lp_a;
    }
    if (component == 0) throw std::invalid_argument("m_labels: empty skeleton");

    MLabels out;
    out.component = component;
    const LinearSystem& sys = bundle.systems[component - 1];
    out.assignment.assign(sys.vars.size(), Integer(0));
    for (auto& [key, value] : acc) {
        auto [edge, kk2, ll2] = key;
        int idx = sys.var_index({edge, kk2, ll2});
        if (idx < 0) throw std::logic_error("m_labels: variable not in component system");
        out.assignment[idx] = value;
    }
    return out;
}

bool proportions_ok(const SplittingSkeleton& h, const SplittingSkeleton& kk,
                    const std::vector<int>& phi) {
    std::map<std::pair<int, int>, int> kk_edge;
    for (size_t i = 0; i < kk.edges.size(); ++i) {
        kk_edge[{kk.edges[i].a, kk.edges[i].b}] = static_cast<int>(i);
        kk_edge[{kk.edges[i].b, kk.edges[i].a}] = static_cast<int>(i);
    }
    for (auto& f : h.edges) {
        auto it = kk_edge.find({phi[f.a], phi[f.b]});
        if (it == kk_edge.end()) return false;
        const auto& g = kk.edges[it->second];
        long long lp_a = (g.a == phi[f.a]) ? g.l_a : g.l_b;
        long long lp_b = (g.a == phi[f.b]) ? g.l_a : g.l_b;
        long long L_a = h.vertices[f.a].label_L, L_b = h.vertices[f.b].label_L;
        long long Lp_a = kk.vertices[phi[f.a]].label_L, Lp_b = kk.vertices[phi[f.b]].label_L;
        // all four ratios equal a positive integer q
        if (f.l_a <= 0 || L_a % f.l_a != 0) return false;
        long long q = L_a / f.l_a;
        if (q <= 0) return false;
        if (L_b != q * f.l_b || Lp_a != q * lp_a || Lp_b != q * lp_b) return false;
    }
    return true;
}

CrossValidation cross_validate(int k, const SystemBundle& bundle) {
    CrossValidation cv;
    SplittingSkeleton h = psi_H(k);
    SplittingSkeleton kk = psi_K(k);
    for_each_iso(h, kk, /*with_labels=*/false, [&](const std::vector<int>& phi) {
        ++cv.isos_tried;
        MLabels ml;
        try {
            ml = m_labels(h, kk, phi, bundle);
        } catch (const std::invalid_argument&) {
            return false;
        }
        if (!check_assignment(bundle.systems[ml.component - 1], ml.assignment).ok())
            return false;
        cv.found = true;
        cv.phi = phi;
        cv.labels = std::move(ml);
        cv.q_ratio_ok = proportions_ok(h, kk, phi);
        return true;
    });
    return cv;
}

std::string skeleton_json(const SplittingSkeleton& s) {
    nlohmann::ordered_json j;
    auto verts = nlohmann::ordered_json::array();
    for (size_t i = 0; i < s.vertices.size(); ++i) {
        nlohmann::ordered_json v;
        v["id"] = i;
        v["rank"] = s.vertices[i].rank;
        if (s.has_labels) v["L"] = s.vertices[i].label_L;
        v["over"] = s.vertices[i].over;
        verts.push_back(std::move(v));
    }
    j["vertices"] = std::move(verts);
    auto edges = nlohmann::ordered_json::array();
    for (auto& e : s.edges) {
        nlohmann::ordered_json je;
        je["a"] = e.a;
        je["b"] = e.b;
        if (s.has_labels) {
            je["l_a"] = e.l_a;
            je["l_b"] = e.l_b;
        }
        je["over"] = {e.over_a, e.over_b};
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j.dump(1);
}

}  // namespace raag
