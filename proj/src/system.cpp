#include "raag/system.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace raag {

namespace {

int label_slot(int k, int l) { return (k - 1) * 2 + (l - 1); }

// var index layout: component edges in id order, four labels each, (k,l) in
// the order (1,1),(1,2),(2,1),(2,2)
struct VarTable {
    std::vector<int> base_of_edge;  // -1 for edges outside the component

    int index(int edge, int k, int l) const { return base_of_edge[edge] + label_slot(k, l); }
};

VarTable var_table(const ProductGraph& p, const std::vector<int>& comp_edges,
                   std::vector<VarId>& vars) {
    VarTable t;
    t.base_of_edge.assign(p.edges.size(), -1);
    for (int e : comp_edges) {
        t.base_of_edge[e] = static_cast<int>(vars.size());
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) vars.push_back({e, k, l});
    }
    return t;
}

}  // namespace

int LinearSystem::var_index(const VarId& v) const {
    // parsed systems may carry variables in any order
    auto it = std::find(vars.begin(), vars.end(), v);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

LinearSystem build_component_system(const ProductGraph& p, const EdgePreimageIndex& idx,
                                    int component, const std::vector<int>& d_left,
                                    const std::vector<int>& d_right) {
    auto comp_edges = p.component_edges(component);
    if (comp_edges.empty()) throw std::invalid_argument("system: degenerate component");
    auto comp_vertices = p.component_vertices(component);

    LinearSystem s;
    s.component = component;
    VarTable vt = var_table(p, comp_edges, s.vars);

    // edge-reversal rows: the four labels of e against those of its inverse
    for (int e : comp_edges) {
        int inv = p.edges[e].inv;
        if (e > inv) continue;
        auto eq = [&](int k1, int l1, int k2, int l2) {
            LinRow r;
            r.terms.push_back({vt.index(e, k1, l1), 1});
            r.terms.push_back({vt.index(inv, k2, l2), -1});
            s.equalities.push_back(std::move(r));
        };
        eq(1, 1, 1, 1);
        eq(1, 2, 2, 1);
        eq(2, 1, 1, 2);
        eq(2, 2, 2, 2);
    }

    // vertex rows: both direction-sum chains at every vertex, stored as
    // consecutive pairwise equalities, left direction sums first
    for (int w : comp_vertices) {
        int wl = p.left_of(w), wr = p.right_of(w);
        std::int64_t d1 = d_left[wl], d2 = d_right[wr];

        auto chain = [&](int row_k, int row_l, int col_k, int col_l) {
            std::vector<std::vector<std::pair<int, std::int64_t>>> sums;
            for (int pl : p.left.adj[wl]) {
                int f1 = [&] {
                    int a = std::min(wl, pl), b = std::max(wl, pl);
                    auto it = std::lower_bound(p.left.edges.begin(), p.left.edges.end(),
                                               std::make_pair(a, b));
                    return static_cast<int>(it - p.left.edges.begin());
                }();
                std::vector<std::pair<int, std::int64_t>> sum;
                for (int e : idx.at_vertex_pi1[w][f1])
                    sum.push_back({vt.index(e, row_k, row_l), d1});
                sums.push_back(std::move(sum));
            }
            for (int qr : p.right.adj[wr]) {
                int f2 = [&] {
                    int a = std::min(wr, qr), b = std::max(wr, qr);
                    auto it = std::lower_bound(p.right.edges.begin(), p.right.edges.end(),
                                               std::make_pair(a, b));
                    return static_cast<int>(it - p.right.edges.begin());
                }();
                std::vector<std::pair<int, std::int64_t>> sum;
                for (int e : idx.at_vertex_pi2[w][f2])
                    sum.push_back({vt.index(e, col_k, col_l), d2});
                sums.push_back(std::move(sum));
            }
            for (size_t i = 0; i + 1 < sums.size(); ++i) {
                LinRow r;
                r.terms = sums[i];
                for (auto [v, c] : sums[i + 1]) r.terms.push_back({v, -c});
                s.equalities.push_back(std::move(r));
            }
        };
        chain(1, 1, 1, 2);  // (ve1)
        chain(2, 1, 2, 2);  // (ve2)
    }

    // surjectivity: one strict sum per factor edge and label family
    auto strict_for = [&](const std::vector<std::vector<int>>& classes) {
        for (auto& cls : classes) {
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    std::vector<int> subset;
                    for (int e : cls)
                        if (vt.base_of_edge[e] >= 0) subset.push_back(vt.index(e, k, l));
                    if (subset.empty())
                        throw std::runtime_error("system: empty strict sum (component misses a factor edge)");
                    s.strict_sums.push_back(std::move(subset));
                }
        }
    };
    strict_for(idx.pi1_class);
    strict_for(idx.pi2_class);

    // local surjectivity: for every vertex, edge beginning there, factor
    // direction at the vertex, trigger label and consequent label family
    for (int v : comp_vertices) {
        for (int e : p.out_edges[v]) {
            auto emit = [&](const std::vector<int>& pre) {
                for (int k = 1; k <= 2; ++k)
                    for (int l = 1; l <= 2; ++l)
                        for (int k2 = 1; k2 <= 2; ++k2)
                            for (int l2 = 1; l2 <= 2; ++l2) {
                                Implication imp;
                                imp.trigger = vt.index(e, k, l);
                                for (int e2 : pre) imp.consequent.push_back(vt.index(e2, k2, l2));
                                s.implications.push_back(std::move(imp));
                            }
            };
            for (int pl : p.left.adj[p.left_of(v)]) {
                int a = std::min(p.left_of(v), pl), b = std::max(p.left_of(v), pl);
                auto it = std::lower_bound(p.left.edges.begin(), p.left.edges.end(),
                                           std::make_pair(a, b));
                emit(idx.at_vertex_pi1[v][it - p.left.edges.begin()]);
            }
            for (int qr : p.right.adj[p.right_of(v)]) {
                int a = std::min(p.right_of(v), qr), b = std::max(p.right_of(v), qr);
                auto it = std::lower_bound(p.right.edges.begin(), p.right.edges.end(),
                                           std::make_pair(a, b));
                emit(idx.at_vertex_pi2[v][it - p.right.edges.begin()]);
            }
        }
    }
    return s;
}

SystemBundle build_full_system(const Tree& left, const Tree& right,
                               const std::string& left_spec, const std::string& right_spec) {
    if (diameter(left) < 3 || diameter(right) < 3)
        throw std::invalid_argument("system: both trees must have diameter >= 3");
    SystemBundle b;
    b.left_spec = left_spec;
    b.right_spec = right_spec;
    b.left = left;
    b.right = right;
    b.left_red = reduce(left);
    b.right_red = reduce(right);
    b.product = direct_product(b.left_red.tree, b.right_red.tree);
    b.preimage = preimage_index(b.product);
    for (int old : b.left_red.old_of_new) b.d_left.push_back(big_d(left, old));
    for (int old : b.right_red.old_of_new) b.d_right.push_back(big_d(right, old));
    for (int c = 1; c <= 2; ++c) {
        b.systems[c - 1] =
            build_component_system(b.product, b.preimage, c, b.d_left, b.d_right);
        b.systems[c - 1].left_spec = left_spec;
        b.systems[c - 1].right_spec = right_spec;
    }
    return b;
}

CheckReport check_assignment(const LinearSystem& s, const std::vector<Integer>& x) {
    if (x.size() != s.vars.size())
        throw std::invalid_argument("check_assignment: assignment is not total");
    CheckReport rep;
    for (size_t i = 0; i < s.equalities.size(); ++i) {
        Integer sum = 0;
        for (auto [v, c] : s.equalities[i].terms) sum += Integer(c) * x[v];
        if (sum != 0)
            rep.violations.push_back({"equality", static_cast<int>(i),
                                      "residual " + sum.str()});
    }
    for (size_t v = 0; v < x.size(); ++v)
        if (x[v] < 0)
            rep.violations.push_back({"nonneg", static_cast<int>(v), "value " + x[v].str()});
    for (size_t i = 0; i < s.strict_sums.size(); ++i) {
        Integer sum = 0;
        for (int v : s.strict_sums[i]) sum += x[v];
        if (sum <= 0)
            rep.violations.push_back({"strict_sum", static_cast<int>(i), "sum " + sum.str()});
    }
    for (size_t i = 0; i < s.implications.size(); ++i) {
        if (x[s.implications[i].trigger] <= 0) continue;
        Integer sum = 0;
        for (int v : s.implications[i].consequent) sum += x[v];
        if (sum <= 0)
            rep.violations.push_back({"implication", static_cast<int>(i),
                                      "trigger positive, consequent sum " + sum.str()});
    }
    return rep;
}

CheckReport check_assignment(const LinearSystem& s, const std::map<VarId, Integer>& x) {
    std::vector<Integer> vec(s.vars.size());
    for (size_t i = 0; i < s.vars.size(); ++i) {
        auto it = x.find(s.vars[i]);
        if (it == x.end()) throw std::invalid_argument("check_assignment: assignment is not total");
        vec[i] = it->second;
    }
    return check_assignment(s, vec);
}

std::pair<Integer, Integer> r_labels(const SystemBundle& b, int component, int vertex,
                                     const std::vector<Integer>& x) {
    const LinearSystem& s = b.systems[component - 1];
    const ProductGraph& p = b.product;
    if (p.component_of_vertex[vertex] != component)
        throw std::invalid_argument("r_labels: vertex not in component");
    int wl = p.left_of(vertex), wr = p.right_of(vertex);
    Integer d1 = b.d_left[wl], d2 = b.d_right[wr];

    auto value = [&](int edge, int k, int l) {
        int vi = s.var_index({edge, k, l});
        if (vi < 0) throw std::invalid_argument("r_labels: variable missing");
        return x[vi];
    };
    auto collect = [&](int row_k, int row_l, int col_k, int col_l) {
        std::vector<Integer> sums;
        for (int pl : p.left.adj[wl]) {
            int a = std::min(wl, pl), bb = std::max(wl, pl);
            auto it = std::lower_bound(p.left.edges.begin(), p.left.edges.end(),
                                       std::make_pair(a, bb));
            Integer sum = 0;
            for (int e : b.preimage.at_vertex_pi1[vertex][it - p.left.edges.begin()])
                sum += value(e, row_k, row_l);
            sums.push_back(d1 * sum);
        }
        for (int qr : p.right.adj[wr]) {
            int a = std::min(wr, qr), bb = std::max(wr, qr);
            auto it = std::lower_bound(p.right.edges.begin(), p.right.edges.end(),
                                       std::make_pair(a, bb));
            Integer sum = 0;
            for (int e : b.preimage.at_vertex_pi2[vertex][it - p.right.edges.begin()])
                sum += value(e, col_k, col_l);
            sums.push_back(d2 * sum);
        }
        for (auto& v : sums)
            if (v != sums[0]) throw std::runtime_error("r_labels: chain rewritings disagree");
        return sums[0];
    };
    return {collect(1, 1, 1, 2), collect(2, 1, 2, 2)};
}

namespace {

using json = nlohmann::ordered_json;

void expect_keys(const json& obj, std::initializer_list<const char*> keys,
                 const std::string& where) {
    for (auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (auto* k : keys)
            if (key == k) known = true;
        if (!known) throw std::invalid_argument("system json: unknown field '" + key +
                                                "' in " + where);
    }
}

}  // namespace

std::string emit_json(const LinearSystem& s) {
    json j;
    j["pair"] = {{"left_spec", s.left_spec}, {"right_spec", s.right_spec}};
    j["component"] = s.component;
    json vars = json::array();
    for (auto& v : s.vars) vars.push_back({{"edge", v.edge}, {"k", v.k}, {"l", v.l}});
    j["variables"] = std::move(vars);
    json eqs = json::array();
    for (auto& r : s.equalities) {
        json row = json::array();
        for (auto [v, c] : r.terms) row.push_back({v, c});
        eqs.push_back(std::move(row));
    }
    j["equalities"] = std::move(eqs);
    j["strict_sums"] = s.strict_sums;
    json imps = json::array();
    for (auto& imp : s.implications)
        imps.push_back({{"trigger", imp.trigger}, {"consequent", imp.consequent}});
    j["implications"] = std::move(imps);
    return j.dump(1);
}

LinearSystem parse_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("system json: malformed: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("system json: top level must be an object");
    expect_keys(j, {"pair", "component", "variables", "equalities", "strict_sums",
                    "implications"},
                "top level");
    LinearSystem s;
    try {
        const json& pair = j.at("pair");
        expect_keys(pair, {"left_spec", "right_spec"}, "pair");
        s.left_spec = pair.at("left_spec").get<std::string>();
        s.right_spec = pair.at("right_spec").get<std::string>();
        s.component = j.at("component").get<int>();
        if (s.component != 1 && s.component != 2)
            throw std::invalid_argument("system json: component must be 1 or 2");
        for (const json& v : j.at("variables")) {
            expect_keys(v, {"edge", "k", "l"}, "variables");
            VarId id{v.at("edge").get<int>(), v.at("k").get<int>(), v.at("l").get<int>()};
            if (id.k < 1 || id.k > 2 || id.l < 1 || id.l > 2)
                throw std::invalid_argument("system json: labels must be in {1,2}");
            s.vars.push_back(id);
        }
        int nv = static_cast<int>(s.vars.size());
        auto check_var = [&](int v) {
            if (v < 0 || v >= nv) throw std::invalid_argument("system json: var index out of range");
        };
        for (const json& r : j.at("equalities")) {
            LinRow row;
            for (const json& t : r) {
                if (!t.is_array() || t.size() != 2)
                    throw std::invalid_argument("system json: equality term must be [var, coeff]");
                int v = t[0].get<int>();
                check_var(v);
                row.terms.push_back({v, t[1].get<std::int64_t>()});
            }
            s.equalities.push_back(std::move(row));
        }
        for (const json& ss : j.at("strict_sums")) {
            std::vector<int> subset = ss.get<std::vector<int>>();
            if (subset.empty()) throw std::invalid_argument("system json: empty strict sum");
            for (int v : subset) check_var(v);
            s.strict_sums.push_back(std::move(subset));
        }
        for (const json& im : j.at("implications")) {
            expect_keys(im, {"trigger", "consequent"}, "implications");
            Implication imp;
            imp.trigger = im.at("trigger").get<int>();
            check_var(imp.trigger);
            imp.consequent = im.at("consequent").get<std::vector<int>>();
            if (imp.consequent.empty())
                throw std::invalid_argument("system json: empty consequent");
            for (int v : imp.consequent) check_var(v);
            s.implications.push_back(std::move(imp));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("system json: malformed: ") + e.what());
    }
    return s;
}

}  // namespace raag
