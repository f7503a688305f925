#include "raag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace raag {

namespace {

// Union-find with multiplicative weights: x_v = ratio[v] * x_root. Two-term
// equality rows merge classes; ratio conflicts, negative ratios and pins
// force whole classes to zero.
struct RatioUF {
    std::vector<int> parent;
    std::vector<Rational> ratio;
    std::vector<bool> zero;  // valid at roots

    explicit RatioUF(int n) : parent(n), ratio(n, Rational(1)), zero(n, false) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int v) {
        if (parent[v] == v) return v;
        int root = find(parent[v]);
        if (parent[v] != root) {
            ratio[v] *= ratio[parent[v]];
            parent[v] = root;
        }
        return root;
    }

    Rational ratio_to_root(int v) {
        find(v);
        return parent[v] == v ? Rational(1) : ratio[v];
    }

    bool is_zero(int v) { return zero[find(v)]; }

    bool force_zero(int v) {
        int root = find(v);
        if (zero[root]) return false;
        zero[root] = true;
        return true;
    }

    // impose x_u = c * x_w
    bool merge(int u, int w, const Rational& c) {
        int ru = find(u), rw = find(w);
        Rational qu = ratio_to_root(u), qw = ratio_to_root(w);
        if (ru == rw) {
            if (qu != c * qw) return force_zero(ru);
            return false;
        }
        bool was_zero = zero[ru] || zero[rw];
        parent[rw] = ru;
        ratio[rw] = qu / (c * qw);
        zero[ru] = zero[ru] || zero[rw];
        (void)was_zero;
        return true;
    }
};

struct Presolved {
    int nclasses = 0;
    std::vector<int> class_of;      // -1 when zero-forced
    std::vector<Rational> ratio;    // x_v = ratio[v] * x_class, positive
    std::vector<std::vector<std::pair<int, Rational>>> rows;  // over classes
};

// Exhausts the substitutions implied by two-term rows (the edge-reversal
// identifications and the corner relations), pins the inactive variables and
// returns the surviving rows over the live classes.
Presolved presolve(const LinearSystem& s, const Support& active) {
    int n = static_cast<int>(s.vars.size());
    RatioUF uf(n);
    for (int v = 0; v < n; ++v)
        if (!active[v]) uf.force_zero(v);

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& row : s.equalities) {
            std::map<int, Rational> acc;
            for (auto [v, c] : row.terms) {
                if (uf.is_zero(v)) continue;
                acc[uf.find(v)] += Rational(c) * uf.ratio_to_root(v);
            }
            std::vector<std::pair<int, Rational>> terms;
            for (auto& [root, c] : acc)
                if (c != 0) terms.push_back({root, c});
            if (terms.size() == 1)
                changed |= uf.force_zero(terms[0].first);
            else if (terms.size() == 2)
                // a x_r0 + b x_r1 = 0  =>  x_r0 = (-b/a) x_r1
                changed |= uf.merge(terms[0].first, terms[1].first,
                                    -terms[1].second / terms[0].second);
        }
        for (int v = 0; v < n; ++v)
            if (!uf.is_zero(v) && uf.ratio_to_root(v) < 0) changed |= uf.force_zero(v);
    }

    Presolved pre;
    pre.class_of.assign(n, -1);
    pre.ratio.assign(n, Rational(0));
    std::map<int, int> class_index;
    for (int v = 0; v < n; ++v) {
        if (uf.is_zero(v)) continue;
        int root = uf.find(v);
        auto [it, fresh] = class_index.insert({root, pre.nclasses});
        if (fresh) ++pre.nclasses;
        pre.class_of[v] = it->second;
        pre.ratio[v] = uf.ratio_to_root(v);
    }
    for (auto& row : s.equalities) {
        std::map<int, Rational> acc;
        for (auto [v, c] : row.terms) {
            if (uf.is_zero(v)) continue;
            acc[pre.class_of[v]] += Rational(c) * pre.ratio[v];
        }
        std::vector<std::pair<int, Rational>> terms;
        for (auto& [cls, c] : acc)
            if (c != 0) terms.push_back({cls, c});
        if (terms.size() >= 3) pre.rows.push_back(std::move(terms));
    }
    return pre;
}

}  // namespace

SupportResult maximal_support(const LinearSystem& s, const Support& active) {
    int n = static_cast<int>(s.vars.size());
    SupportResult out;
    out.support.assign(n, false);
    out.point.assign(n, Rational(0));

    Presolved pre = presolve(s, active);
    if (pre.nclasses == 0) return out;

    // normalization row: unit mass over the original live variables
    std::vector<Rational> class_mass(pre.nclasses, Rational(0));
    for (int v = 0; v < n; ++v)
        if (pre.class_of[v] >= 0) class_mass[pre.class_of[v]] += pre.ratio[v];

    std::vector<bool> in_support(pre.nclasses, false);
    std::vector<int> undetermined(pre.nclasses);
    std::iota(undetermined.begin(), undetermined.end(), 0);

    while (!undetermined.empty()) {
        LPProblem p = LPProblem::with_vars(pre.nclasses + 1);
        for (auto& row : pre.rows) {
            LPProblem::Row r;
            for (auto& [cls, c] : row) r.terms.push_back({cls, c});
            p.rows.push_back(std::move(r));
        }
        LPProblem::Row norm;
        for (int cls = 0; cls < pre.nclasses; ++cls) norm.terms.push_back({cls, class_mass[cls]});
        norm.terms.push_back({pre.nclasses, Rational(1)});
        norm.rhs = 1;
        p.rows.push_back(std::move(norm));

        auto res = lp_maximize_sum(p, undetermined);
        if (res.status != LpStatus::feasible)
            throw std::logic_error("maximal_support: zero point should be feasible");
        if (res.value == 0) break;
        for (int cls = 0; cls < pre.nclasses; ++cls)
            if (res.point[cls] > 0) in_support[cls] = true;
        for (int v = 0; v < n; ++v)
            if (pre.class_of[v] >= 0) out.point[v] += pre.ratio[v] * res.point[pre.class_of[v]];
        std::vector<int> next;
        for (int cls : undetermined)
            if (!in_support[cls]) next.push_back(cls);
        if (next.size() == undetermined.size())
            throw std::logic_error("maximal_support: no progress");
        undetermined = std::move(next);
    }
    for (int v = 0; v < n; ++v)
        if (pre.class_of[v] >= 0 && in_support[pre.class_of[v]]) out.support[v] = true;
    return out;
}

namespace {

// Equality rows with the pinned-to-zero variables' terms dropped; variables
// that appear in no row stay nonbasic at zero, so no explicit pin is needed.
LPProblem equalities_lp(const LinearSystem& s, const Support& active) {
    LPProblem p = LPProblem::with_vars(static_cast<int>(s.vars.size()));
    for (auto& row : s.equalities) {
        LPProblem::Row r;
        for (auto [v, c] : row.terms)
            if (active[v]) r.terms.push_back({v, Rational(c)});
        p.rows.push_back(std::move(r));
    }
    return p;
}

}  // namespace

namespace {

// small witness positive exactly on the support: a basic feasible point of
// the presolved class system with every surviving class bounded below by 1
std::vector<Rational> support_point(const LinearSystem& s, const Support& support) {
    int n = static_cast<int>(s.vars.size());
    std::vector<Rational> out(n, Rational(0));
    Presolved pre = presolve(s, support);
    if (pre.nclasses == 0) return out;
    LPProblem p = LPProblem::with_vars(pre.nclasses);
    for (auto& row : pre.rows) {
        LPProblem::Row r;
        for (auto& [cls, c] : row) r.terms.push_back({cls, c});
        p.rows.push_back(std::move(r));
    }
    for (auto& lo : p.lower) lo = 1;
    auto res = lp_feasible(p);
    if (res.status != LpStatus::feasible)
        throw std::logic_error("support_point: support admits no uniform point");
    for (int v = 0; v < n; ++v)
        if (pre.class_of[v] >= 0) out[v] = pre.ratio[v] * res.point[pre.class_of[v]];
    return out;
}

}  // namespace

SupportResult probe_support(const LinearSystem& s, const Support& active) {
    int n = static_cast<int>(s.vars.size());
    SupportResult out;
    out.support.assign(n, false);
    out.point.assign(n, Rational(0));
    for (int v = 0; v < n; ++v) {
        if (!active[v]) continue;
        LPProblem p = equalities_lp(s, active);
        p.lower[v] = 1;
        auto res = lp_feasible(p);
        if (res.status == LpStatus::feasible) {
            out.support[v] = true;
            for (int j = 0; j < n; ++j) out.point[j] += res.point[j];
        }
    }
    return out;
}

ComponentVerdict prune_fixpoint(const LinearSystem& s, PruneOrder order, unsigned seed) {
    int n = static_cast<int>(s.vars.size());
    ComponentVerdict cv;
    cv.component = s.component;
    Support active(n, true);
    std::mt19937 rng(seed);

    for (;;) {
        SupportResult sr = maximal_support(s, active);
        for (size_t i = 0; i < s.strict_sums.size(); ++i) {
            bool met = false;
            for (int v : s.strict_sums[i])
                if (sr.support[v]) {
                    met = true;
                    break;
                }
            if (!met) {
                cv.feasible = false;
                cv.violated_strict_sum = static_cast<int>(i);
                cv.support = std::move(sr.support);
                return cv;
            }
        }
        std::vector<int> firing;
        for (size_t i = 0; i < s.implications.size(); ++i) {
            const Implication& imp = s.implications[i];
            if (!sr.support[imp.trigger]) continue;
            bool met = false;
            for (int v : imp.consequent)
                if (sr.support[v]) {
                    met = true;
                    break;
                }
            if (!met) firing.push_back(static_cast<int>(i));
        }
        if (firing.empty()) {
            cv.feasible = true;
            cv.support = std::move(sr.support);
            cv.witness = scale_to_integers(support_point(s, cv.support));
            // homogeneity: divide out the common factor
            Integer g = 0;
            for (auto& x : cv.witness) g = gcd(g, x);
            if (g > 1)
                for (auto& x : cv.witness) x /= g;
            auto rep = check_assignment(s, cv.witness);
            if (!rep.ok()) throw std::logic_error("prune_fixpoint: witness failed re-check");
            return cv;
        }
        if (order == PruneOrder::single_random)
            std::shuffle(firing.begin(), firing.end(), rng);
        bool single = order != PruneOrder::batch;
        for (int i : firing) {
            int t = s.implications[i].trigger;
            if (!active[t]) continue;  // already pruned this round
            active[t] = false;
            cv.trace.push_back({t, i});
            if (single) break;
        }
    }
}

Verdict decide(const SystemBundle& b, PruneOrder order, unsigned seed) {
    Verdict v;
    for (int c = 1; c <= 2; ++c)
        v.components.push_back(prune_fixpoint(b.systems[c - 1], order, seed));
    for (auto& cv : v.components) {
        if (cv.feasible && !v.feasible) {
            v.feasible = true;
            v.feasible_component = cv.component;
        }
    }
    return v;
}

Verdict decide(const Tree& left, const Tree& right) {
    return decide(build_full_system(left, right));
}

namespace {

struct ReducedBrute {
    int classes = 0;
    std::vector<int> class_of_var;
    struct Row {
        std::vector<std::pair<int, long long>> terms;  // class, coeff
    };
    std::vector<Row> rows;
    std::vector<std::vector<int>> strict_sums;             // class sets
    std::vector<std::pair<int, std::vector<int>>> imps;    // trigger class, class set
};

// merge variables identified by two-term rows of the shape c*(x_a - x_b) = 0
ReducedBrute collapse_identified(const LinearSystem& s) {
    int n = static_cast<int>(s.vars.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& row : s.equalities) {
        if (row.terms.size() == 2 && row.terms[0].second == -row.terms[1].second) {
            int a = find(row.terms[0].first), b = find(row.terms[1].first);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    ReducedBrute rb;
    rb.class_of_var.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        int r = find(v);
        if (rb.class_of_var[r] < 0) rb.class_of_var[r] = rb.classes++;
        rb.class_of_var[v] = rb.class_of_var[r];
    }
    for (auto& row : s.equalities) {
        std::map<int, long long> acc;
        for (auto [v, c] : row.terms) acc[rb.class_of_var[v]] += c;
        ReducedBrute::Row r;
        for (auto [cls, c] : acc)
            if (c != 0) r.terms.push_back({cls, c});
        if (!r.terms.empty()) rb.rows.push_back(std::move(r));
    }
    auto to_classes = [&](const std::vector<int>& vars) {
        std::vector<int> cls;
        for (int v : vars) cls.push_back(rb.class_of_var[v]);
        std::sort(cls.begin(), cls.end());
        cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
        return cls;
    };
    for (auto& ss : s.strict_sums) rb.strict_sums.push_back(to_classes(ss));
    for (auto& imp : s.implications)
        rb.imps.push_back({rb.class_of_var[imp.trigger], to_classes(imp.consequent)});
    return rb;
}

}  // namespace

BruteResult brute_force_feasible(const LinearSystem& s, int bound) {
    if (bound < 0) throw std::invalid_argument("brute force: bound must be >= 0");
    ReducedBrute rb = collapse_identified(s);
    // raw-state budget; row propagation keeps the visited tree far smaller
    double states = std::pow(static_cast<double>(bound) + 1.0, rb.classes);
    if (states > std::pow(2.0, 51))
        throw std::invalid_argument("brute force: state guard exceeded");

    // static order: classes as they appear in the rows, stragglers afterwards
    std::vector<int> order;
    std::vector<bool> seen(rb.classes, false);
    for (auto& row : rb.rows)
        for (auto [cls, c] : row.terms) {
            (void)c;
            if (!seen[cls]) {
                seen[cls] = true;
                order.push_back(cls);
            }
        }
    for (int c = 0; c < rb.classes; ++c)
        if (!seen[c]) order.push_back(c);

    std::vector<std::vector<std::pair<int, long long>>> rows_of_class(rb.classes);
    for (size_t i = 0; i < rb.rows.size(); ++i)
        for (auto [cls, c] : rb.rows[i].terms) rows_of_class[cls].push_back({static_cast<int>(i), c});

    std::vector<long long> partial(rb.rows.size(), 0);
    std::vector<int> unassigned(rb.rows.size());
    for (size_t i = 0; i < rb.rows.size(); ++i)
        unassigned[i] = static_cast<int>(rb.rows[i].terms.size());
    std::vector<long long> value(rb.classes, -1);

    std::function<bool(int)> dfs = [&](int depth) -> bool {
        if (depth == rb.classes) {
            for (auto& ss : rb.strict_sums) {
                bool pos = false;
                for (int cls : ss)
                    if (value[cls] > 0) {
                        pos = true;
                        break;
                    }
                if (!pos) return false;
            }
            for (auto& [trig, cons] : rb.imps) {
                if (value[trig] <= 0) continue;
                bool pos = false;
                for (int cls : cons)
                    if (value[cls] > 0) {
                        pos = true;
                        break;
                    }
                if (!pos) return false;
            }
            return true;
        }
        // prefer a class whose row is one assignment away from closing
        int cls = -1;
        for (size_t i = 0; i < rb.rows.size() && cls < 0; ++i)
            if (unassigned[i] == 1)
                for (auto [c2, co] : rb.rows[i].terms) {
                    (void)co;
                    if (value[c2] < 0) {
                        cls = c2;
                        break;
                    }
                }
        if (cls < 0)
            for (int c2 : order)
                if (value[c2] < 0) {
                    cls = c2;
                    break;
                }

        for (long long val = 0; val <= bound; ++val) {
            value[cls] = val;
            bool ok = true;
            for (auto [row, coeff] : rows_of_class[cls]) {
                partial[row] += coeff * val;
                if (--unassigned[row] == 0 && partial[row] != 0) ok = false;
            }
            if (ok && dfs(depth + 1)) return true;
            for (auto [row, coeff] : rows_of_class[cls]) {
                partial[row] -= coeff * val;
                ++unassigned[row];
            }
            value[cls] = -1;
        }
        return false;
    };

    BruteResult res;
    if (dfs(0)) {
        res.feasible = true;
        for (int v = 0; v < static_cast<int>(s.vars.size()); ++v)
            res.witness.push_back(Integer(value[rb.class_of_var[v]]));
        auto rep = check_assignment(s, res.witness);
        if (!rep.ok()) throw std::logic_error("brute force: witness failed re-check");
    }
    return res;
}

namespace {

using json = nlohmann::ordered_json;

json varid_json(const LinearSystem& s, int var) {
    const VarId& v = s.vars[var];
    return {{"edge", v.edge}, {"k", v.k}, {"l", v.l}};
}

json integer_json(const Integer& v) {
    static const Integer kSafe = Integer(1) << 53;
    if (v < kSafe && v > -kSafe) return json(v.convert_to<long long>());
    return json(v.str());
}

}  // namespace

std::string verdict_json(const SystemBundle& b, const Verdict& v) {
    json j;
    j["verdict"] = v.feasible ? "feasible" : "infeasible";
    j["meaning"] = v.feasible ? "necessary_condition_passed" : "not_commensurable";
    json comps = json::array();
    for (auto& cv : v.components) {
        const LinearSystem& s = b.systems[cv.component - 1];
        json c;
        c["component"] = cv.component;
        c["result"] = cv.feasible ? "feasible" : "infeasible";
        json pruned = json::array();
        for (auto& ev : cv.trace) {
            json p = varid_json(s, ev.trigger);
            p["implication"] = ev.implication;
            pruned.push_back(std::move(p));
        }
        c["pruned"] = std::move(pruned);
        c["violated_strict_sum"] =
            cv.violated_strict_sum ? json(*cv.violated_strict_sum) : json(nullptr);
        comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);

    if (v.feasible) {
        const ComponentVerdict* win = nullptr;
        for (auto& cv : v.components)
            if (cv.component == v.feasible_component) win = &cv;
        const LinearSystem& s = b.systems[win->component - 1];
        json w;
        w["component"] = win->component;
        json values = json::array();
        for (size_t i = 0; i < win->witness.size(); ++i) {
            if (win->witness[i] == 0) continue;
            json entry = varid_json(s, static_cast<int>(i));
            entry["value"] = integer_json(win->witness[i]);
            values.push_back(std::move(entry));
        }
        w["values"] = std::move(values);
        j["witness"] = std::move(w);

        // support subgraph structure (reported, not enforced)
        std::vector<int> support_edges;
        for (size_t i = 0; i < win->witness.size(); ++i)
            if (win->witness[i] > 0) {
                int e = s.vars[i].edge;
                int u = std::min(e, b.product.edges[e].inv);
                support_edges.push_back(u);
            }
        std::sort(support_edges.begin(), support_edges.end());
        support_edges.erase(std::unique(support_edges.begin(), support_edges.end()),
                            support_edges.end());
        j["support_edges"] = support_edges;

        std::map<int, int> comp_of;  // union-find over support vertices
        std::function<int(int)> find = [&](int x) {
            while (comp_of[x] != x) x = comp_of[x] = comp_of[comp_of[x]];
            return x;
        };
        for (int e : support_edges) {
            int a = b.product.edges[e].src, c2 = b.product.edges[e].dst;
            if (!comp_of.count(a)) comp_of[a] = a;
            if (!comp_of.count(c2)) comp_of[c2] = c2;
            comp_of[find(a)] = find(c2);
        }
        std::set<int> roots;
        for (auto& [x, p] : comp_of) {
            (void)p;
            roots.insert(find(x));
        }
        j["support_component_count"] = static_cast<int>(roots.size());
        j["support_connected"] = roots.size() <= 1;
    } else {
        j["witness"] = nullptr;
        j["support_edges"] = json::array();
    }
    return j.dump(1);
}

}  // namespace raag
