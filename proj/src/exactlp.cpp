#include "raag/exactlp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace raag {

LPProblem LPProblem::with_vars(int n) {
    LPProblem p;
    p.n = n;
    p.lower.assign(n, Rational(0));
    p.upper.assign(n, std::nullopt);
    return p;
}

namespace {

// Dense simplex tableau over exact rationals. Columns: the shifted structural
// variables, then one slack per upper bound, then one artificial per row.
struct Tableau {
    int m = 0;
    int cols = 0;      // structural + slack columns
    int art_begin = 0;  // == cols; artificials are [cols, cols+m)
    int width = 0;      // cols + artificials + 1, fixed even when rows get dropped
    std::vector<std::vector<Rational>> row;  // each of size `width`, last = rhs
    std::vector<Rational> obj;               // reduced costs, last = -(objective value)
    std::vector<int> basis;

    Rational& rhs(int r) { return row[r].back(); }

    void pivot(int r, int c) {
        Rational piv = row[r][c];
        for (auto& v : row[r]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == r || row[i][c] == 0) continue;
            Rational f = row[i][c];
            for (size_t j = 0; j < row[i].size(); ++j) row[i][j] -= f * row[r][j];
        }
        if (obj[c] != 0) {
            Rational f = obj[c];
            for (size_t j = 0; j < obj.size(); ++j) obj[j] -= f * row[r][j];
        }
        basis[r] = c;
    }

    // Bland's rule: entering = lowest eligible column, leaving = lowest basis
    // index among the ratio-test minimizers. Returns false on unboundedness.
    bool simplex_min(int enter_limit) {
        for (;;) {
            int enter = -1;
            for (int c = 0; c < enter_limit; ++c)
                if (obj[c] < 0) {
                    enter = c;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rational best;
            for (int r = 0; r < m; ++r) {
                if (row[r][enter] <= 0) continue;
                Rational ratio = rhs(r) / row[r][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

struct StandardForm {
    Tableau tab;
    std::vector<Rational> shift;  // x = y + shift
    bool trivially_infeasible = false;
};

StandardForm to_standard(const LPProblem& p) {
    StandardForm sf;
    sf.shift = p.lower;
    int slacks = 0;
    for (int j = 0; j < p.n; ++j)
        if (p.upper[j]) {
            if (*p.upper[j] < p.lower[j]) {
                sf.trivially_infeasible = true;
                return sf;
            }
            ++slacks;
        }
    int m = static_cast<int>(p.rows.size()) + slacks;
    int cols = p.n + slacks;
    Tableau& t = sf.tab;
    t.m = m;
    t.cols = cols;
    t.art_begin = cols;
    t.width = cols + m + 1;
    t.row.assign(m, std::vector<Rational>(t.width, Rational(0)));
    t.basis.resize(m);

    int r = 0;
    for (auto& pr : p.rows) {
        Rational b = pr.rhs;
        for (auto& [j, a] : pr.terms) {
            t.row[r][j] += a;
            b -= a * p.lower[j];
        }
        t.rhs(r) = b;
        ++r;
    }
    int s = p.n;
    for (int j = 0; j < p.n; ++j) {
        if (!p.upper[j]) continue;
        t.row[r][j] = 1;
        t.row[r][s] = 1;
        t.rhs(r) = *p.upper[j] - p.lower[j];
        ++s;
        ++r;
    }
    for (int i = 0; i < m; ++i) {
        if (t.rhs(i) < 0)
            for (auto& v : t.row[i]) v = -v;
        t.row[i][cols + i] = 1;
        t.basis[i] = cols + i;
    }
    // phase-1 reduced costs for min(sum of artificials) with artificial basis
    t.obj.assign(cols + m + 1, Rational(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= cols + m; ++j)
            if (j < cols || j == cols + m) t.obj[j] -= t.row[i][j];
    // artificial columns keep reduced cost 0 at the start
    for (int i = 0; i < m; ++i) t.obj[cols + i] = 0;
    return sf;
}

std::vector<Rational> extract_point(const LPProblem& p, const Tableau& t,
                                    const std::vector<Rational>& shift) {
    std::vector<Rational> x(shift.begin(), shift.end());
    for (int r = 0; r < t.m; ++r)
        if (t.basis[r] < p.n) x[t.basis[r]] += t.row[r].back();
    return x;
}

void verify_point(const LPProblem& p, const std::vector<Rational>& x) {
    for (auto& pr : p.rows) {
        Rational sum = 0;
        for (auto& [j, a] : pr.terms) sum += a * x[j];
        if (sum != pr.rhs) throw std::logic_error("lp: returned point violates an equality");
    }
    for (int j = 0; j < p.n; ++j) {
        if (x[j] < p.lower[j]) throw std::logic_error("lp: returned point violates a lower bound");
        if (p.upper[j] && x[j] > *p.upper[j])
            throw std::logic_error("lp: returned point violates an upper bound");
    }
}

void check_problem(const LPProblem& p) {
    if (static_cast<int>(p.lower.size()) != p.n || static_cast<int>(p.upper.size()) != p.n)
        throw std::invalid_argument("lp: bound vectors must have size n");
    for (auto& r : p.rows)
        for (auto& [j, a] : r.terms) {
            (void)a;
            if (j < 0 || j >= p.n) throw std::invalid_argument("lp: term index out of range");
        }
}

}  // namespace

LpResult lp_feasible(const LPProblem& p) {
    check_problem(p);
    StandardForm sf = to_standard(p);
    if (sf.trivially_infeasible) return {LpStatus::infeasible, {}};
    if (!sf.tab.simplex_min(sf.tab.cols))
        throw std::logic_error("lp: phase 1 unbounded");
    if (sf.tab.obj.back() != 0) return {LpStatus::infeasible, {}};
    auto x = extract_point(p, sf.tab, sf.shift);
    verify_point(p, x);
    return {LpStatus::feasible, std::move(x)};
}

LpOptResult lp_maximize_sum(const LPProblem& p, const std::vector<int>& objective) {
    check_problem(p);
    StandardForm sf = to_standard(p);
    if (sf.trivially_infeasible) return {LpStatus::infeasible, 0, {}};
    Tableau& t = sf.tab;
    if (!t.simplex_min(t.cols)) throw std::logic_error("lp: phase 1 unbounded");
    if (t.obj.back() != 0) return {LpStatus::infeasible, 0, {}};

    // drive leftover artificials out of the basis; drop dependent rows
    for (int r = 0; r < t.m;) {
        if (t.basis[r] < t.art_begin) {
            ++r;
            continue;
        }
        int c = 0;
        while (c < t.cols && t.row[r][c] == 0) ++c;
        if (c < t.cols) {
            t.pivot(r, c);
            ++r;
        } else {
            t.row.erase(t.row.begin() + r);
            t.basis.erase(t.basis.begin() + r);
            --t.m;
        }
    }

    // phase 2: min -(sum of the objective variables)
    std::vector<bool> in_obj(p.n, false);
    for (int j : objective) in_obj[j] = true;
    t.obj.assign(t.width, Rational(0));
    for (int j = 0; j < p.n; ++j)
        if (in_obj[j]) t.obj[j] = -1;
    for (int r = 0; r < t.m; ++r) {
        int b = t.basis[r];
        Rational cb = (b < p.n && in_obj[b]) ? Rational(-1) : Rational(0);
        if (cb == 0) continue;
        for (size_t j = 0; j < t.obj.size(); ++j) t.obj[j] -= cb * t.row[r][j];
    }
    // artificial columns must never re-enter
    if (!t.simplex_min(t.art_begin)) throw std::runtime_error("lp: phase 2 unbounded");

    auto x = extract_point(p, t, sf.shift);
    verify_point(p, x);
    Rational value = 0;
    for (int j : objective) value += x[j];
    return {LpStatus::feasible, value, std::move(x)};
}

namespace {

using FmRow = std::vector<Rational>;  // n coefficients then rhs, meaning sum <= rhs

void normalize(FmRow& r) {
    for (size_t j = 0; j + 1 < r.size(); ++j) {
        if (r[j] != 0) {
            Rational lead = abs(r[j]);
            for (auto& v : r) v /= lead;
            return;
        }
    }
}

}  // namespace

LpStatus fm_feasible(const LPProblem& p) {
    check_problem(p);
    if (p.n > 24) throw std::invalid_argument("fm: more than 24 variables");
    constexpr size_t kRowGuard = 200000;

    std::vector<FmRow> rows;
    auto push = [&](const FmRow& r) { rows.push_back(r); };
    for (auto& pr : p.rows) {
        FmRow le(p.n + 1, Rational(0)), ge(p.n + 1, Rational(0));
        for (auto& [j, a] : pr.terms) {
            le[j] += a;
            ge[j] -= a;
        }
        le[p.n] = pr.rhs;
        ge[p.n] = -pr.rhs;
        push(le);
        push(ge);
    }
    for (int j = 0; j < p.n; ++j) {
        FmRow lo(p.n + 1, Rational(0));
        lo[j] = -1;
        lo[p.n] = -p.lower[j];
        push(lo);
        if (p.upper[j]) {
            FmRow up(p.n + 1, Rational(0));
            up[j] = 1;
            up[p.n] = *p.upper[j];
            push(up);
        }
    }

    std::vector<bool> eliminated(p.n, false);
    for (int round = 0; round < p.n; ++round) {
        // greedy order: the variable generating the fewest combined rows next
        int v = -1;
        long long best = -1;
        for (int cand = 0; cand < p.n; ++cand) {
            if (eliminated[cand]) continue;
            long long np = 0, nn = 0;
            for (auto& r : rows) {
                if (r[cand] > 0) ++np;
                if (r[cand] < 0) ++nn;
            }
            long long score = np * nn;
            if (v < 0 || score < best) {
                v = cand;
                best = score;
            }
        }
        eliminated[v] = true;
        std::vector<FmRow> pos, neg, rest;
        for (auto& r : rows) {
            if (r[v] > 0)
                pos.push_back(r);
            else if (r[v] < 0)
                neg.push_back(r);
            else
                rest.push_back(r);
        }
        auto is_constant = [&](const FmRow& r) {
            for (int j = 0; j < p.n; ++j)
                if (r[j] != 0) return false;
            return true;
        };
        std::set<FmRow> dedup;
        auto add = [&](FmRow c) -> bool {  // false on proven infeasibility
            if (is_constant(c)) return c[p.n] >= 0;
            normalize(c);
            dedup.insert(std::move(c));
            if (dedup.size() > kRowGuard) throw std::runtime_error("fm: row blowup");
            return true;
        };
        for (auto& r : rest)
            if (!add(r)) return LpStatus::infeasible;
        for (auto& pr : pos)
            for (auto& nr : neg) {
                FmRow c(p.n + 1);
                // pr scaled by -nr[v] > 0 plus nr scaled by pr[v] > 0
                for (int j = 0; j <= p.n; ++j) c[j] = -nr[v] * pr[j] + pr[v] * nr[j];
                if (!add(std::move(c))) return LpStatus::infeasible;
            }
        rows.assign(dedup.begin(), dedup.end());
    }

    for (auto& r : rows)
        if (r[p.n] < 0) return LpStatus::infeasible;
    return LpStatus::feasible;
}

std::vector<Integer> scale_to_integers(const std::vector<Rational>& x) {
    Integer l = 1;
    for (auto& v : x) l = lcm(l, Integer(denominator(v)));
    std::vector<Integer> out;
    out.reserve(x.size());
    for (auto& v : x) out.push_back(Integer(numerator(v)) * (l / Integer(denominator(v))));
    return out;
}

}  // namespace raag
