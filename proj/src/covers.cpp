#include "raag/covers.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace raag {

int CoverGraph::letter_index(const std::string& name) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<int>(i);
    return -1;
}

int cycle_length(const CoverGraph& c, int letter, int vertex) {
    if (letter < 0 || letter >= static_cast<int>(c.alphabet.size()))
        throw std::invalid_argument("cover: unknown letter");
    int len = 1;
    for (int v = c.step(vertex, letter); v != vertex; v = c.step(v, letter)) ++len;
    return len;
}

std::vector<int> cycle_vertices(const CoverGraph& c, int letter, int vertex) {
    std::vector<int> out{vertex};
    for (int v = c.step(vertex, letter); v != vertex; v = c.step(v, letter)) out.push_back(v);
    return out;
}

std::map<int, int> cycle_census(const CoverGraph& c, int letter) {
    std::map<int, int> census;
    std::vector<bool> done(c.n, false);
    for (int v = 0; v < c.n; ++v) {
        if (done[v]) continue;
        auto cyc = cycle_vertices(c, letter, v);
        for (int w : cyc) done[w] = true;
        ++census[static_cast<int>(cyc.size())];
    }
    return census;
}

std::vector<std::vector<int>> label_subgraph_components(const CoverGraph& c,
                                                        const std::vector<int>& letters) {
    std::vector<int> parent(c.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int>* pp = &parent;
    std::function<int(int)> find = [pp](int x) {
        auto& par = *pp;
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
    };
    for (int letter : letters) {
        if (letter < 0 || letter >= static_cast<int>(c.alphabet.size()))
            throw std::invalid_argument("cover: unknown letter");
        for (int v = 0; v < c.n; ++v) {
            int a = find(v), b = find(c.step(v, letter));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<int>> buckets;
    for (int v = 0; v < c.n; ++v) buckets[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [root, verts] : buckets) {
        (void)root;
        out.push_back(verts);
    }
    return out;
}

CoverGraph build_cover_S(int k) {
    if (k < 1) throw std::invalid_argument("cover S: need k >= 1");
    int n = k * (k + 1);
    CoverGraph c;
    c.n = n;
    c.basepoint = 0;
    c.alphabet = {"a1", "e1"};
    c.perm.assign(2, std::vector<int>(n, -1));
    c.vertex_names.assign(n, "");

    // id layout: basepoint 0 = B[1][1]; A[1..k]; C[i][1..k-i] for i=1..k-1;
    // B[i][1..i] for i=2..k-1; D[1..k]
    int next = 1;
    std::vector<int> A(k + 1);
    std::vector<std::vector<int>> C(k), B(k);
    std::vector<int> D(k + 1);
    c.vertex_names[0] = "B1,1";
    for (int j = 1; j <= k; ++j) {
        A[j] = next++;
        c.vertex_names[A[j]] = "A" + std::to_string(j);
    }
    for (int i = 1; i <= k - 1; ++i) {
        C[i].assign(k - i + 1, -1);
        for (int j = 1; j <= k - i; ++j) {
            C[i][j] = next++;
            c.vertex_names[C[i][j]] = "C" + std::to_string(i) + "," + std::to_string(j);
        }
    }
    for (int i = 2; i <= k - 1; ++i) {
        B[i].assign(i + 1, -1);
        for (int j = 1; j <= i; ++j) {
            B[i][j] = next++;
            c.vertex_names[B[i][j]] = "B" + std::to_string(i) + "," + std::to_string(j);
        }
    }
    if (k >= 2) {
        for (int j = 1; j <= k; ++j) {
            D[j] = next++;
            c.vertex_names[D[j]] = "D" + std::to_string(j);
        }
    }
    if (next != n) throw std::logic_error("cover S: vertex count mismatch");

    auto& a1 = c.perm[0];
    auto& e1 = c.perm[1];

    // a1-cycle P1 through the basepoint
    a1[0] = A[1];
    for (int j = 1; j < k; ++j) a1[A[j]] = A[j + 1];
    a1[A[k]] = 0;
    // a1-cycles P_i, 2 <= i <= k-1: ascend through B[i], descend through C[i-1]
    for (int i = 2; i <= k - 1; ++i) {
        a1[C[i - 1][1]] = B[i][1];
        for (int j = 1; j < i; ++j) a1[B[i][j]] = B[i][j + 1];
        a1[B[i][i]] = C[i - 1][k - i + 1];
        for (int j = k - i + 1; j >= 2; --j) a1[C[i - 1][j]] = C[i - 1][j - 1];
    }
    // a1-cycle P_k through D (for k = 1 it coincides with P1)
    if (k >= 2) {
        a1[C[k - 1][1]] = D[1];
        for (int j = 1; j < k; ++j) a1[D[j]] = D[j + 1];
        a1[D[k]] = C[k - 1][1];
    }

    // e1-cycles Q_i: ascend through C[i], descend through B[i]
    for (int i = 1; i <= k - 1; ++i) {
        int bi1 = (i == 1) ? 0 : B[i][1];
        e1[bi1] = C[i][1];
        for (int j = 1; j < k - i; ++j) e1[C[i][j]] = C[i][j + 1];
        int last = (i == 1) ? 0 : B[i][i];
        e1[C[i][k - i]] = last;
        for (int j = i; j >= 2; --j) e1[B[i][j]] = B[i][j - 1];
    }
    // e1-loops on P1 and P_k away from the gluing
    for (int j = 1; j <= k; ++j) e1[A[j]] = A[j];
    if (k >= 2) {
        for (int j = 1; j <= k; ++j) e1[D[j]] = D[j];
    } else {
        // degenerate completion: the construction leaves the basepoint
        // without an e1-edge when k = 1
        e1[0] = 0;
    }
    for (int v = 0; v < n; ++v)
        if (a1[v] < 0 || e1[v] < 0) throw std::logic_error("cover S: incomplete permutation");
    return c;
}

ZCover build_cover_Z(int k) {
    if (k < 1) throw std::invalid_argument("cover Z: need k >= 1");
    int n = k * (k + 1);
    CoverGraph c;
    c.n = n;
    c.basepoint = 0;
    for (int i = 1; i <= k; ++i) c.alphabet.push_back("C" + std::to_string(i));
    for (int i = 1; i <= k; ++i) c.alphabet.push_back("C" + std::to_string(i) + "'");
    c.perm.assign(2 * k, std::vector<int>(n, -1));

    auto master = [&](std::vector<int>& p) {
        for (int v = 0; v < n; ++v) p[v] = (v + 1) % n;
    };
    auto step_k = [&](std::vector<int>& p) {
        for (int v = 0; v < n; ++v) p[v] = (v + k) % n;
    };
    auto letter_c = [&](int i) { return i - 1; };
    auto letter_cp = [&](int i) { return k + i - 1; };

    step_k(c.perm[letter_c(1)]);    // C1: k cycles of length k+1
    master(c.perm[letter_c(k)]);    // Ck: one full cycle
    master(c.perm[letter_cp(1)]);   // C1': one full cycle
    step_k(c.perm[letter_cp(k)]);   // Ck': k cycles of length k+1
    if (k == 1) return {c, alpha_beta(c, k)};

    // loops greedily at the lowest non-basepoint vertex without one; one loop
    // per vertex keeps the two-letter subgraphs connected
    int next_loop = 1;
    auto threaded = [&](std::vector<int>& p, int loops) {
        std::vector<bool> is_loop(n, false);
        for (int t = 0; t < loops; ++t) {
            p[next_loop] = next_loop;
            is_loop[next_loop] = true;
            ++next_loop;
        }
        std::vector<int> live;
        for (int v = 0; v < n; ++v)
            if (!is_loop[v]) live.push_back(v);
        for (size_t i = 0; i < live.size(); ++i) p[live[i]] = live[(i + 1) % live.size()];
    };
    for (int i = 2; i <= k - 1; ++i) threaded(c.perm[letter_c(i)], k - i);
    for (int i = 2; i <= k - 1; ++i) threaded(c.perm[letter_cp(i)], i - 1);
    return {c, alpha_beta(c, k)};
}

AlphaBeta alpha_beta(const CoverGraph& z, int k) {
    AlphaBeta ab;
    ab.k = k;
    int n = z.n;
    auto loops_of = [&](int letter) {
        std::set<int> out;
        for (int v = 0; v < n; ++v)
            if (z.step(v, letter) == v) out.insert(v);
        return out;
    };
    // walk distances from the basepoint along `walk_letter` to each loop vertex
    auto distances = [&](int walk_letter, const std::set<int>& targets) {
        std::vector<int> out;
        int v = z.basepoint;
        for (int d = 1; d <= n && out.size() < targets.size(); ++d) {
            v = z.step(v, walk_letter);
            if (targets.count(v)) out.push_back(d);
        }
        if (out.size() != targets.size())
            throw std::runtime_error("alpha_beta: loop vertex unreachable from basepoint");
        return out;
    };
    auto letter_c = [&](int i) { return i - 1; };
    auto letter_cp = [&](int i) { return k + i - 1; };
    for (int i = 2; i <= k - 1; ++i) {
        ab.alpha[i] = distances(letter_cp(i - 1), loops_of(letter_c(i)));
        ab.beta[i] = distances(letter_c(i), loops_of(letter_cp(i)));
        ab.alpha_prime[i] = distances(letter_c(i), loops_of(letter_cp(i - 1)));
        ab.beta_prime[i] = distances(letter_cp(i), loops_of(letter_c(i)));
    }
    return ab;
}

ValidationReport validate_cover(const CoverGraph& c) {
    ValidationReport rep;
    if (c.n < 1) rep.violations.push_back("empty vertex set");
    if (c.basepoint < 0 || c.basepoint >= c.n) rep.violations.push_back("basepoint out of range");
    if (c.perm.size() != c.alphabet.size())
        rep.violations.push_back("permutation count differs from alphabet size");
    for (size_t l = 0; l < c.perm.size(); ++l) {
        if (static_cast<int>(c.perm[l].size()) != c.n) {
            rep.violations.push_back("letter " + c.alphabet[l] + ": wrong permutation size");
            continue;
        }
        std::vector<bool> hit(c.n, false);
        for (int v = 0; v < c.n; ++v) {
            int w = c.perm[l][v];
            if (w < 0 || w >= c.n || hit[w]) {
                rep.violations.push_back("letter " + c.alphabet[l] + ": not a bijection");
                break;
            }
            hit[w] = true;
        }
    }
    if (rep.ok()) {
        std::vector<int> all(c.alphabet.size());
        std::iota(all.begin(), all.end(), 0);
        if (label_subgraph_components(c, all).size() != 1)
            rep.violations.push_back("cover graph not connected");
    }
    return rep;
}

namespace {

void expect_census(ValidationReport& rep, const CoverGraph& c, int letter,
                   const std::map<int, int>& want, const std::string& what) {
    auto got = cycle_census(c, letter);
    if (got != want) {
        std::ostringstream msg;
        msg << what << ": cycle census mismatch, got {";
        for (auto [len, cnt] : got) msg << " " << cnt << "x" << len;
        msg << " } want {";
        for (auto [len, cnt] : want) msg << " " << cnt << "x" << len;
        msg << " }";
        rep.violations.push_back(msg.str());
    }
}

// shared vertices must appear in opposite cyclic order on the two cycles
bool opposite_cyclic_order(const std::vector<int>& cyc_a, const std::vector<int>& cyc_b,
                           const std::set<int>& shared) {
    std::vector<int> in_a, in_b;
    for (int v : cyc_a)
        if (shared.count(v)) in_a.push_back(v);
    for (int v : cyc_b)
        if (shared.count(v)) in_b.push_back(v);
    if (in_a.size() != in_b.size()) return false;
    size_t s = in_a.size();
    if (s <= 2) return true;
    std::reverse(in_b.begin(), in_b.end());
    for (size_t shift = 0; shift < s; ++shift) {
        bool match = true;
        for (size_t i = 0; i < s && match; ++i)
            if (in_a[i] != in_b[(i + shift) % s]) match = false;
        if (match) return true;
    }
    return false;
}

}  // namespace

ValidationReport validate_cover_S(const CoverGraph& c, int k) {
    ValidationReport rep = validate_cover(c);
    if (!rep.ok()) return rep;
    if (c.n != k * (k + 1)) rep.violations.push_back("vertex count is not k(k+1)");
    int a1 = c.letter_index("a1"), e1 = c.letter_index("e1");
    if (a1 < 0 || e1 < 0) {
        rep.violations.push_back("alphabet must be {a1, e1}");
        return rep;
    }
    expect_census(rep, c, a1, {{k + 1, k}}, "a1");
    if (k == 1) {
        rep.degenerate = true;
        expect_census(rep, c, e1, {{1, 2}}, "e1");
        return rep;
    }
    std::map<int, int> e1_want{{1, 2 * k}};
    if (k >= 2) e1_want[k] += k - 1;
    expect_census(rep, c, e1, e1_want, "e1");

    // loops must sit on exactly two a1-cycles (P1 and Pk), covering all
    // vertices of each except one
    std::set<int> loop_vs;
    for (int v = 0; v < c.n; ++v)
        if (c.step(v, e1) == v) loop_vs.insert(v);
    if (!loop_vs.empty()) {
        std::set<std::vector<int>> loop_cycles;
        for (int v : loop_vs) {
            auto cyc = cycle_vertices(c, a1, v);
            std::sort(cyc.begin(), cyc.end());
            loop_cycles.insert(cyc);
        }
        if (loop_cycles.size() != 2)
            rep.violations.push_back("e1-loops must lie on exactly two a1-cycles");
        for (auto& cyc : loop_cycles) {
            int misses = 0;
            for (int v : cyc)
                if (!loop_vs.count(v)) ++misses;
            if (misses != 1)
                rep.violations.push_back("an end a1-cycle must carry loops on all but one vertex");
        }
        auto base_cycle = cycle_vertices(c, a1, c.basepoint);
        std::sort(base_cycle.begin(), base_cycle.end());
        if (!loop_cycles.count(base_cycle))
            rep.violations.push_back("the basepoint a1-cycle must carry the P1 loops");
        if (loop_vs.count(c.basepoint))
            rep.violations.push_back("basepoint must not carry an e1-loop");
    }

    // consecutive cycles share the right number of vertices, in opposite order
    std::vector<std::vector<int>> a_cycles, e_cycles;
    {
        auto chain_cycles = [&](int letter, int min_len) {
            std::vector<std::vector<int>> out;
            std::vector<bool> done(c.n, false);
            for (int v = 0; v < c.n; ++v) {
                if (done[v]) continue;
                auto cyc = cycle_vertices(c, letter, v);
                for (int w : cyc) done[w] = true;
                if (static_cast<int>(cyc.size()) >= min_len) out.push_back(cyc);
            }
            return out;
        };
        a_cycles = chain_cycles(a1, 2);
        e_cycles = chain_cycles(e1, 2);
    }
    if (static_cast<int>(a_cycles.size()) == k && static_cast<int>(e_cycles.size()) == k - 1) {
        // order the P-cycles along the chain starting from the basepoint
        auto vertex_sets = [&](const std::vector<std::vector<int>>& cycles) {
            std::vector<std::set<int>> out;
            for (auto& cyc : cycles) out.emplace_back(cyc.begin(), cyc.end());
            return out;
        };
        auto pa = vertex_sets(a_cycles), qe = vertex_sets(e_cycles);
        std::vector<int> p_order, q_order;
        std::vector<bool> p_used(pa.size(), false), q_used(qe.size(), false);
        int cur = -1;
        for (size_t i = 0; i < pa.size(); ++i)
            if (pa[i].count(c.basepoint)) cur = static_cast<int>(i);
        for (int step = 0; step < k && cur >= 0; ++step) {
            p_order.push_back(cur);
            p_used[cur] = true;
            int nxt = -1;
            for (size_t j = 0; j < qe.size(); ++j) {
                if (q_used[j]) continue;
                for (int v : pa[cur])
                    if (qe[j].count(v)) nxt = static_cast<int>(j);
            }
            if (nxt < 0) break;
            q_order.push_back(nxt);
            q_used[nxt] = true;
            cur = -1;
            for (size_t i = 0; i < pa.size(); ++i) {
                if (p_used[i]) continue;
                for (int v : qe[q_order.back()])
                    if (pa[i].count(v)) cur = static_cast<int>(i);
            }
        }
        if (static_cast<int>(p_order.size()) != k ||
            static_cast<int>(q_order.size()) != k - 1) {
            rep.violations.push_back("P/Q cycles do not form the expected chain");
        } else {
            for (int i = 1; i <= k - 1; ++i) {
                auto& qi = qe[q_order[i - 1]];
                auto& pi = pa[p_order[i - 1]];
                auto& pnext = pa[p_order[i]];
                std::set<int> pi_qi, qi_pnext;
                for (int v : qi) {
                    if (pi.count(v)) pi_qi.insert(v);
                    if (pnext.count(v)) qi_pnext.insert(v);
                }
                if (static_cast<int>(pi_qi.size()) != i)
                    rep.violations.push_back("overlap |P_i ∩ Q_i| != i at i=" + std::to_string(i));
                if (static_cast<int>(qi_pnext.size()) != k - i)
                    rep.violations.push_back("overlap |Q_i ∩ P_{i+1}| != k-i at i=" +
                                             std::to_string(i));
                if (!opposite_cyclic_order(a_cycles[p_order[i - 1]], e_cycles[q_order[i - 1]],
                                           pi_qi))
                    rep.violations.push_back("P_i/Q_i overlap not in opposite order at i=" +
                                             std::to_string(i));
                if (!opposite_cyclic_order(e_cycles[q_order[i - 1]], a_cycles[p_order[i]],
                                           qi_pnext))
                    rep.violations.push_back("Q_i/P_{i+1} overlap not in opposite order at i=" +
                                             std::to_string(i));
            }
        }
    } else if (k >= 2) {
        rep.violations.push_back("wrong number of long a1/e1 cycles");
    }
    return rep;
}

ValidationReport validate_cover_Z(const CoverGraph& c, int k) {
    ValidationReport rep = validate_cover(c);
    if (!rep.ok()) return rep;
    int n = k * (k + 1);
    if (c.n != n) rep.violations.push_back("vertex count is not k(k+1)");
    if (static_cast<int>(c.alphabet.size()) != 2 * k)
        rep.violations.push_back("alphabet must be C1..Ck, C1'..Ck'");
    if (k == 1) rep.degenerate = true;
    auto letter_c = [&](int i) { return c.letter_index("C" + std::to_string(i)); };
    auto letter_cp = [&](int i) { return c.letter_index("C" + std::to_string(i) + "'"); };

    for (int i = 1; i <= k; ++i) {
        std::map<int, int> want_c, want_cp;
        if (i == 1) {
            want_c = {{k + 1, k}};
        } else {
            want_c = {{n - (k - i), 1}};
            if (k - i > 0) want_c[1] += k - i;
        }
        if (i == k) {
            want_cp = {{k + 1, k}};
        } else {
            want_cp = {{n - (i - 1), 1}};
            if (i - 1 > 0) want_cp[1] += i - 1;
        }
        expect_census(rep, c, letter_c(i), want_c, "C" + std::to_string(i));
        expect_census(rep, c, letter_cp(i), want_cp, "C" + std::to_string(i) + "'");
    }

    int base_loops = 0, multi_loop_vertices = 0;
    std::vector<int> loops_at(c.n, 0);
    for (size_t l = 0; l < c.perm.size(); ++l)
        for (int v = 0; v < c.n; ++v)
            if (c.perm[l][v] == v) ++loops_at[v];
    for (int v = 0; v < c.n; ++v) {
        if (v == c.basepoint) base_loops = loops_at[v];
        if (loops_at[v] > 1) ++multi_loop_vertices;
    }
    if (base_loops > 0) rep.violations.push_back("loops at the basepoint");
    if (multi_loop_vertices > 0) rep.violations.push_back("a vertex carries more than one loop");

    for (int i = 1; i <= k; ++i)
        if (label_subgraph_components(c, {letter_c(i), letter_cp(i)}).size() != 1)
            rep.violations.push_back("{C" + std::to_string(i) + ", C" + std::to_string(i) +
                                     "'} subgraph not connected");
    for (int i = 2; i <= k; ++i)
        if (label_subgraph_components(c, {letter_cp(i - 1), letter_c(i)}).size() != 1)
            rep.violations.push_back("{C" + std::to_string(i - 1) + "', C" + std::to_string(i) +
                                     "} subgraph not connected");

    // C1'^j readings land on pairwise distinct C1-cycles; dually for Ck/Ck'
    auto distinct_cycles = [&](int walk, int cyc_letter) {
        std::set<std::vector<int>> cycles;
        int v = c.basepoint;
        for (int j = 0; j < k; ++j) {
            auto cyc = cycle_vertices(c, cyc_letter, v);
            std::sort(cyc.begin(), cyc.end());
            cycles.insert(cyc);
            v = c.step(v, walk);
        }
        return static_cast<int>(cycles.size()) == k;
    };
    if (!distinct_cycles(letter_cp(1), letter_c(1)))
        rep.violations.push_back("C1'^j readings do not hit k distinct C1-cycles");
    if (!distinct_cycles(letter_c(k), letter_cp(k)))
        rep.violations.push_back("Ck^j readings do not hit k distinct Ck'-cycles");
    return rep;
}

namespace {
using json = nlohmann::ordered_json;
}

std::string cover_json(const CoverGraph& c) {
    json j;
    j["vertices"] = c.n;
    j["basepoint"] = c.basepoint;
    j["alphabet"] = c.alphabet;
    json perms = json::object();
    for (size_t l = 0; l < c.alphabet.size(); ++l) perms[c.alphabet[l]] = c.perm[l];
    j["perms"] = std::move(perms);
    return j.dump(1);
}

CoverGraph cover_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("cover json: malformed: ") + e.what());
    }
    CoverGraph c;
    try {
        c.n = j.at("vertices").get<int>();
        c.basepoint = j.at("basepoint").get<int>();
        c.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        for (auto& name : c.alphabet) c.perm.push_back(j.at("perms").at(name).get<std::vector<int>>());
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("cover json: malformed: ") + e.what());
    }
    auto rep = validate_cover(c);
    if (!rep.ok()) throw std::invalid_argument("cover json: " + rep.violations.front());
    return c;
}

std::string cover_dot(const CoverGraph& c) {
    static const char* colors[] = {"red",    "blue",  "green", "brown",
                                   "gray",   "purple", "orange", "cyan",
                                   "magenta", "olive"};
    std::ostringstream out;
    out << "digraph cover {\n";
    for (int v = 0; v < c.n; ++v) {
        out << "  v" << v << " [label=\""
            << (c.vertex_names.empty() || c.vertex_names[v].empty() ? std::to_string(v)
                                                                    : c.vertex_names[v])
            << (v == c.basepoint ? "*" : "") << "\"];\n";
    }
    for (size_t l = 0; l < c.perm.size(); ++l)
        for (int v = 0; v < c.n; ++v)
            out << "  v" << v << " -> v" << c.perm[l][v] << " [color=" << colors[l % 10]
                << ", label=\"" << c.alphabet[l] << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace raag
