#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "raag/covers.hpp"
#include "raag/product.hpp"
#include "raag/solver.hpp"
#include "raag/splitting.hpp"
#include "raag/system.hpp"
#include "raag/tree.hpp"

using json = nlohmann::ordered_json;
using namespace raag;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitInfeasible = 10;
constexpr int kExitUsage = 2;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

json report_head(const std::string& command, json inputs) {
    json j;
    j["tool"] = "raag";
    j["version"] = kVersion;
    j["command"] = command;
    j["inputs"] = std::move(inputs);
    return j;
}

// tree specs as in the mini-language, plus adjfile:PATH for adjacency files
Tree tree_from_cli(const std::string& spec) {
    if (spec.rfind("adjfile:", 0) == 0) {
        std::ifstream in(spec.substr(8));
        if (!in) throw std::invalid_argument("cannot open adjacency file '" + spec.substr(8) + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_adjacency_text(buf.str());
    }
    return parse_tree_spec(spec);
}

long long guard_vars() {
    if (const char* env = std::getenv("RAAG_GUARD_VARS")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("RAAG_GUARD_VARS is not an integer");
        }
    }
    return 20000;
}

void check_guard(const SystemBundle& b) {
    long long guard = guard_vars();
    for (auto& s : b.systems)
        if (static_cast<long long>(s.vars.size()) > guard)
            throw std::invalid_argument("system exceeds RAAG_GUARD_VARS=" +
                                        std::to_string(guard) + " variables (" +
                                        std::to_string(s.vars.size()) + ")");
}

int run_decide(const std::string& left_spec, const std::string& right_spec,
               const std::string& emit_system, const std::string& dot_path, bool as_json) {
    Timer timer;
    Tree left = tree_from_cli(left_spec), right = tree_from_cli(right_spec);
    if (diameter(left) < 3 || diameter(right) < 3)
        throw std::invalid_argument("both trees must have diameter >= 3");
    SystemBundle b = build_full_system(left, right, left_spec, right_spec);
    check_guard(b);
    if (!emit_system.empty()) {
        std::ofstream out(emit_system);
        if (!out) throw std::invalid_argument("cannot write '" + emit_system + "'");
        out << "[\n" << emit_json(b.systems[0]) << ",\n" << emit_json(b.systems[1]) << "\n]\n";
    }
    if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw std::invalid_argument("cannot write '" + dot_path + "'");
        out << product_dot(b.product);
    }
    Verdict v = decide(b);
    if (as_json) {
        json j = report_head("decide", {{"left", left_spec}, {"right", right_spec}});
        j["result"] = json::parse(verdict_json(b, v));
        j["note"] = v.feasible
                        ? "feasible only certifies the necessary condition, not commensurability"
                        : "integer infeasibility certifies non-commensurability";
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "decide " << left_spec << " vs " << right_spec << ": "
                  << (v.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
        if (v.feasible) {
            std::cout << "  integer solution exists (component " << v.feasible_component
                      << "); the necessary condition for commensurability passed.\n";
        } else {
            std::cout << "  no integer solution in either component: the RAAGs are NOT "
                         "commensurable.\n";
        }
        std::cout << "  elapsed " << timer.ms() << " ms\n";
    }
    return v.feasible ? 0 : kExitInfeasible;
}

int run_sweep(const std::string& range, bool as_json) {
    Timer timer;
    auto dots = range.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("--paths expects a range like 5..8");
    int a = std::stoi(range.substr(0, dots));
    int bnd = std::stoi(range.substr(dots + 2));
    if (a < 5 || bnd < a || bnd > 32)
        throw std::invalid_argument("--paths range must satisfy 5 <= A <= B <= 32");

    json entries = json::array();
    int off_diagonal_infeasible = 0, off_diagonal = 0;
    for (int n = a; n <= bnd; ++n)
        for (int m = n; m <= bnd; ++m) {
            SystemBundle sys = build_full_system(build_path(n), build_path(m),
                                                 "path:" + std::to_string(n),
                                                 "path:" + std::to_string(m));
            check_guard(sys);
            Verdict v = decide(sys);
            if (n != m) {
                ++off_diagonal;
                if (!v.feasible) ++off_diagonal_infeasible;
            }
            entries.push_back({{"n", n},
                               {"m", m},
                               {"verdict", v.feasible ? "feasible" : "infeasible"}});
        }
    if (as_json) {
        json j = report_head("sweep", {{"paths", range}});
        j["pairs"] = std::move(entries);
        j["off_diagonal"] = off_diagonal;
        j["off_diagonal_infeasible"] = off_diagonal_infeasible;
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "sweep paths " << range << "\n";
        for (auto& e : entries)
            std::cout << "  P" << e["n"].get<int>() << " vs P" << e["m"].get<int>() << ": "
                      << e["verdict"].get<std::string>() << "\n";
        std::cout << "  off-diagonal infeasible: " << off_diagonal_infeasible << "/"
                  << off_diagonal << "\n";
        std::cout << "  elapsed " << timer.ms() << " ms\n";
    }
    return 0;
}

json census_json(const CoverGraph& c, int letter) {
    json j = json::array();
    for (auto [len, cnt] : cycle_census(c, letter)) j.push_back({{"length", len}, {"count", cnt}});
    return j;
}

json alphabeta_json(const AlphaBeta& ab) {
    json j;
    auto fam = [](const std::map<int, std::vector<int>>& m) {
        json out = json::object();
        for (auto& [i, vals] : m) out[std::to_string(i)] = vals;
        return out;
    };
    j["alpha"] = fam(ab.alpha);
    j["beta"] = fam(ab.beta);
    j["alpha_prime"] = fam(ab.alpha_prime);
    j["beta_prime"] = fam(ab.beta_prime);
    return j;
}

int run_covers(int k, const std::string& which, const std::string& dot_prefix,
               const std::string& emit_prefix, bool as_json) {
    Timer timer;
    if (k < 1) throw std::invalid_argument("--k must be >= 1");
    bool do_s = which == "s" || which == "both";
    bool do_z = which == "z" || which == "both";
    if (!do_s && !do_z) throw std::invalid_argument("--which must be s, z or both");

    json j = report_head("covers", {{"k", k}, {"which", which}});
    bool all_ok = true;

    if (do_s) {
        CoverGraph s = build_cover_S(k);
        auto rep = validate_cover_S(s, k);
        all_ok = all_ok && rep.ok();
        json js;
        js["degree"] = s.n;
        js["valid"] = rep.ok();
        js["degenerate"] = rep.degenerate;
        js["violations"] = rep.violations;
        json censuses;
        for (size_t l = 0; l < s.alphabet.size(); ++l)
            censuses[s.alphabet[l]] = census_json(s, static_cast<int>(l));
        js["cycle_censuses"] = std::move(censuses);
        j["S"] = std::move(js);
        if (!dot_prefix.empty()) {
            std::ofstream out(dot_prefix + ".s.dot");
            out << cover_dot(s);
        }
        if (!emit_prefix.empty()) {
            std::ofstream out(emit_prefix + ".s.json");
            out << cover_json(s) << "\n";
        }
    }
    if (do_z) {
        ZCover z = build_cover_Z(k);
        auto rep = validate_cover_Z(z.cover, k);
        all_ok = all_ok && rep.ok();
        json jz;
        jz["degree"] = z.cover.n;
        jz["valid"] = rep.ok();
        jz["degenerate"] = rep.degenerate;
        jz["violations"] = rep.violations;
        json censuses;
        for (size_t l = 0; l < z.cover.alphabet.size(); ++l)
            censuses[z.cover.alphabet[l]] = census_json(z.cover, static_cast<int>(l));
        jz["cycle_censuses"] = std::move(censuses);
        jz["alpha_beta"] = alphabeta_json(z.ab);
        j["Z"] = std::move(jz);
        if (!dot_prefix.empty()) {
            std::ofstream out(dot_prefix + ".z.dot");
            out << cover_dot(z.cover);
        }
        if (!emit_prefix.empty()) {
            std::ofstream out(emit_prefix + ".z.json");
            out << cover_json(z.cover) << "\n";
        }
    }

    if (as_json) {
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "covers k=" << k << "\n";
        auto text = [&](const char* name) {
            if (!j.contains(name)) return;
            const json& c = j[name];
            std::cout << "  " << name << ": degree " << c["degree"].get<int>() << ", "
                      << (c["valid"].get<bool>() ? "valid" : "INVALID");
            if (c["degenerate"].get<bool>()) std::cout << " (degenerate k=1 completion)";
            std::cout << "\n";
            for (auto& v : c["violations"])
                std::cout << "    violation: " << v.get<std::string>() << "\n";
        };
        text("S");
        text("Z");
        std::cout << "  elapsed " << timer.ms() << " ms\n";
    }
    return all_ok ? 0 : 1;
}

int run_splittings(int k, bool cross, bool as_json) {
    Timer timer;
    if (k < 1) throw std::invalid_argument("--k must be >= 1");
    SplittingSkeleton x = build_X(k), h = psi_H(k), kk = psi_K(k);

    auto census = [](const SplittingSkeleton& s) {
        json j;
        j["vertices"] = s.vertices.size();
        j["edges"] = s.edges.size();
        json rc = json::array();
        for (auto [rank, count] : s.rank_census())
            rc.push_back({{"rank", rank}, {"count", count}});
        j["rank_census"] = std::move(rc);
        return j;
    };

    bool iso_xh = labelled_iso(x, h, false).has_value();
    bool iso_hk = labelled_iso(h, kk, false).has_value();

    json j = report_head("splittings", {{"k", k}, {"cross_validate", cross}});
    j["X"] = census(x);
    j["psi_H"] = census(h);
    j["psi_K"] = census(kk);
    j["iso_X_psiH"] = iso_xh;
    j["iso_psiH_psiK"] = iso_hk;

    bool ok = iso_xh && iso_hk;
    if (cross) {
        SystemBundle b = build_full_system(build_tkk(k), p4k2_tree(k), "tkk:" + std::to_string(k),
                                           "path:" + std::to_string(4 * k + 2));
        CrossValidation cv = cross_validate(k, b);
        json jc;
        jc["found"] = cv.found;
        jc["isos_tried"] = cv.isos_tried;
        if (cv.found) {
            jc["phi"] = cv.phi;
            jc["component"] = cv.labels.component;
            jc["q_ratio_ok"] = cv.q_ratio_ok;
            const LinearSystem& sys = b.systems[cv.labels.component - 1];
            jc["system_satisfied"] = check_assignment(sys, cv.labels.assignment).ok();
            int positive = 0;
            for (auto& val : cv.labels.assignment)
                if (val > 0) ++positive;
            jc["positive_labels"] = positive;
            ok = ok && cv.q_ratio_ok && jc["system_satisfied"].get<bool>();
        } else {
            ok = false;
        }
        j["m_labels"] = std::move(jc);
    }

    if (as_json) {
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "splittings k=" << k << "\n";
        std::cout << "  |V(X)| = " << j["X"]["vertices"].get<size_t>()
                  << ", |V(psi_H)| = " << j["psi_H"]["vertices"].get<size_t>()
                  << ", |V(psi_K)| = " << j["psi_K"]["vertices"].get<size_t>() << "\n";
        std::cout << "  rank iso X ~ psi_H: " << (iso_xh ? "yes" : "NO")
                  << ", psi_H ~ psi_K: " << (iso_hk ? "yes" : "NO") << "\n";
        if (cross)
            std::cout << "  cross-validation: "
                      << (j["m_labels"]["found"].get<bool>() ? "system satisfied" : "FAILED")
                      << "\n";
        if (!ok)
            std::cout << "  censuses:\n"
                      << j["X"].dump(1) << "\n"
                      << j["psi_H"].dump(1) << "\n"
                      << j["psi_K"].dump(1) << "\n";
        std::cout << "  elapsed " << timer.ms() << " ms\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"commensurability toolkit for RAAGs defined by trees"};
    app.require_subcommand(1);

    auto* decide_cmd = app.add_subcommand(
        "decide", "decide integer feasibility of the product-graph system for two trees");
    std::string left_spec, right_spec, emit_system, decide_dot;
    bool decide_json = false;
    decide_cmd
        ->add_option("--left", left_spec,
                     "left tree spec (path:N | tkk:K | t4:... | adj:... | adjfile:PATH)")
        ->required();
    decide_cmd->add_option("--right", right_spec, "right tree spec")->required();
    decide_cmd->add_option("--emit-system", emit_system, "write both component systems as JSON");
    decide_cmd->add_option("--dot", decide_dot, "write the product graph as DOT");
    decide_cmd->add_flag("--json", decide_json, "machine-readable report");

    auto* sweep_cmd = app.add_subcommand("sweep", "decide all path pairs in a range");
    std::string range;
    bool sweep_json = false;
    sweep_cmd->add_option("--paths", range, "range A..B with 5 <= A <= B")->required();
    sweep_cmd->add_flag("--json", sweep_json, "machine-readable report");

    auto* covers_cmd = app.add_subcommand("covers", "build and validate the covers S and Z");
    int covers_k = 0;
    std::string which = "both", dot_prefix, emit_prefix;
    bool covers_json = false;
    covers_cmd->add_option("--k", covers_k, "parameter k >= 1")->required();
    covers_cmd->add_option("--which", which, "s | z | both (default both)");
    covers_cmd->add_option("--dot", dot_prefix, "write PREFIX.s.dot / PREFIX.z.dot");
    covers_cmd->add_option("--emit", emit_prefix, "write PREFIX.s.json / PREFIX.z.json");
    covers_cmd->add_flag("--json", covers_json, "machine-readable report");

    auto* split_cmd = app.add_subcommand("splittings", "build X, psi_H, psi_K and compare them");
    int split_k = 0;
    bool cross = false, split_json = false;
    split_cmd->add_option("--k", split_k, "parameter k >= 1")->required();
    split_cmd->add_flag("--cross-validate", cross,
                        "derive m-labels and check them against the generated system");
    split_cmd->add_flag("--json", split_json, "machine-readable report");

    try {
        app.parse(argc, argv);
        if (decide_cmd->parsed())
            return run_decide(left_spec, right_spec, emit_system, decide_dot, decide_json);
        if (sweep_cmd->parsed()) return run_sweep(range, sweep_json);
        if (covers_cmd->parsed())
            return run_covers(covers_k, which, dot_prefix, emit_prefix, covers_json);
        if (split_cmd->parsed()) return run_splittings(split_k, cross, split_json);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
