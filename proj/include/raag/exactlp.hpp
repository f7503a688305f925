#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "raag/rational.hpp"

namespace raag {

/// Rational linear feasibility problem: equality rows plus per-variable
/// bounds. No floating point anywhere on the verdict path.
struct LPProblem {
    struct Row {
        std::vector<std::pair<int, Rational>> terms;
        Rational rhs = 0;
    };

    int n = 0;
    std::vector<Row> rows;
    std::vector<Rational> lower;               // size n
    std::vector<std::optional<Rational>> upper;  // size n, usually unset

    static LPProblem with_vars(int n);
};

enum class LpStatus { feasible, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> point;  // set iff feasible; satisfies everything exactly
};

// Phase-1 simplex with Bland's anti-cycling rule. The returned point is
// re-substituted into every constraint before it is returned.
LpResult lp_feasible(const LPProblem& p);

struct LpOptResult {
    LpStatus status = LpStatus::infeasible;
    Rational value = 0;
    std::vector<Rational> point;
};

// max sum_{j in objective} x_j over the same constraint set. The caller must
// make the optimum bounded (our callers add a normalization row); an
// unbounded phase 2 throws.
LpOptResult lp_maximize_sum(const LPProblem& p, const std::vector<int>& objective);

// Fourier-Motzkin elimination, used only as a test oracle; requires n <= 24.
LpStatus fm_feasible(const LPProblem& p);

// Multiplies by the lcm of the denominators: integral output, same support.
std::vector<Integer> scale_to_integers(const std::vector<Rational>& x);

}  // namespace raag
