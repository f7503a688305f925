#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raag/exactlp.hpp"
#include "raag/system.hpp"

namespace raag {

using Support = std::vector<bool>;  // per var index of one LinearSystem

struct SupportResult {
    Support support;
    std::vector<Rational> point;  // >= 0, satisfies the equalities, positive exactly on support
};

// Largest variable set that can be positive subject to the equalities,
// nonnegativity and zero pins outside `active`.
SupportResult maximal_support(const LinearSystem& s, const Support& active);

// Reference implementation probing each active variable with its own
// feasibility LP {equalities, inactive = 0, x >= 0, x_v >= 1}; agrees with
// maximal_support and is exercised against it in tests.
SupportResult probe_support(const LinearSystem& s, const Support& active);

struct PruneEvent {
    int trigger = 0;      // var index that was pinned to zero
    int implication = 0;  // index of the implication that forced it
};

struct ComponentVerdict {
    int component = 0;
    bool feasible = false;
    std::vector<PruneEvent> trace;
    std::optional<int> violated_strict_sum;
    Support support;
    std::vector<Integer> witness;  // set iff feasible; passes check_assignment
};

enum class PruneOrder { batch, single_ascending, single_random };

ComponentVerdict prune_fixpoint(const LinearSystem& s, PruneOrder order = PruneOrder::batch,
                                unsigned seed = 0);

struct Verdict {
    bool feasible = false;
    int feasible_component = 0;  // 1 or 2 when feasible
    std::vector<ComponentVerdict> components;
};

Verdict decide(const SystemBundle& b, PruneOrder order = PruneOrder::batch, unsigned seed = 0);

// Convenience: builds the bundle first; requires diameter >= 3 on both trees.
Verdict decide(const Tree& left, const Tree& right);

struct BruteResult {
    bool feasible = false;
    std::vector<Integer> witness;  // over the full variable set, iff feasible
};

// Exhaustive search over {0..bound} on the identification-reduced classes;
// throws when (bound+1)^classes exceeds the 4^16 state guard.
BruteResult brute_force_feasible(const LinearSystem& s, int bound);

// Verdict report per the JSON schema in the external interface.
std::string verdict_json(const SystemBundle& b, const Verdict& v);

}  // namespace raag
