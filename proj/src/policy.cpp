#include "ccs/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ccs {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::ccs:
            return "ccs";
        case PolicyKind::dgf:
            return "dgf";
        case PolicyKind::chernoff:
            return "chernoff";
        case PolicyKind::sluggish:
            return "sluggish";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    for (auto kind : {PolicyKind::ccs, PolicyKind::dgf, PolicyKind::chernoff, PolicyKind::sluggish}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

bool should_stop(const BeliefState& belief, std::size_t L, double c) {
    if (!(c > 0.0) || !(c < 1.0)) {
        throw ContractViolation("stopping rule requires 0 < c < 1");
    }
    return belief.delta_l_s(L) >= -std::log(c);
}

CellSet declare(const BeliefState& belief, std::size_t L) {
    return belief.top(L);
}

}  // namespace ccs
