#include "ccs/baseline_policies.hpp"

#include <numeric>
#include <stdexcept>

namespace ccs {

namespace {

void require_k(const BeliefState& belief, std::size_t K) {
    if (K < 1 || K > belief.num_cells()) {
        throw ContractViolation("baseline policies require 1 <= K <= M");
    }
}

}  // namespace

CellSet dgf_action(const BeliefState& belief, std::size_t K) {
    require_k(belief, K);
    return belief.top(K);
}

CellSet chernoff_action(const BeliefState& belief, std::size_t K, Rng& rng) {
    require_k(belief, K);
    const std::size_t M = belief.num_cells();
    const Cell leader = belief.top(1).front();
    CellSet others;
    others.reserve(M - 1);
    for (Cell m = 0; m < M; ++m) {
        if (m != leader) {
            others.push_back(m);
        }
    }
    CellSet cells{leader};
    // Partial Fisher-Yates over the M-1 non-leaders.
    for (std::size_t i = 0; i + 1 < K; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(others.size() - i));
        std::swap(others[i], others[j]);
        cells.push_back(others[i]);
    }
    return cells;
}

Play DgfPolicy::next_play(const BeliefState& belief, Rng& /*rng*/) {
    return Play{dgf_action(belief, K_), false};
}

Play ChernoffPolicy::next_play(const BeliefState& belief, Rng& rng) {
    return Play{chernoff_action(belief, K_, rng), false};
}

SluggishPolicy::SluggishPolicy(std::size_t K, double p_stick) : K_(K), p_stick_(p_stick) {
    if (!(p_stick >= 0.0) || !(p_stick < 1.0)) {
        throw std::invalid_argument("p_stick must lie in [0, 1)");
    }
}

Play SluggishPolicy::next_play(const BeliefState& belief, Rng& rng) {
    if (previous_ && p_stick_ > 0.0 && rng.bernoulli(p_stick_)) {
        return Play{*previous_, false};
    }
    previous_ = chernoff_action(belief, K_, rng);
    return Play{*previous_, false};
}

}  // namespace ccs
