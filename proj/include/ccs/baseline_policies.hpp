#pragma once

#include <optional>

#include "ccs/belief_state.hpp"
#include "ccs/policy.hpp"
#include "ccs/rng.hpp"

namespace ccs {

/// Deterministic top-K: the K cells with the highest sum LLRs.
CellSet dgf_action(const BeliefState& belief, std::size_t K);

/// The highest-ranked cell plus K-1 cells drawn uniformly without replacement
/// from the remaining M-1.
CellSet chernoff_action(const BeliefState& belief, std::size_t K, Rng& rng);

class DgfPolicy final : public Policy {
public:
    explicit DgfPolicy(std::size_t K) : K_(K) {}
    Play next_play(const BeliefState& belief, Rng& rng) override;

private:
    std::size_t K_;
};

class ChernoffPolicy final : public Policy {
public:
    explicit ChernoffPolicy(std::size_t K) : K_(K) {}
    Play next_play(const BeliefState& belief, Rng& rng) override;

private:
    std::size_t K_;
};

/// Switch-averse randomization: with probability p_stick repeat the previous
/// play, otherwise act like the Chernoff rule. No Bernoulli draw is consumed
/// on the first step or when p_stick is 0.
class SluggishPolicy final : public Policy {
public:
    /// Throws std::invalid_argument unless 0 <= p_stick < 1.
    SluggishPolicy(std::size_t K, double p_stick);
    Play next_play(const BeliefState& belief, Rng& rng) override;

    const std::optional<CellSet>& previous() const { return previous_; }

private:
    std::size_t K_;
    double p_stick_;
    std::optional<CellSet> previous_;
};

}  // namespace ccs
