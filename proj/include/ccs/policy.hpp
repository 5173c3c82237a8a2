#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ccs/belief_state.hpp"
#include "ccs/rng.hpp"

namespace ccs {

/// Cells probed in one time step. Fewer than K cells means idle machines.
struct Play {
    CellSet cells;
    bool exploring = false;
};

/// A selection rule. Stopping and declaration are shared by every policy
/// (see should_stop / declare) so that comparisons vary only the selection.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Play next_play(const BeliefState& belief, Rng& rng) = 0;
};

enum class PolicyKind { ccs, dgf, chernoff, sluggish };

std::string_view to_string(PolicyKind kind);

/// Throws std::invalid_argument for an unknown name.
PolicyKind parse_policy_kind(std::string_view name);

/// True iff Delta_L S >= -log c. Requires 0 < c < 1.
bool should_stop(const BeliefState& belief, std::size_t L, double c);

/// The top-L ranked cells.
CellSet declare(const BeliefState& belief, std::size_t L);

}  // namespace ccs
