#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ccs/belief_state.hpp"
#include "ccs/observation_model.hpp"
#include "ccs/policy.hpp"

namespace ccs {

/// Regime of the optimal rate function. Case1 samples suspected targets
/// continuously; Case2 spends every machine on suspected normals.
enum class CaseKind { case1, case2 };

std::string_view to_string(CaseKind kind);

/// Case1 iff L * (D(f||g)/D(g||f) + 1) <= M.
CaseKind classify_case(const KlPair& kl, std::size_t M, std::size_t L);

/// Asymptotically optimal rate I*(M, K, L).
///   Case1: D(g||f) + (K-L) D(f||g) / (M-L)
///   Case2: K D(f||g) / (M-L)
double rate_function(const KlPair& kl, std::size_t M, std::size_t K, std::size_t L);

struct CcsParams {
    std::size_t M = 0;
    std::size_t K = 0;
    std::size_t L = 1;
    double c = 0.01;
    KlPair kl;

    /// Throws ContractViolation unless 1 <= L <= K <= M, L < M and 0 < c < 1.
    void validate() const;
};

/// One contiguous piece of a suspected-normal cell on a probing machine.
/// The machine keeps probing the cell while its lifetime sum LLR is >= threshold.
struct Segment {
    Cell cell;
    double fraction;   // q_j^k, in (0, 1]
    double threshold;  // cumulative-sum target, < 0
};

struct ProbingSchedule {
    /// K machine lists. Case 1 target machines hold no segments.
    std::vector<std::vector<Segment>> machines;
    /// Machines 0..L-1 in Case 1 (one per suspected target); empty in Case 2.
    std::vector<std::size_t> target_machines;
    /// Cell probed by each target machine, aligned with target_machines.
    CellSet targets;
    /// Top-L cells at build time, ascending index.
    CellSet suspected;
    /// Machines that carry suspected-normal segments, ascending.
    std::vector<std::size_t> normal_machines;
    /// Threshold for a cell's full estimated sensing time.
    double full_threshold = 0.0;
    std::uint64_t built_at = 0;
};

/// Cells probed during one exploration step starting at `cursor`, and the
/// cursor for the next step: K consecutive cells modulo M.
std::pair<CellSet, std::size_t> exploration_cells(std::size_t M, std::size_t K, std::size_t cursor);

/// Orders the current beliefs into a probing schedule: the top-L ranked cells
/// go to machines 0..L-1 (Case 1) or are left unprobed (Case 2); the remaining
/// M-L cells are concatenated by ascending index and cut into equal machine
/// capacities. With `from_current_sums` each threshold is offset by the
/// cell's sum at build time, giving a fresh round of sensing. Throws
/// ContractViolation unless h1_count() == L.
ProbingSchedule build_schedule(const BeliefState& belief, const CcsParams& params, bool from_current_sums = false);

/// The consecutive controlled sensing state machine for one episode.
class CcsPolicy final : public Policy {
public:
    explicit CcsPolicy(CcsParams params);

    Play next_play(const BeliefState& belief, Rng& rng) override;
    Play next_play(const BeliefState& belief);

    const CcsParams& params() const { return params_; }
    CaseKind case_kind() const { return case_; }
    double rate() const { return rate_; }
    bool exploring() const { return exploring_; }
    std::size_t cursor() const { return cursor_; }
    const std::optional<ProbingSchedule>& schedule() const { return schedule_; }
    std::size_t schedules_built() const { return schedules_built_; }

private:
    void rebuild(const BeliefState& belief, bool from_current_sums = false);
    /// Skips finished segments; true iff every normal machine is exhausted.
    bool advance_segments(const BeliefState& belief);
    CellSet exploitation_cells(const BeliefState& belief);
    bool suspects_match(const BeliefState& belief) const;

    CcsParams params_;
    CaseKind case_;
    double rate_;
    bool exploring_ = true;
    std::size_t cursor_ = 0;
    std::optional<ProbingSchedule> schedule_;
    std::vector<std::size_t> position_;  // current segment per machine
    std::size_t schedules_built_ = 0;
};

}  // namespace ccs
