#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ccs/belief_state.hpp"
#include "ccs/ccs_policy.hpp"
#include "ccs/observation_model.hpp"
#include "ccs/policy.hpp"
#include "ccs/rng.hpp"

namespace ccs {

/// Target locations for one episode, ascending.
struct GroundTruth {
    CellSet targets;
};

/// Prior over target locations. Empty weights mean uniform over L-subsets;
/// otherwise targets are drawn one by one without replacement, proportionally
/// to the remaining weights.
struct Prior {
    std::vector<double> weights;
};

GroundTruth draw_truth(std::size_t M, std::size_t L, const Prior& prior, Rng& rng);

struct EpisodeSettings {
    std::size_t M = 0;
    std::size_t K = 0;
    std::size_t L = 1;
    double c = 0.01;
    std::uint64_t step_cap = 10'000'000;
};

struct EpisodeResult {
    std::uint64_t tau = 0;
    std::uint64_t tau_switch = 0;
    CellSet declared;
    bool correct = false;
    std::uint64_t idle_slots = 0;
    std::uint64_t explore_steps = 0;
    bool aborted = false;

    bool operator==(const EpisodeResult&) const = default;
};

/// Cells in `curr` that were not in `prev`; the first play (no prev) is free.
std::size_t count_switches(const std::optional<CellSet>& prev, const CellSet& curr);

/// Called once per step with the (sorted) play just executed.
using PlayObserver = std::function<void(const Play&)>;

/// Runs one search to its stopping time. Observation noise is drawn from a
/// sub-stream of `seed` and policy randomness from another, so the episode is
/// a pure function of its arguments. Exceeding the step cap returns a result
/// flagged aborted.
EpisodeResult run_episode(Policy& policy, const ObservationModel& model, const EpisodeSettings& settings,
                          const GroundTruth& truth, std::uint64_t seed, const PlayObserver& observer = {});

struct PolicySpec {
    PolicyKind kind = PolicyKind::ccs;
    double p_stick = 0.9;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const EpisodeSettings& settings, const KlPair& kl);

/// Draws the truth from substream 0 of `seed`, then runs a fresh policy.
EpisodeResult run_trial(const PolicySpec& spec, const ObservationModel& model, const EpisodeSettings& settings,
                        const Prior& prior, std::uint64_t seed);

/// Plug-in Bayes risk estimates with normal-approximation standard errors.
struct RiskSummary {
    std::size_t n_trials = 0;
    double error_rate = 0.0;
    double se_error = 0.0;
    double mean_tau = 0.0;
    double se_tau = 0.0;
    double mean_switch = 0.0;
    double se_switch = 0.0;
    double bayes_risk = 0.0;
    double se_bayes_risk = 0.0;
    double bayes_risk_no_switch = 0.0;
    double se_bayes_risk_no_switch = 0.0;
    bool low_confidence = false;  // fewer than two trials
};

/// Throws ContractViolation on empty input or an aborted episode.
RiskSummary estimate_risk(std::span<const EpisodeResult> results, double c, double s);

/// -c log(c) / I*.
double lower_bound(double c, double rate);

/// (risk - r_lb) / r_lb. Requires r_lb > 0.
double relative_loss(double bayes_risk, double r_lb);

}  // namespace ccs
