#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccs/episode.hpp"
#include "ccs/observation_model.hpp"
#include "ccs/policy.hpp"

namespace ccs {

/// Raised for malformed or invalid experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string kind = "rayleigh";  // rayleigh | discrete
    double sigma_f = 0.0;
    double sigma_g = 0.0;
    std::vector<double> p_f;
    std::vector<double> p_g;
};

struct ExperimentConfig {
    std::size_t M = 0;
    std::size_t K = 0;
    std::size_t L = 1;
    std::vector<double> c_values;
    double s_ratio = 5.0;  // s = s_ratio * c
    ModelSpec model;
    std::vector<PolicyKind> policies{PolicyKind::ccs, PolicyKind::dgf, PolicyKind::chernoff, PolicyKind::sluggish};
    std::size_t trials = 10'000;
    std::uint64_t master_seed = 1;
    double p_stick = 0.9;
    std::uint64_t step_cap = 10'000'000;
    Prior prior;

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
    ObservationModel observation_model() const;
};

struct ParsedConfig {
    ExperimentConfig config;
    std::vector<std::string> warnings;
};

/// Flat `key = value` lines; `#` starts a comment. Unknown or repeated keys
/// are errors. Keys: M, K, L, model, sigma_f, sigma_g, p_f, p_g, c_values,
/// s_ratio, policies, trials, master_seed, p_stick, step_cap, prior.
ParsedConfig parse_config(std::string_view text);

struct SweepRow {
    PolicyKind policy = PolicyKind::ccs;
    std::size_t M = 0;
    std::size_t K = 0;
    std::size_t L = 0;
    double c = 0.0;
    double s = 0.0;
    std::size_t trials = 0;
    std::size_t aborted = 0;
    RiskSummary risk;
    double rate_I = 0.0;
    double lower_bound = 0.0;
    double relative_loss = 0.0;
    double relative_loss_no_switch = 0.0;
};

using RowSink = std::function<void(const SweepRow&)>;

/// Episodes of one (policy, c) cell, in trial-index order.
std::vector<EpisodeResult> run_cell(const ExperimentConfig& config, std::size_t policy_index, std::size_t c_index,
                                    unsigned jobs = 1);

/// Scores a cell's episodes into a row (aborted episodes are excluded and counted).
SweepRow summarize_cell(const ExperimentConfig& config, PolicyKind policy, double c,
                        std::span<const EpisodeResult> episodes);

/// Every (policy, c) cell in config order. Trials may run on `jobs` threads;
/// rows are identical for any job count. `sink` sees each row as it completes.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned jobs = 1, const RowSink& sink = {});

inline constexpr std::string_view kCsvHeader =
    "policy,M,K,L,c,s,trials,error_rate,mean_tau,se_tau,mean_switch,se_switch,bayes_risk,bayes_risk_no_switch,"
    "rate_I,lower_bound,relative_loss,relative_loss_no_switch,aborted";

std::string csv_row(const SweepRow& row);
void write_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_json(std::ostream& out, std::span<const SweepRow> rows);

/// Shortest round-trippable text form used by every emitter.
std::string format_number(double value);

}  // namespace ccs
