#include "ccs/episode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccs/baseline_policies.hpp"

namespace ccs {

namespace {

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
    }
    double mean(std::size_t n) const { return sum / static_cast<double>(n); }
    double standard_error(std::size_t n) const {
        if (n < 2) {
            return 0.0;
        }
        const double nn = static_cast<double>(n);
        const double m = sum / nn;
        const double var = std::max(0.0, (sum_sq - nn * m * m) / (nn - 1.0));
        return std::sqrt(var / nn);
    }
};

}  // namespace

GroundTruth draw_truth(std::size_t M, std::size_t L, const Prior& prior, Rng& rng) {
    if (L < 1 || L > M) {
        throw ContractViolation("draw_truth requires 1 <= L <= M");
    }
    GroundTruth truth;
    if (prior.weights.empty()) {
        CellSet cells(M);
        std::iota(cells.begin(), cells.end(), Cell{0});
        for (std::size_t i = 0; i < L; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(M - i));
            std::swap(cells[i], cells[j]);
        }
        truth.targets.assign(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(L));
    } else {
        if (prior.weights.size() != M) {
            throw ContractViolation("prior length must equal M");
        }
        std::vector<double> w = prior.weights;
        for (std::size_t i = 0; i < L; ++i) {
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            double u = rng.uniform01() * total;
            Cell pick = M;
            for (Cell m = 0; m < M; ++m) {
                if (w[m] <= 0.0) {
                    continue;
                }
                pick = m;
                if (u < w[m]) {
                    break;
                }
                u -= w[m];
            }
            if (pick == M) {
                throw ContractViolation("prior has fewer than L cells with positive weight");
            }
            truth.targets.push_back(pick);
            w[pick] = 0.0;
        }
    }
    std::sort(truth.targets.begin(), truth.targets.end());
    return truth;
}

std::size_t count_switches(const std::optional<CellSet>& prev, const CellSet& curr) {
    if (!prev) {
        return 0;
    }
    std::size_t fresh = 0;
    for (Cell m : curr) {
        if (std::find(prev->begin(), prev->end(), m) == prev->end()) {
            ++fresh;
        }
    }
    return fresh;
}

EpisodeResult run_episode(Policy& policy, const ObservationModel& model, const EpisodeSettings& settings,
                          const GroundTruth& truth, std::uint64_t seed, const PlayObserver& observer) {
    Rng observation_rng(substream_seed(seed, 1));
    Rng policy_rng(substream_seed(seed, 2));

    std::vector<bool> is_target(settings.M, false);
    for (Cell m : truth.targets) {
        is_target.at(m) = true;
    }

    BeliefState belief(settings.M);
    EpisodeResult result;
    std::optional<CellSet> previous;
    std::vector<Observation> obs;
    obs.reserve(settings.K);

    while (true) {
        if (belief.time() >= settings.step_cap) {
            result.aborted = true;
            result.tau = belief.time();
            return result;
        }
        Play play = policy.next_play(belief, policy_rng);
        if (play.cells.size() > settings.K) {
            throw ContractViolation("policy emitted more than K cells");
        }
        std::sort(play.cells.begin(), play.cells.end());

        result.tau_switch += count_switches(previous, play.cells);
        result.idle_slots += settings.K - play.cells.size();
        if (play.exploring) {
            ++result.explore_steps;
        }

        obs.clear();
        for (Cell m : play.cells) {
            const auto state = is_target.at(m) ? CellState::abnormal : CellState::normal;
            obs.push_back(Observation{m, model.llr(model.sample(state, observation_rng))});
        }
        belief.apply(obs);
        if (observer) {
            observer(play);
        }
        previous = std::move(play.cells);

        if (should_stop(belief, settings.L, settings.c)) {
            break;
        }
    }

    result.tau = belief.time();
    result.declared = declare(belief, settings.L);
    std::sort(result.declared.begin(), result.declared.end());
    result.correct = result.declared == truth.targets;
    return result;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const EpisodeSettings& settings, const KlPair& kl) {
    switch (spec.kind) {
        case PolicyKind::ccs:
            return std::make_unique<CcsPolicy>(CcsParams{settings.M, settings.K, settings.L, settings.c, kl});
        case PolicyKind::dgf:
            return std::make_unique<DgfPolicy>(settings.K);
        case PolicyKind::chernoff:
            return std::make_unique<ChernoffPolicy>(settings.K);
        case PolicyKind::sluggish:
            return std::make_unique<SluggishPolicy>(settings.K, spec.p_stick);
    }
    throw ContractViolation("unhandled policy kind");
}

EpisodeResult run_trial(const PolicySpec& spec, const ObservationModel& model, const EpisodeSettings& settings,
                        const Prior& prior, std::uint64_t seed) {
    Rng truth_rng(substream_seed(seed, 0));
    const GroundTruth truth = draw_truth(settings.M, settings.L, prior, truth_rng);
    auto policy = make_policy(spec, settings, model.kl());
    return run_episode(*policy, model, settings, truth, seed);
}

RiskSummary estimate_risk(std::span<const EpisodeResult> results, double c, double s) {
    if (results.empty()) {
        throw ContractViolation("estimate_risk needs at least one episode");
    }
    Moments err, tau, sw, cost, cost_no_switch;
    for (const auto& r : results) {
        if (r.aborted) {
            throw ContractViolation("aborted episodes must be excluded from risk estimates");
        }
        const double e = r.correct ? 0.0 : 1.0;
        const auto t = static_cast<double>(r.tau);
        const auto w = static_cast<double>(r.tau_switch);
        err.add(e);
        tau.add(t);
        sw.add(w);
        cost.add(e + c * t + s * w);
        cost_no_switch.add(e + c * t);
    }
    const std::size_t n = results.size();
    RiskSummary out;
    out.n_trials = n;
    out.error_rate = err.mean(n);
    out.se_error = err.standard_error(n);
    out.mean_tau = tau.mean(n);
    out.se_tau = tau.standard_error(n);
    out.mean_switch = sw.mean(n);
    out.se_switch = sw.standard_error(n);
    out.bayes_risk = out.error_rate + c * out.mean_tau + s * out.mean_switch;
    out.se_bayes_risk = cost.standard_error(n);
    out.bayes_risk_no_switch = out.error_rate + c * out.mean_tau;
    out.se_bayes_risk_no_switch = cost_no_switch.standard_error(n);
    out.low_confidence = n < 2;
    return out;
}

double lower_bound(double c, double rate) {
    return -c * std::log(c) / rate;
}

double relative_loss(double bayes_risk, double r_lb) {
    if (!(r_lb > 0.0)) {
        throw ContractViolation("relative loss needs a positive lower bound");
    }
    return (bayes_risk - r_lb) / r_lb;
}

}  // namespace ccs
