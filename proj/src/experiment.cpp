#include "ccs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "ccs/ccs_policy.hpp"

namespace ccs {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = value.find(',');
        items.push_back(trim(value.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        value.remove_prefix(comma + 1);
    }
    return items;
}

double parse_real(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a real number");
    }
    return value;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        // Allow integral scientific notation such as 1e5.
        const double real = parse_real(key, text);
        if (real < 0.0 || real != std::floor(real) || real > 1.8e19) {
            throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) +
                              "' is not a nonnegative integer");
        }
        return static_cast<std::uint64_t>(real);
    }
    return value;
}

std::vector<double> parse_reals(std::string_view key, std::string_view text) {
    std::vector<double> out;
    for (auto item : split_list(text)) {
        out.push_back(parse_real(key, item));
    }
    return out;
}

void check(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    check(M >= 2, "M must be at least 2");
    check(L >= 1, "L must be at least 1");
    check(L <= K, "L must not exceed K");
    check(K <= M, "K must not exceed M");
    check(L < M, "L must be smaller than M");
    check(!c_values.empty(), "c_values must list at least one cost");
    for (double c : c_values) {
        check(c > 0.0 && c < 1.0, "every c must lie in (0, 1)");
    }
    check(s_ratio >= 0.0, "s_ratio must be nonnegative");
    check(!policies.empty(), "policies must list at least one policy");
    check(trials >= 1, "trials must be at least 1");
    check(p_stick >= 0.0 && p_stick < 1.0, "p_stick must lie in [0, 1)");
    check(step_cap >= 1, "step_cap must be at least 1");
    if (!prior.weights.empty()) {
        check(prior.weights.size() == M, "prior must list exactly M probabilities");
        double total = 0.0;
        std::size_t positive = 0;
        for (double w : prior.weights) {
            check(w >= 0.0, "prior entries must be nonnegative");
            total += w;
            positive += w > 0.0 ? 1 : 0;
        }
        check(std::abs(total - 1.0) <= 1e-9, "prior must sum to 1");
        check(positive >= L, "prior must give positive mass to at least L cells");
    }
    try {
        (void)observation_model();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

ObservationModel ExperimentConfig::observation_model() const {
    if (model.kind == "rayleigh") {
        return ObservationModel::rayleigh(model.sigma_f, model.sigma_g);
    }
    if (model.kind == "discrete") {
        return ObservationModel::discrete(model.p_f, model.p_g);
    }
    throw std::invalid_argument("unknown model kind '" + model.kind + "'");
}

ParsedConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (!entries.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' repeated");
        }
    }

    ParsedConfig parsed;
    auto& cfg = parsed.config;
    bool have_m = false;
    bool have_k = false;
    bool have_c = false;
    for (const auto& [key, value] : entries) {
        if (key == "M") {
            cfg.M = parse_count(key, value);
            have_m = true;
        } else if (key == "K") {
            cfg.K = parse_count(key, value);
            have_k = true;
        } else if (key == "L") {
            cfg.L = parse_count(key, value);
        } else if (key == "model") {
            cfg.model.kind = value;
        } else if (key == "sigma_f") {
            cfg.model.sigma_f = parse_real(key, value);
        } else if (key == "sigma_g") {
            cfg.model.sigma_g = parse_real(key, value);
        } else if (key == "p_f") {
            cfg.model.p_f = parse_reals(key, value);
        } else if (key == "p_g") {
            cfg.model.p_g = parse_reals(key, value);
        } else if (key == "c_values") {
            cfg.c_values = parse_reals(key, value);
            have_c = true;
        } else if (key == "s_ratio") {
            cfg.s_ratio = parse_real(key, value);
        } else if (key == "policies") {
            cfg.policies.clear();
            for (auto item : split_list(value)) {
                try {
                    cfg.policies.push_back(parse_policy_kind(item));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("key 'policies': ") + e.what());
                }
            }
        } else if (key == "trials") {
            cfg.trials = parse_count(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_count(key, value);
        } else if (key == "p_stick") {
            cfg.p_stick = parse_real(key, value);
        } else if (key == "step_cap") {
            cfg.step_cap = parse_count(key, value);
        } else if (key == "prior") {
            if (value == "uniform") {
                cfg.prior.weights.clear();
            } else {
                cfg.prior.weights = parse_reals(key, value);
            }
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    check(have_m, "missing required key 'M'");
    check(have_k, "missing required key 'K'");
    check(have_c, "missing required key 'c_values'");
    if (cfg.model.kind != "rayleigh" && cfg.model.kind != "discrete") {
        throw ConfigError("model must be 'rayleigh' or 'discrete'");
    }
    cfg.validate();

    const double max_c = *std::max_element(cfg.c_values.begin(), cfg.c_values.end());
    if (cfg.s_ratio * max_c > 0.1) {
        parsed.warnings.push_back("switching cost s = " + format_number(cfg.s_ratio * max_c) +
                                  " is large; the policy analysis assumes s = O(c) with c small");
    }
    return parsed;
}

std::vector<EpisodeResult> run_cell(const ExperimentConfig& config, std::size_t policy_index, std::size_t c_index,
                                    unsigned jobs) {
    const ObservationModel model = config.observation_model();
    const PolicyKind kind = config.policies.at(policy_index);
    const PolicySpec spec{kind, config.p_stick};
    const EpisodeSettings settings{config.M, config.K, config.L, config.c_values.at(c_index), config.step_cap};
    const std::string_view name = to_string(kind);

    std::vector<EpisodeResult> results(config.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < results.size(); t = next++) {
            results[t] = run_trial(spec, model, settings, config.prior,
                                   derive_seed(config.master_seed, name, c_index, t));
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(results.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    return results;
}

SweepRow summarize_cell(const ExperimentConfig& config, PolicyKind policy, double c,
                        std::span<const EpisodeResult> episodes) {
    SweepRow row;
    row.policy = policy;
    row.M = config.M;
    row.K = config.K;
    row.L = config.L;
    row.c = c;
    row.s = config.s_ratio * c;
    row.trials = episodes.size();
    const KlPair kl = config.observation_model().kl();
    row.rate_I = rate_function(kl, config.M, config.K, config.L);
    row.lower_bound = lower_bound(c, row.rate_I);

    std::vector<EpisodeResult> completed;
    completed.reserve(episodes.size());
    for (const auto& e : episodes) {
        if (e.aborted) {
            ++row.aborted;
        } else {
            completed.push_back(e);
        }
    }
    if (completed.empty()) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        row.risk.error_rate = row.risk.mean_tau = row.risk.se_tau = row.risk.mean_switch = row.risk.se_switch = nan;
        row.risk.bayes_risk = row.risk.bayes_risk_no_switch = nan;
        row.relative_loss = row.relative_loss_no_switch = nan;
        return row;
    }
    row.risk = estimate_risk(completed, c, row.s);
    row.relative_loss = relative_loss(row.risk.bayes_risk, row.lower_bound);
    row.relative_loss_no_switch = relative_loss(row.risk.bayes_risk_no_switch, row.lower_bound);
    return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned jobs, const RowSink& sink) {
    config.validate();
    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
        for (std::size_t ci = 0; ci < config.c_values.size(); ++ci) {
            const auto episodes = run_cell(config, p, ci, jobs);
            rows.push_back(summarize_cell(config, config.policies[p], config.c_values[ci], episodes));
            if (sink) {
                sink(rows.back());
            }
        }
    }
    return rows;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string csv_row(const SweepRow& r) {
    std::string out;
    auto field = [&out](const std::string& v) {
        if (!out.empty()) {
            out += ',';
        }
        out += v;
    };
    field(std::string(to_string(r.policy)));
    field(std::to_string(r.M));
    field(std::to_string(r.K));
    field(std::to_string(r.L));
    field(format_number(r.c));
    field(format_number(r.s));
    field(std::to_string(r.trials));
    field(format_number(r.risk.error_rate));
    field(format_number(r.risk.mean_tau));
    field(format_number(r.risk.se_tau));
    field(format_number(r.risk.mean_switch));
    field(format_number(r.risk.se_switch));
    field(format_number(r.risk.bayes_risk));
    field(format_number(r.risk.bayes_risk_no_switch));
    field(format_number(r.rate_I));
    field(format_number(r.lower_bound));
    field(format_number(r.relative_loss));
    field(format_number(r.relative_loss_no_switch));
    field(std::to_string(r.aborted));
    return out;
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << csv_row(r) << '\n';
    }
}

void write_json(std::ostream& out, std::span<const SweepRow> rows) {
    auto number = [](double v) -> nlohmann::ordered_json {
        if (std::isnan(v)) {
            return nullptr;
        }
        return v;
    };
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["policy"] = std::string(to_string(r.policy));
        j["M"] = r.M;
        j["K"] = r.K;
        j["L"] = r.L;
        j["c"] = r.c;
        j["s"] = r.s;
        j["trials"] = r.trials;
        j["error_rate"] = number(r.risk.error_rate);
        j["se_error"] = number(r.risk.se_error);
        j["mean_tau"] = number(r.risk.mean_tau);
        j["se_tau"] = number(r.risk.se_tau);
        j["mean_switch"] = number(r.risk.mean_switch);
        j["se_switch"] = number(r.risk.se_switch);
        j["bayes_risk"] = number(r.risk.bayes_risk);
        j["se_bayes_risk"] = number(r.risk.se_bayes_risk);
        j["bayes_risk_no_switch"] = number(r.risk.bayes_risk_no_switch);
        j["se_bayes_risk_no_switch"] = number(r.risk.se_bayes_risk_no_switch);
        j["rate_I"] = r.rate_I;
        j["lower_bound"] = r.lower_bound;
        j["relative_loss"] = number(r.relative_loss);
        j["relative_loss_no_switch"] = number(r.relative_loss_no_switch);
        j["aborted"] = r.aborted;
        doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace ccs
