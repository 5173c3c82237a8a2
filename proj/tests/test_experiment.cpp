#include <cmath>
#include <sstream>
#include <string>

#include "ccs/experiment.hpp"
#include "doctest.h"

using namespace ccs;

namespace {

const char* kSmall = R"(
# small sweep
M = 6
K = 2
sigma_f = 1
sigma_g = 2
c_values = 0.1, 0.05, 0.01
policies = ccs, dgf
trials = 40
master_seed = 9
)";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    return out;
}

std::string sweep_csv(const ExperimentConfig& cfg, unsigned jobs) {
    std::ostringstream out;
    write_csv(out, run_sweep(cfg, jobs));
    return out.str();
}

}  // namespace

TEST_SUITE("experiment") {
    TEST_CASE("M=100 K=10 setup is accepted with defaults") {
        const auto parsed = parse_config("M = 100\nK = 10\nsigma_f = 1\nsigma_g = 2\nc_values = 1e-4\ns_ratio = 5\n");
        const auto& cfg = parsed.config;
        CHECK(cfg.M == 100);
        CHECK(cfg.K == 10);
        CHECK(cfg.L == 1);
        CHECK(cfg.s_ratio == 5.0);
        CHECK(cfg.trials == 10'000);
        CHECK(cfg.p_stick == 0.9);
        CHECK(cfg.prior.weights.empty());
        CHECK(cfg.policies.size() == 4);
        CHECK(parsed.warnings.empty());

        const auto omitted = parse_config("M = 100\nK = 10\nsigma_f = 1\nsigma_g = 2\nc_values = 1e-4\n");
        CHECK(omitted.config.s_ratio == 5.0);
    }

    TEST_CASE("invalid configs are rejected") {
        CHECK_THROWS_AS(parse_config("M = 3\nK = 4\nsigma_f = 1\nsigma_g = 2\nc_values = 0.01\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.01\ntrails = 5\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 1.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nM = 6\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\nL = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\ntrials = 0\n"),
                        ConfigError);
        CHECK_THROWS_AS(
            parse_config("M = 3\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\nprior = 0.5, 0.2, 0.2\n"),
            ConfigError);
        CHECK_THROWS_AS(parse_config("K = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\npolicies = ucb\n"),
                        ConfigError);
    }

    TEST_CASE("large switching cost warns") {
        const auto parsed = parse_config("M = 5\nK = 2\nsigma_f = 1\nsigma_g = 2\nc_values = 0.1\n");
        CHECK(parsed.warnings.size() == 1);
    }

    TEST_CASE("explicit prior and discrete model") {
        const auto parsed = parse_config(
            "M = 3\nK = 2\nmodel = discrete\np_f = 0.5, 0.5\np_g = 0.1, 0.9\nc_values = 0.01\n"
            "prior = 0.5, 0.25, 0.25\n");
        CHECK(parsed.config.prior.weights.size() == 3);
        CHECK(parsed.config.observation_model().kl().d_f_g > 0.0);
    }

    TEST_CASE("one row per policy and c, in order") {
        const auto cfg = parse_config(kSmall).config;
        std::vector<std::string> seen;
        const auto rows = run_sweep(cfg, 1, [&](const SweepRow& r) {
            seen.push_back(std::string(to_string(r.policy)) + "@" + format_number(r.c));
        });
        REQUIRE(rows.size() == 6);
        CHECK(seen == std::vector<std::string>{"ccs@0.1", "ccs@0.05", "ccs@0.01", "dgf@0.1", "dgf@0.05", "dgf@0.01"});
        for (const auto& r : rows) {
            CHECK(r.trials == 40);
            CHECK(r.s == doctest::Approx(5.0 * r.c));
            CHECK(r.risk.bayes_risk ==
                  doctest::Approx(r.risk.error_rate + r.c * r.risk.mean_tau + r.s * r.risk.mean_switch));
            CHECK(r.risk.bayes_risk_no_switch == doctest::Approx(r.risk.error_rate + r.c * r.risk.mean_tau));
            CHECK(r.lower_bound == doctest::Approx(-r.c * std::log(r.c) / r.rate_I));
            CHECK(r.relative_loss == doctest::Approx((r.risk.bayes_risk - r.lower_bound) / r.lower_bound));
        }
    }

    TEST_CASE("sweeps are byte-identical across repeats and job counts") {
        const auto cfg = parse_config(kSmall).config;
        const auto a = sweep_csv(cfg, 1);
        CHECK(a == sweep_csv(cfg, 1));
        CHECK(a == sweep_csv(cfg, 3));
        auto other = cfg;
        other.master_seed = 10;
        CHECK(a != sweep_csv(other, 1));
    }

    TEST_CASE("csv header and column completeness") {
        auto cfg = parse_config(kSmall).config;
        cfg.c_values = {0.05};
        std::ostringstream out;
        write_csv(out, run_sweep(cfg, 1));
        std::istringstream in(out.str());
        std::string header;
        std::getline(in, header);
        CHECK(header ==
              "policy,M,K,L,c,s,trials,error_rate,mean_tau,se_tau,mean_switch,se_switch,bayes_risk,"
              "bayes_risk_no_switch,rate_I,lower_bound,relative_loss,relative_loss_no_switch,aborted");
        const auto columns = split(header);
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            const auto fields = split(line);
            REQUIRE(fields.size() == columns.size());
            for (const auto& f : fields) {
                CHECK_FALSE(f.empty());
            }
            ++rows;
        }
        CHECK(rows == 2);
    }

    TEST_CASE("json output") {
        auto cfg = parse_config(kSmall).config;
        cfg.c_values = {0.05};
        cfg.policies = {PolicyKind::dgf};
        std::ostringstream out;
        write_json(out, run_sweep(cfg, 1));
        const auto text = out.str();
        CHECK(text.find("\"policy\": \"dgf\"") != std::string::npos);
        CHECK(text.find("\"relative_loss_no_switch\"") != std::string::npos);
    }

    TEST_CASE("format_number") {
        CHECK(format_number(0.1) == "0.1");
        CHECK(format_number(1e-5) == "1e-05");
        CHECK(format_number(std::nan("")) == "nan");
        CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    }
}
