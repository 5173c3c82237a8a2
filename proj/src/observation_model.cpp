#include "ccs/observation_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccs {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

void validate_probability_vector(const std::vector<double>& p, const char* name) {
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " has a negative or non-finite entry");
        }
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument(std::string(name) + " does not sum to 1");
    }
}

std::vector<double> cumulative(const std::vector<double>& p) {
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    cdf.back() = 1.0;
    return cdf;
}

std::size_t inverse_cdf(const std::vector<double>& cdf, double u) {
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        if (u < cdf[i]) {
            return i;
        }
    }
    return cdf.size() - 1;
}

double rayleigh_kl(double sigma_p, double sigma_q) {
    // D(p||q) for Rayleigh laws with scales sigma_p, sigma_q.
    return 2.0 * std::log(sigma_q / sigma_p) + (sigma_p * sigma_p - sigma_q * sigma_q) / (sigma_q * sigma_q);
}

}  // namespace

ObservationModel::ObservationModel(Kind kind) : kind_(std::move(kind)) {
    if (auto* r = std::get_if<Rayleigh>(&kind_)) {
        const double sf2 = r->sigma_f * r->sigma_f;
        const double sg2 = r->sigma_g * r->sigma_g;
        llr_offset_ = 2.0 * std::log(r->sigma_f / r->sigma_g);
        llr_slope_ = 0.5 * (1.0 / sf2 - 1.0 / sg2);
    } else {
        const auto& t = std::get<TableDiscrete>(kind_);
        cdf_f_ = cumulative(t.p_f);
        cdf_g_ = cumulative(t.p_g);
        symbol_llr_.resize(t.p_f.size());
        for (std::size_t i = 0; i < t.p_f.size(); ++i) {
            symbol_llr_[i] = t.p_f[i] > 0.0 ? std::log(t.p_g[i] / t.p_f[i]) : 0.0;
        }
    }
}

ObservationModel ObservationModel::rayleigh(double sigma_f, double sigma_g) {
    if (!(sigma_f > 0.0) || !(sigma_g > 0.0) || !std::isfinite(sigma_f) || !std::isfinite(sigma_g)) {
        throw std::invalid_argument("Rayleigh scales must be positive and finite");
    }
    if (sigma_f == sigma_g) {
        throw std::invalid_argument("Rayleigh scales must differ (f = g carries no information)");
    }
    return ObservationModel(Rayleigh{sigma_f, sigma_g});
}

ObservationModel ObservationModel::discrete(std::vector<double> p_f, std::vector<double> p_g) {
    if (p_f.size() != p_g.size() || p_f.size() < 2) {
        throw std::invalid_argument("discrete tables must have equal length >= 2");
    }
    validate_probability_vector(p_f, "p_f");
    validate_probability_vector(p_g, "p_g");
    bool identical = true;
    for (std::size_t i = 0; i < p_f.size(); ++i) {
        if ((p_f[i] == 0.0) != (p_g[i] == 0.0)) {
            throw std::invalid_argument("p_f and p_g must share support (symbol " + std::to_string(i) + ")");
        }
        identical = identical && p_f[i] == p_g[i];
    }
    if (identical) {
        throw std::invalid_argument("p_f and p_g are identical (f = g carries no information)");
    }
    return ObservationModel(TableDiscrete{std::move(p_f), std::move(p_g)});
}

double ObservationModel::sample(CellState state, Rng& rng) const {
    return sample_with_uniform(state, rng.uniform01());
}

double ObservationModel::sample_with_uniform(CellState state, double u) const {
    if (const auto* r = std::get_if<Rayleigh>(&kind_)) {
        const double sigma = state == CellState::abnormal ? r->sigma_g : r->sigma_f;
        return sigma * std::sqrt(-2.0 * std::log(u));
    }
    const auto& cdf = state == CellState::abnormal ? cdf_g_ : cdf_f_;
    return static_cast<double>(inverse_cdf(cdf, u));
}

double ObservationModel::llr(double y) const {
    if (std::holds_alternative<Rayleigh>(kind_)) {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw std::domain_error("Rayleigh observation must be a positive real");
        }
        return llr_offset_ + llr_slope_ * y * y;
    }
    const auto& t = std::get<TableDiscrete>(kind_);
    const double index = std::floor(y);
    if (index != y || y < 0.0 || y >= static_cast<double>(t.p_f.size()) ||
        t.p_f[static_cast<std::size_t>(index)] == 0.0) {
        throw std::domain_error("discrete observation outside the common support");
    }
    return symbol_llr_[static_cast<std::size_t>(index)];
}

KlPair ObservationModel::kl() const {
    if (const auto* r = std::get_if<Rayleigh>(&kind_)) {
        return KlPair{rayleigh_kl(r->sigma_g, r->sigma_f), rayleigh_kl(r->sigma_f, r->sigma_g)};
    }
    const auto& t = std::get<TableDiscrete>(kind_);
    KlPair out;
    for (std::size_t i = 0; i < t.p_f.size(); ++i) {
        if (t.p_f[i] > 0.0) {
            out.d_g_f += t.p_g[i] * symbol_llr_[i];
            out.d_f_g -= t.p_f[i] * symbol_llr_[i];
        }
    }
    return out;
}

ObservationModel ObservationModel::swapped() const {
    if (const auto* r = std::get_if<Rayleigh>(&kind_)) {
        return rayleigh(r->sigma_g, r->sigma_f);
    }
    const auto& t = std::get<TableDiscrete>(kind_);
    return discrete(t.p_g, t.p_f);
}

KlPair kl_monte_carlo(const ObservationModel& model, std::size_t n, Rng& rng) {
    if (n == 0) {
        throw std::invalid_argument("kl_monte_carlo needs at least one draw");
    }
    double sum_f = 0.0;
    double sum_g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_f += model.llr(model.sample(CellState::normal, rng));
        sum_g += model.llr(model.sample(CellState::abnormal, rng));
    }
    const auto count = static_cast<double>(n);
    return KlPair{sum_g / count, -sum_f / count};
}

}  // namespace ccs
