#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "ccs/rng.hpp"

namespace ccs {

enum class CellState { normal, abnormal };

/// Both KL divergences between the abnormal law g and the normal law f, in nats.
struct KlPair {
    double d_g_f = 0.0;  // D(g||f): drift of a target's sum LLR
    double d_f_g = 0.0;  // D(f||g): minus the drift of a normal cell's sum LLR
};

struct Rayleigh {
    double sigma_f;
    double sigma_g;
};

/// Finite-alphabet model; observations are symbol indices stored as reals.
struct TableDiscrete {
    std::vector<double> p_f;
    std::vector<double> p_g;
};

/// The pair (f, g) of per-sample laws for normal and abnormal cells.
/// Immutable after construction; validated by the factories.
class ObservationModel {
public:
    using Kind = std::variant<Rayleigh, TableDiscrete>;

    /// Throws std::invalid_argument unless both scales are positive and distinct.
    static ObservationModel rayleigh(double sigma_f, double sigma_g);

    /// Throws std::invalid_argument unless both vectors are probability vectors
    /// of equal length >= 2 with identical support and f != g.
    static ObservationModel discrete(std::vector<double> p_f, std::vector<double> p_g);

    const Kind& kind() const { return kind_; }
    bool is_rayleigh() const { return std::holds_alternative<Rayleigh>(kind_); }

    /// One draw from f (normal) or g (abnormal). Consumes one uniform.
    double sample(CellState state, Rng& rng) const;

    /// Inverse-CDF transform of a given uniform in (0, 1).
    double sample_with_uniform(CellState state, double u) const;

    /// log(g(y) / f(y)). Throws std::domain_error outside the common support.
    double llr(double y) const;

    /// Closed form for Rayleigh, exact summation for discrete tables.
    KlPair kl() const;

    /// Roles of f and g exchanged.
    ObservationModel swapped() const;

private:
    explicit ObservationModel(Kind kind);

    Kind kind_;
    // Discrete: cumulative tables and per-symbol LLRs, precomputed.
    std::vector<double> cdf_f_;
    std::vector<double> cdf_g_;
    std::vector<double> symbol_llr_;
    // Rayleigh: llr(y) = offset + slope * y^2.
    double llr_offset_ = 0.0;
    double llr_slope_ = 0.0;
};

/// Sample-mean estimate of both divergences from n LLR draws under each law.
KlPair kl_monte_carlo(const ObservationModel& model, std::size_t n, Rng& rng);

}  // namespace ccs
