#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ccs {

/// Random stream owned by a single episode. Every draw consumes exactly one
/// 64-bit word from the underlying engine, so streams are reproducible across
/// platforms for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a, used to fold names into seeds.
std::uint64_t fnv1a(std::string_view text);

/// Seed for one trial of one sweep cell.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view policy, std::uint64_t c_index,
                          std::uint64_t trial_index);

/// Independent sub-stream seed (truth, observations, policy randomness).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ccs
