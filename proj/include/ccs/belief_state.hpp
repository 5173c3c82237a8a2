#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ccs {

/// Cells are indexed 0..M-1 throughout the library.
using Cell = std::size_t;
using CellSet = std::vector<Cell>;

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Observation {
    Cell cell;
    double llr;
};

/// Per-cell observed sum LLRs S_m(n) and sample counts at time n.
class BeliefState {
public:
    /// Throws ContractViolation if num_cells < 2.
    explicit BeliefState(std::size_t num_cells);

    std::size_t num_cells() const { return sums_.size(); }
    std::uint64_t time() const { return time_; }
    std::span<const double> sums() const { return sums_; }
    std::span<const std::uint64_t> counts() const { return counts_; }
    double sum(Cell m) const { return sums_[m]; }

    /// Adds one step's observations (distinct cells) and advances time by one.
    /// An empty set is an idle step. Throws ContractViolation on a duplicate
    /// or out-of-range cell; the state is left untouched in that case.
    void apply(std::span<const Observation> obs);

    /// Number of cells with strictly positive sum LLR.
    std::size_t h1_count() const;

    /// Gap between the L-th and (L+1)-th highest sums. Requires 1 <= L < M.
    double delta_l_s(std::size_t L) const;

    /// Cells by descending sum, ties broken by ascending index.
    CellSet ranked() const;

    /// The first L entries of ranked(), in rank order.
    CellSet top(std::size_t L) const;

    /// Testing hook: a belief with the given sums and zero counts at time 0.
    static BeliefState from_sums(std::vector<double> sums);

private:
    std::vector<double> sums_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> stamp_;  // duplicate detection within a step
    std::uint64_t time_ = 0;
    std::uint64_t apply_calls_ = 0;  // stamp value, bumped even by rejected calls
};

}  // namespace ccs
