#include "ccs/belief_state.hpp"

#include <algorithm>
#include <numeric>

namespace ccs {

namespace {

// Strict weak order: higher sum first, lower index on ties.
struct RankOrder {
    std::span<const double> sums;
    bool operator()(Cell a, Cell b) const {
        if (sums[a] != sums[b]) {
            return sums[a] > sums[b];
        }
        return a < b;
    }
};

}  // namespace

BeliefState::BeliefState(std::size_t num_cells)
    : sums_(num_cells, 0.0), counts_(num_cells, 0), stamp_(num_cells, 0) {
    if (num_cells < 2) {
        throw ContractViolation("a search needs at least two cells");
    }
}

BeliefState BeliefState::from_sums(std::vector<double> sums) {
    BeliefState b(sums.size());
    b.sums_ = std::move(sums);
    return b;
}

void BeliefState::apply(std::span<const Observation> obs) {
    const std::uint64_t mark = ++apply_calls_;
    for (const auto& o : obs) {
        if (o.cell >= sums_.size()) {
            throw ContractViolation("observation for a cell outside 0..M-1");
        }
        if (stamp_[o.cell] == mark) {
            throw ContractViolation("cell probed by two machines in one step");
        }
        stamp_[o.cell] = mark;
    }
    for (const auto& o : obs) {
        sums_[o.cell] += o.llr;
        ++counts_[o.cell];
    }
    ++time_;
}

std::size_t BeliefState::h1_count() const {
    return static_cast<std::size_t>(std::count_if(sums_.begin(), sums_.end(), [](double s) { return s > 0.0; }));
}

double BeliefState::delta_l_s(std::size_t L) const {
    if (L < 1 || L >= sums_.size()) {
        throw ContractViolation("delta_l_s requires 1 <= L < M");
    }
    std::vector<double> top(L + 1);
    std::partial_sort_copy(sums_.begin(), sums_.end(), top.begin(), top.end(), std::greater<>());
    return top[L - 1] - top[L];
}

CellSet BeliefState::ranked() const {
    CellSet order(sums_.size());
    std::iota(order.begin(), order.end(), Cell{0});
    std::sort(order.begin(), order.end(), RankOrder{sums_});
    return order;
}

CellSet BeliefState::top(std::size_t L) const {
    L = std::min(L, sums_.size());
    CellSet order(sums_.size());
    std::iota(order.begin(), order.end(), Cell{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(L), order.end(), RankOrder{sums_});
    order.resize(L);
    return order;
}

}  // namespace ccs
