#include "ccs/ccs_policy.hpp"

#include <algorithm>
#include <cmath>

namespace ccs {

std::string_view to_string(CaseKind kind) {
    return kind == CaseKind::case1 ? "Case1" : "Case2";
}

CaseKind classify_case(const KlPair& kl, std::size_t M, std::size_t L) {
    const double load = static_cast<double>(L) * (kl.d_f_g / kl.d_g_f + 1.0);
    return load <= static_cast<double>(M) ? CaseKind::case1 : CaseKind::case2;
}

double rate_function(const KlPair& kl, std::size_t M, std::size_t K, std::size_t L) {
    const double normals = static_cast<double>(M - L);
    if (classify_case(kl, M, L) == CaseKind::case1) {
        return kl.d_g_f + static_cast<double>(K - L) * kl.d_f_g / normals;
    }
    return static_cast<double>(K) * kl.d_f_g / normals;
}

void CcsParams::validate() const {
    if (L < 1 || L > K || K > M || L >= M) {
        throw ContractViolation("CCS requires 1 <= L <= K <= M and L < M");
    }
    if (!(c > 0.0) || !(c < 1.0)) {
        throw ContractViolation("CCS requires 0 < c < 1");
    }
    if (!(kl.d_g_f > 0.0) || !(kl.d_f_g > 0.0)) {
        throw ContractViolation("CCS requires strictly positive KL divergences");
    }
}

std::pair<CellSet, std::size_t> exploration_cells(std::size_t M, std::size_t K, std::size_t cursor) {
    CellSet cells(K);
    for (std::size_t i = 0; i < K; ++i) {
        cells[i] = (cursor + i) % M;
    }
    return {std::move(cells), (cursor + K) % M};
}

ProbingSchedule build_schedule(const BeliefState& belief, const CcsParams& params, bool from_current_sums) {
    const std::size_t M = params.M;
    const std::size_t K = params.K;
    const std::size_t L = params.L;
    if (belief.num_cells() != M) {
        throw ContractViolation("belief size does not match M");
    }
    if (belief.h1_count() != L) {
        throw ContractViolation("a schedule is built only when exactly L sums are positive");
    }

    const CaseKind kind = classify_case(params.kl, M, L);
    const double rate = rate_function(params.kl, M, K, L);
    const std::size_t n = M - L;

    ProbingSchedule s;
    s.machines.resize(K);
    s.built_at = belief.time();

    const CellSet top = belief.top(L);
    s.suspected = top;
    std::sort(s.suspected.begin(), s.suspected.end());

    std::size_t first_normal = 0;
    std::size_t normal_count = 0;
    double share = 0.0;  // machines sharing the normal cells, as in the threshold formula
    if (kind == CaseKind::case1) {
        for (std::size_t k = 0; k < L; ++k) {
            s.target_machines.push_back(k);
            s.targets.push_back(top[k]);
        }
        first_normal = L;
        normal_count = K - L;
        share = static_cast<double>(K - L);
    } else {
        // More machines than normal cells would force a cell onto several
        // machines at once; surplus machines stay empty.
        normal_count = std::min(K, n);
        share = static_cast<double>(K);
    }
    s.full_threshold = share * params.kl.d_f_g * std::log(params.c) / (static_cast<double>(n) * rate);

    if (normal_count == 0) {
        return s;
    }

    CellSet normals;
    normals.reserve(n);
    for (Cell m = 0; m < M; ++m) {
        if (!std::binary_search(s.suspected.begin(), s.suspected.end(), m)) {
            normals.push_back(m);
        }
    }

    // Exact integer layout: cell i spans [i*Kn, (i+1)*Kn), machine k spans
    // [k*n, (k+1)*n), so each machine holds n/Kn cell lengths.
    const std::size_t kn = normal_count;
    const double unit = static_cast<double>(kn);
    for (std::size_t k = 0; k < kn; ++k) {
        const std::size_t machine = first_normal + k;
        s.normal_machines.push_back(machine);
        const std::size_t lo = k * n;
        const std::size_t hi = (k + 1) * n;
        for (std::size_t i = lo / kn; i < n && i * kn < hi; ++i) {
            const std::size_t cell_lo = i * kn;
            const std::size_t cell_hi = (i + 1) * kn;
            const std::size_t overlap = std::min(cell_hi, hi) - std::max(cell_lo, lo);
            if (overlap == 0) {
                continue;
            }
            Segment seg{normals[i], static_cast<double>(overlap) / unit, s.full_threshold};
            if (cell_lo < lo) {
                // Continuation of a cell begun on the previous machine: this
                // piece is probed first, down to its own share of the target.
                seg.threshold = seg.fraction * s.full_threshold;
            }
            if (from_current_sums) {
                seg.threshold += belief.sum(seg.cell);
            }
            s.machines[machine].push_back(seg);
        }
    }
    return s;
}

CcsPolicy::CcsPolicy(CcsParams params) : params_(params) {
    params_.validate();
    case_ = classify_case(params_.kl, params_.M, params_.L);
    rate_ = rate_function(params_.kl, params_.M, params_.K, params_.L);
}

Play CcsPolicy::next_play(const BeliefState& belief, Rng& /*rng*/) {
    return next_play(belief);
}

Play CcsPolicy::next_play(const BeliefState& belief) {
    if (belief.h1_count() != params_.L) {
        exploring_ = true;
        auto [cells, next] = exploration_cells(params_.M, params_.K, cursor_);
        cursor_ = next;
        return Play{std::move(cells), true};
    }
    if (exploring_ || !schedule_ || !suspects_match(belief)) {
        rebuild(belief);
        exploring_ = false;
    }
    return Play{exploitation_cells(belief), false};
}

void CcsPolicy::rebuild(const BeliefState& belief, bool from_current_sums) {
    schedule_ = build_schedule(belief, params_, from_current_sums);
    position_.assign(params_.K, 0);
    ++schedules_built_;
}

bool CcsPolicy::suspects_match(const BeliefState& belief) const {
    const auto& suspected = schedule_->suspected;
    std::size_t idx = 0;
    for (Cell m = 0; m < belief.num_cells(); ++m) {
        if (belief.sum(m) > 0.0) {
            if (idx >= suspected.size() || suspected[idx] != m) {
                return false;
            }
            ++idx;
        }
    }
    return idx == suspected.size();
}

bool CcsPolicy::advance_segments(const BeliefState& belief) {
    bool all_done = true;
    for (std::size_t k : schedule_->normal_machines) {
        const auto& segs = schedule_->machines[k];
        auto& pos = position_[k];
        while (pos < segs.size() && belief.sum(segs[pos].cell) < segs[pos].threshold) {
            ++pos;
        }
        all_done = all_done && pos == segs.size();
    }
    return all_done;
}

CellSet CcsPolicy::exploitation_cells(const BeliefState& belief) {
    if (advance_segments(belief) && !schedule_->normal_machines.empty()) {
        // Every normal machine ran out before the stop condition: start a
        // new round measured from the current sums.
        rebuild(belief, true);
        advance_segments(belief);
    }

    const auto& s = *schedule_;
    CellSet cells = s.targets;
    const auto& normal = s.normal_machines;
    for (std::size_t idx = 0; idx < normal.size(); ++idx) {
        const std::size_t k = normal[idx];
        if (position_[k] >= s.machines[k].size()) {
            continue;
        }
        const Cell cell = s.machines[k][position_[k]].cell;
        if (idx + 1 < normal.size()) {
            const std::size_t next = normal[idx + 1];
            if (position_[next] < s.machines[next].size() && s.machines[next][position_[next]].cell == cell) {
                // The next machine is still on its share of a split cell; wait.
                continue;
            }
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace ccs
