#ifndef NOMA_POWER_HPP
#define NOMA_POWER_HPP

#include <vector>

#include "noma/assignment.hpp"
#include "noma/gp.hpp"
#include "noma/power_allocation.hpp"
#include "noma/scenario.hpp"

namespace noma {

struct PowerOptions {
    int log_terms = 1;          // series terms inside the GP objectives
    bool use_gap = false;       // optimize capacity-gapped rates
    bool lean = false;          // ranking-only use: skip safety-net candidates
    double eps = 1e-4;          // condensation step tolerance
    int max_outer = 50;
    int inner_max_iter = 600;
    double inner_tol = 1e-8;
    std::vector<gp::CondensationTraceRow>* trace = nullptr;
};

struct AllocStats {
    int condensation_iterations = 0;
    long newton_iterations = 0;
    bool ftpa_fallback = false;   // a per-subchannel GP fell back to FTPA
    bool init_guard = false;      // initialization beat the solver in true EE
    bool coupled_solve = false;   // joint: budget was binding, coupled solve ran
    bool eem_early_stop = false;  // greedy: positive cells ran out before p_max
};

struct PowerResult {
    PowerAllocation alloc;
    AllocStats stats;
};

/// One-variable per-subchannel EE problem under a fixed FTPA split:
/// every member power is gamma_m * p_n and the total-rate term collapses
/// to a polynomial ratio C(p)/D(p) in p_n.
struct SubchannelEeProblem {
    int sc = 0;
    std::vector<double> member_gains;  // decode order is derived internally
    std::vector<double> gamma;         // FTPA weights, sum to 1
    double p_c = 0.0;
    double noise = 1.0;
    double p_cap = 0.0;
    double p_init = 0.0;  // 0 -> p_cap / 2
    int log_terms = 1;
    double sinr_gap = 1.0;  // multiplies every SINR (1 = gap-free)

    void validate() const;
};

struct SubchannelEeResult {
    double p_n = 0.0;   // maximizing total power for the subchannel
    double ee = 0.0;    // true (exact-log) EE at p_n
    int iterations = 0;
    long newton_iterations = 0;
    bool used_fallback = false;  // golden-section ran instead of the GP
};

/// Exact-log EE of the problem at a given p_n.
double subchannel_ee_at(const SubchannelEeProblem& prob, double p_n);
/// Series-approximated EE (the objective the solver maximizes), in nats.
double subchannel_ee_approx_at(const SubchannelEeProblem& prob, double p_n);

/// Single-condensation solve of the one-variable EE maximization, with a
/// golden-section fallback on the same objective.
SubchannelEeResult solve_subchannel_ee(const SubchannelEeProblem& prob,
                                       const PowerOptions& opts = {});

struct PerScResult {
    std::vector<double> powers;  // aligned with the input member list
    AllocStats stats;
};

/// Multi-variable per-subchannel EE allocation (cap on the total power,
/// SIC ordering enforced as monomial constraints). Falls back to the
/// FTPA split of the cap when the solver fails.
PerScResult per_sc_gp_allocate(int sc, const std::vector<int>& members, double p_n_cap,
                               const Scenario& scen, const PowerOptions& opts = {});

/// Joint EE power loading over all assigned slots under the BS budget.
/// Decomposes into per-subchannel solves whenever the budget is slack and
/// no per-subchannel floor is active; otherwise runs the coupled
/// condensation with auxiliary rate/efficiency variables.
PowerResult joint_gp_allocate(const Assignment& asg, const Scenario& scen,
                              const PowerOptions& opts = {});

/// Marginal-EE table driving the greedy allocator: rows are power levels
/// in steps of delta (last row capped at p_max), columns subchannels.
struct EemMatrix {
    double delta = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<double> values;  // row-major rows x cols
    std::vector<char> marked;

    double value(int row, int col) const { return values[static_cast<std::size_t>(row) * cols + col]; }
    bool is_marked(int row, int col) const { return marked[static_cast<std::size_t>(row) * cols + col] != 0; }
    void mark(int row, int col) { marked[static_cast<std::size_t>(row) * cols + col] = 1; }
    /// Power level of row index (0-based): (row+1)*delta, capped at p_max.
    double level(int row, double p_max) const;
};

EemMatrix build_eem_matrix(const Assignment& asg, const Scenario& scen, double delta,
                           const PowerOptions& opts = {});

/// Two-phase greedy loading: per-subchannel optima when they fit in the
/// budget, otherwise highest-marginal-EE increments until p_max is spent.
PowerResult greedy_eem_allocate(const Assignment& asg, const Scenario& scen, double delta,
                                const PowerOptions& opts = {});

/// Full-power comparison scheme: p_max split equally over subchannels and
/// by FTPA within each.
PowerResult baseline_full_power(const Assignment& asg, const Scenario& scen);

/// Maps per-user minimum rates to per-subchannel power floors by
/// inverting the FTPA-split rate, equal share per allocated subchannel.
/// Unreachable rates yield an infeasible flag for that user.
struct RateFloorResult {
    std::vector<double> p_n_min;         // per subchannel
    std::vector<int> infeasible_users;
};
RateFloorResult rate_floors(const Assignment& asg, const Scenario& scen, bool use_gap = false);

}  // namespace noma

#endif
