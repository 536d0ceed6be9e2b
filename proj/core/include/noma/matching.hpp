#ifndef NOMA_MATCHING_HPP
#define NOMA_MATCHING_HPP

#include <utility>
#include <vector>

#include "noma/assignment.hpp"
#include "noma/power.hpp"
#include "noma/scenario.hpp"

namespace noma {

/// How step-14 rates are computed while matching: a constant-time FTPA
/// split of the equal-share budget, or the per-subchannel GP allocation.
enum class RateEval { ftpa, per_sc_gp };

struct MatchingOptions {
    RateEval eval = RateEval::ftpa;
    /// Max subchannels per user; 0 means unlimited (many-to-many). 1 gives
    /// the one-to-many comparison behaviour.
    int user_quota = 0;
    bool use_gap = false;  // rank strategies by capacity-gapped rates
    bool record_trace = false;
    PowerOptions gp;  // solver knobs for RateEval::per_sc_gp
};

/// Addition when outgoing < 0, substitution otherwise.
struct Strategy {
    int sc = -1;
    int incoming = -1;
    int outgoing = -1;
};

struct ExecutedStrategy {
    int pass = 0;
    Strategy strategy;
    double rate_before = 0.0;
    double rate_after = 0.0;
};

struct MatchingResult {
    Assignment assignment;
    int passes = 0;  // passes that made at least one proposal
    long proposals = 0;
    long additions = 0;
    long substitutions = 0;
    long eval_fallbacks = 0;
    long newton_iterations = 0;
    std::vector<ExecutedStrategy> trace;                // record_trace only
    std::vector<std::pair<int, int>> proposal_log;      // record_trace only
};

/// Per-user subchannel preference lists, descending gain (ties by
/// subchannel index).
std::vector<std::vector<int>> build_preferences(const Scenario& scen);

/// Sum-rate of the subchannel under a hypothetical member set, with the
/// equal-share budget split by the chosen evaluator. Gap-free rates.
double evaluate_members_rate(int sc, const std::vector<int>& members, const Scenario& scen,
                             const MatchingOptions& opts, AllocStats* stats = nullptr);

/// Rate the subchannel would reach under the strategy, without mutating
/// the assignment.
double evaluate_strategy(const Strategy& s, const Assignment& asg, const Scenario& scen,
                         const MatchingOptions& opts, AllocStats* stats = nullptr);

/// Algorithm: every user repeatedly proposes its best untried subchannel;
/// the subchannel accepts the best strictly rate-improving addition or
/// substitution, rejections are final. Terminates at a pairwise-stable
/// matching.
MatchingResult run_matching(const Scenario& scen, const MatchingOptions& opts = {});

}  // namespace noma

#endif
