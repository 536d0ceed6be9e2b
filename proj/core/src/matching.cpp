#include "noma/matching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "noma/rates.hpp"

namespace noma {

std::vector<std::vector<int>> build_preferences(const Scenario& scen) {
    std::vector<std::vector<int>> prefs(scen.num_users);
    for (int m = 0; m < scen.num_users; ++m) {
        auto& list = prefs[m];
        list.resize(scen.num_subchannels);
        for (int n = 0; n < scen.num_subchannels; ++n) list[n] = n;
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            return scen.gain(m, a) > scen.gain(m, b);
        });
    }
    return prefs;
}

double evaluate_members_rate(int sc, const std::vector<int>& members, const Scenario& scen,
                             const MatchingOptions& opts, AllocStats* stats) {
    if (members.empty()) return 0.0;
    const double p_n = scen.equal_split_power();
    std::vector<double> powers;
    if (opts.eval == RateEval::ftpa) {
        std::vector<double> gains(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) gains[i] = scen.gain(members[i], sc);
        powers = ftpa_split(gains, scen.ftpa_alpha, p_n);
    } else {
        PowerOptions gp_opts = opts.gp;
        gp_opts.use_gap = opts.use_gap;
        auto res = per_sc_gp_allocate(sc, members, p_n, scen, gp_opts);
        powers = std::move(res.powers);
        if (stats) {
            stats->newton_iterations += res.stats.newton_iterations;
            if (res.stats.ftpa_fallback) stats->ftpa_fallback = true;
        }
    }
    return members_rate(sc, members, powers, scen, opts.use_gap);
}

double evaluate_strategy(const Strategy& s, const Assignment& asg, const Scenario& scen,
                         const MatchingOptions& opts, AllocStats* stats) {
    if (s.sc < 0 || s.incoming < 0) throw std::invalid_argument("evaluate_strategy: malformed");
    std::vector<int> members;
    for (int m : asg.members(s.sc))
        if (m != s.outgoing) members.push_back(m);
    members.push_back(s.incoming);
    std::sort(members.begin(), members.end());
    return evaluate_members_rate(s.sc, members, scen, opts, stats);
}

namespace {

/// Membership-keyed rate cache; memberships recur heavily across passes
/// and the GP evaluation is the dominant cost.
class RateCache {
public:
    double get(int sc, const std::vector<int>& members, const Scenario& scen,
               const MatchingOptions& opts, AllocStats* stats, long* fallbacks) {
        Key key{sc, members};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        AllocStats local;
        const double rate = evaluate_members_rate(sc, members, scen, opts, &local);
        if (stats) stats->newton_iterations += local.newton_iterations;
        if (local.ftpa_fallback && fallbacks) ++(*fallbacks);
        cache_.emplace(std::move(key), rate);
        return rate;
    }

private:
    using Key = std::pair<int, std::vector<int>>;
    std::map<Key, double> cache_;
};

}  // namespace

MatchingResult run_matching(const Scenario& scen, const MatchingOptions& opts) {
    scen.validate();
    MatchingResult res;
    res.assignment = Assignment(scen.num_users, scen.num_subchannels, scen.max_users_per_sc);
    Assignment& asg = res.assignment;

    const auto prefs = build_preferences(scen);
    const int quota = opts.user_quota > 0 ? opts.user_quota : scen.num_subchannels;
    RateCache cache;
    AllocStats eval_stats;

    const long pass_cap = 2L * scen.num_users * scen.num_subchannels + 2;
    for (long pass = 1; pass <= pass_cap; ++pass) {
        long proposals_this_pass = 0;
        for (int m = 0; m < scen.num_users; ++m) {
            if (static_cast<int>(asg.subchannels(m).size()) >= quota) continue;

            int n = -1;
            for (int cand : prefs[m]) {
                if (asg.is_assigned(m, cand) || asg.is_rejected(m, cand)) continue;
                n = cand;
                break;
            }
            if (n < 0) continue;

            ++proposals_this_pass;
            ++res.proposals;
            if (opts.record_trace) res.proposal_log.emplace_back(m, n);

            const std::vector<int> current = asg.members(n);
            const double rate_prev =
                cache.get(n, current, scen, opts, &eval_stats, &res.eval_fallbacks);

            // Candidate strategies: one addition below capacity, otherwise
            // every single-user substitution.
            std::vector<Strategy> strategies;
            if (static_cast<int>(current.size()) < asg.capacity()) {
                strategies.push_back({n, m, -1});
            } else {
                for (int out : current) strategies.push_back({n, m, out});
            }

            Strategy best{};
            double best_rate = 0.0;
            bool have_best = false;
            for (const auto& s : strategies) {
                std::vector<int> members;
                for (int u : current)
                    if (u != s.outgoing) members.push_back(u);
                members.push_back(s.incoming);
                std::sort(members.begin(), members.end());
                double rate;
                try {
                    rate = cache.get(n, members, scen, opts, &eval_stats, &res.eval_fallbacks);
                } catch (const std::exception&) {
                    continue;  // failed evaluation counts as non-improving
                }
                if (!(rate - rate_prev > 0.0)) continue;
                // Tie-break: higher rate, then addition, then lower outgoing index.
                const bool better =
                    !have_best || rate > best_rate ||
                    (rate == best_rate &&
                     (s.outgoing < 0 || (best.outgoing >= 0 && s.outgoing < best.outgoing)));
                if (better) {
                    best = s;
                    best_rate = rate;
                    have_best = true;
                }
            }

            if (!have_best) {
                asg.reject(m, n);
                continue;
            }
            if (best.outgoing >= 0) {
                asg.remove(best.outgoing, n);
                asg.add(m, n);
                asg.reject(best.outgoing, n);  // displaced pairs never re-propose
                ++res.substitutions;
            } else {
                asg.add(m, n);
                ++res.additions;
            }
            if (opts.record_trace)
                res.trace.push_back({static_cast<int>(pass), best, rate_prev, best_rate});
        }
        if (proposals_this_pass == 0) break;
        ++res.passes;
        if (pass == pass_cap)
            throw std::logic_error("run_matching: pass cap exceeded, matching did not settle");
    }

    res.newton_iterations = eval_stats.newton_iterations;
    asg.check_consistency();
    return res;
}

}  // namespace noma
