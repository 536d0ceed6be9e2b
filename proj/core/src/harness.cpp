#include "noma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "noma/rates.hpp"
#include "noma/rng.hpp"

namespace noma {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Stats {
    double mean = 0.0, median = 0.0, stddev = 0.0;
};

Stats summarize(std::vector<double> v) {
    Stats s;
    if (v.empty()) return s;
    const double n = static_cast<double>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    s.median = (v.size() % 2) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    if (v.size() > 1) {
        double acc = 0.0;
        for (double x : v) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / (n - 1.0));
    }
    return s;
}

}  // namespace

const char* sweep_kind_name(SweepKind k) {
    switch (k) {
        case SweepKind::users: return "users";
        case SweepKind::p_max_dbw: return "pmax_dbw";
        case SweepKind::p_c_dbw: return "pc_dbw";
    }
    return "?";
}

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::scheme1: return "scheme1";
        case SchemeId::scheme2: return "scheme2";
        case SchemeId::scheme3: return "scheme3";
        case SchemeId::scheme4: return "scheme4";
        case SchemeId::scheme5: return "scheme5";
        case SchemeId::baseline: return "baseline";
    }
    return "?";
}

std::optional<SchemeId> scheme_from_name(const std::string& name) {
    for (SchemeId id : all_schemes())
        if (name == scheme_name(id)) return id;
    return std::nullopt;
}

std::vector<SchemeId> all_schemes() {
    return {SchemeId::scheme1, SchemeId::scheme2, SchemeId::scheme3,
            SchemeId::scheme4, SchemeId::scheme5, SchemeId::baseline};
}

SchemeSpec scheme_spec(SchemeId id) {
    using P = SchemeSpec::Power;
    switch (id) {
        case SchemeId::scheme1: return {id, true, RateEval::ftpa, P::full};
        case SchemeId::scheme2: return {id, false, RateEval::ftpa, P::joint_gp};
        case SchemeId::scheme3: return {id, true, RateEval::ftpa, P::joint_gp};
        case SchemeId::scheme4: return {id, true, RateEval::per_sc_gp, P::joint_gp};
        case SchemeId::scheme5: return {id, true, RateEval::per_sc_gp, P::greedy_eem};
        case SchemeId::baseline: return {id, false, RateEval::ftpa, P::full};
    }
    throw std::invalid_argument("scheme_spec: unknown scheme");
}

void ExperimentConfig::validate() const {
    cell.validate();
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (sweep_values.empty()) throw std::invalid_argument("ExperimentConfig: empty sweep");
    for (double v : sweep_values)
        if (!(v > 0.0) && sweep_kind == SweepKind::users)
            throw std::invalid_argument("ExperimentConfig: sweep values must be positive");
    if (schemes.empty()) throw std::invalid_argument("ExperimentConfig: no schemes selected");
    if (num_users < 1 || num_subchannels < 1 || max_users_per_sc < 1)
        throw std::invalid_argument("ExperimentConfig: bad dimensions");
    if (log_terms != 1 && log_terms != 2)
        throw std::invalid_argument("ExperimentConfig: log_terms must be 1 or 2");
    if (delta < 0.0) throw std::invalid_argument("ExperimentConfig: delta must be >= 0");
}

std::uint64_t trial_seed(std::uint64_t base, double sweep_value, int trial) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(sweep_value);
    return derive_seed(derive_seed(base, v), static_cast<std::uint64_t>(trial) + 0x7261696cULL);
}

Scenario scenario_for(const ExperimentConfig& cfg, double sweep_value, int trial) {
    ScenarioParams params;
    params.num_users = cfg.num_users;
    params.num_subchannels = cfg.num_subchannels;
    params.max_users_per_sc = cfg.max_users_per_sc;
    params.p_max_dbw = cfg.p_max_dbw;
    params.p_c_dbw = cfg.p_c_dbw;
    params.ftpa_alpha = cfg.ftpa_alpha;
    switch (cfg.sweep_kind) {
        case SweepKind::users: params.num_users = static_cast<int>(sweep_value); break;
        case SweepKind::p_max_dbw: params.p_max_dbw = sweep_value; break;
        case SweepKind::p_c_dbw: params.p_c_dbw = sweep_value; break;
    }
    params.seed = trial_seed(cfg.seed, sweep_value, trial);
    return build_scenario(cfg.cell, params);
}

namespace {

MatchingOptions matching_options_for(const SchemeSpec& spec, int log_terms, bool use_gap) {
    MatchingOptions mopts;
    mopts.eval = spec.eval;
    mopts.user_quota = spec.many_to_many ? 0 : 1;
    mopts.use_gap = use_gap;
    mopts.gp.log_terms = log_terms;
    // Matching-stage evaluations rank memberships; looser solves suffice.
    mopts.gp.lean = true;
    mopts.gp.eps = 1e-1;
    mopts.gp.max_outer = 2;
    mopts.gp.inner_tol = 1e-2;
    return mopts;
}

TrialResult run_trial_matched(const ExperimentConfig& cfg, SchemeId scheme, double sweep_value,
                              int trial, const Scenario& scen, const MatchingResult& match,
                              TrialDump* dump, std::vector<gp::CondensationTraceRow>* gp_trace) {
    TrialResult out;
    out.scheme = scheme;
    out.sweep_value = sweep_value;
    out.trial = trial;
    const SchemeSpec spec = scheme_spec(scheme);

    PowerOptions popts;
    popts.log_terms = cfg.log_terms;
    popts.use_gap = !cfg.ideal;
    popts.eps = 1e-3;
    popts.max_outer = 25;
    popts.inner_tol = 1e-6;
    popts.trace = gp_trace;

    PowerResult power;
    switch (spec.power) {
        case SchemeSpec::Power::full:
            power = baseline_full_power(match.assignment, scen);
            break;
        case SchemeSpec::Power::joint_gp:
            power = joint_gp_allocate(match.assignment, scen, popts);
            break;
        case SchemeSpec::Power::greedy_eem: {
            const double delta = cfg.delta > 0.0 ? cfg.delta : scen.p_max_w / 100.0;
            power = greedy_eem_allocate(match.assignment, scen, delta, popts);
            break;
        }
    }

    const bool use_gap = !cfg.ideal;
    out.total_ee = total_ee(match.assignment, power.alloc, scen, use_gap);
    out.total_power_w = power.alloc.total();
    out.total_throughput = total_rate(match.assignment, power.alloc, scen, use_gap);
    out.matching_passes = match.passes;
    out.solver_iterations = match.newton_iterations + power.stats.newton_iterations;

    out.per_sc_users_hist.assign(scen.max_users_per_sc + 1, 0);
    for (int n = 0; n < scen.num_subchannels; ++n)
        ++out.per_sc_users_hist[match.assignment.members(n).size()];
    out.per_user_scs_hist.assign(scen.num_subchannels + 1, 0);
    for (int m = 0; m < scen.num_users; ++m)
        ++out.per_user_scs_hist[match.assignment.subchannels(m).size()];

    if (dump) {
        dump->sweep_value = sweep_value;
        dump->scheme = scheme;
        dump->trial = trial;
        dump->assignment = match.assignment;
        dump->powers = power.alloc;
    }
    return out;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, SchemeId scheme, double sweep_value, int trial,
                      TrialDump* dump, std::vector<gp::CondensationTraceRow>* gp_trace) {
    const Scenario scen = scenario_for(cfg, sweep_value, trial);
    const SchemeSpec spec = scheme_spec(scheme);
    const MatchingResult match =
        run_matching(scen, matching_options_for(spec, cfg.log_terms, !cfg.ideal));
    return run_trial_matched(cfg, scheme, sweep_value, trial, scen, match, dump, gp_trace);
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResults results;
    results.config = cfg;

    struct Cell {
        double sweep_value;
        int sweep_index;
        int trial;
    };
    std::vector<Cell> cells;
    for (int vi = 0; vi < static_cast<int>(cfg.sweep_values.size()); ++vi)
        for (int t = 0; t < cfg.trials; ++t) cells.push_back({cfg.sweep_values[vi], vi, t});

    const std::size_t n_schemes = cfg.schemes.size();
    results.trials.resize(cells.size() * n_schemes);
    if (cfg.dump_trials) results.dumps.resize(results.trials.size());

    const bool tracing = !cfg.gp_trace_path.empty();
    std::vector<gp::CondensationTraceRow> trace_rows;

    unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
    if (tracing) workers = 1;  // the trace sink is shared

    // Result slot for (sweep, scheme, trial), keeping the documented
    // (sweep value, scheme, trial) output order.
    auto slot_index = [&](const Cell& c, std::size_t scheme_idx) {
        return (static_cast<std::size_t>(c.sweep_index) * n_schemes + scheme_idx) *
                   static_cast<std::size_t>(cfg.trials) +
               static_cast<std::size_t>(c.trial);
    };

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];

            Scenario scen;
            bool scen_ok = true;
            std::string scen_error;
            try {
                scen = scenario_for(cfg, cell.sweep_value, cell.trial);
            } catch (const std::exception& e) {
                scen_ok = false;
                scen_error = e.what();
            }

            // Schemes with the same matching profile share one run.
            struct MatchSlot {
                bool ready = false;
                bool failed = false;
                std::string error;
                MatchingResult result;
            };
            std::map<std::tuple<bool, RateEval>, MatchSlot> matchings;

            for (std::size_t si = 0; si < n_schemes; ++si) {
                const SchemeId scheme = cfg.schemes[si];
                TrialResult& slot = results.trials[slot_index(cell, si)];
                slot.scheme = scheme;
                slot.sweep_value = cell.sweep_value;
                slot.trial = cell.trial;
                if (!scen_ok) {
                    slot.failed = true;
                    slot.error = scen_error;
                    continue;
                }
                const SchemeSpec spec = scheme_spec(scheme);
                MatchSlot& ms = matchings[{spec.many_to_many, spec.eval}];
                if (!ms.ready) {
                    ms.ready = true;
                    try {
                        ms.result = run_matching(
                            scen, matching_options_for(spec, cfg.log_terms, !cfg.ideal));
                    } catch (const std::exception& e) {
                        ms.failed = true;
                        ms.error = e.what();
                    }
                }
                if (ms.failed) {
                    slot.failed = true;
                    slot.error = ms.error;
                    continue;
                }
                try {
                    slot = run_trial_matched(
                        cfg, scheme, cell.sweep_value, cell.trial, scen, ms.result,
                        cfg.dump_trials ? &results.dumps[slot_index(cell, si)] : nullptr,
                        tracing ? &trace_rows : nullptr);
                } catch (const std::exception& e) {
                    slot.failed = true;
                    slot.error = e.what();
                }
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    long failures = 0;
    for (const auto& t : results.trials)
        if (t.failed) ++failures;
    if (failures * 20 > static_cast<long>(results.trials.size()))
        throw std::runtime_error("run_experiment: more than 5% of trials failed (" +
                                 std::to_string(failures) + "/" +
                                 std::to_string(results.trials.size()) + ")");

    // Aggregates in deterministic (sweep value, scheme) order.
    for (double v : cfg.sweep_values) {
        for (SchemeId s : cfg.schemes) {
            DataPoint dp;
            dp.sweep_value = v;
            dp.scheme = s;
            std::vector<double> ee, power, thr;
            for (const auto& t : results.trials) {
                if (t.sweep_value != v || t.scheme != s) continue;
                ++dp.trials;
                if (t.failed) {
                    ++dp.failures;
                    continue;
                }
                ee.push_back(t.total_ee);
                power.push_back(t.total_power_w);
                thr.push_back(t.total_throughput);
            }
            const Stats se = summarize(ee), sp = summarize(power), st = summarize(thr);
            dp.ee_mean = se.mean;
            dp.ee_median = se.median;
            dp.ee_std = se.stddev;
            dp.power_mean = sp.mean;
            dp.power_median = sp.median;
            dp.power_std = sp.stddev;
            dp.throughput_mean = st.mean;
            dp.throughput_median = st.median;
            dp.throughput_std = st.stddev;
            results.aggregates.push_back(dp);
        }
    }

    if (tracing) {
        std::ofstream os(cfg.gp_trace_path);
        if (!os) throw std::runtime_error("run_experiment: cannot open " + cfg.gp_trace_path);
        os << "solve,iteration,objective,step_norm\n";
        int solve_id = 0;
        for (const auto& row : trace_rows) {
            if (row.iteration == 1) ++solve_id;
            os << solve_id << ',' << row.iteration << ',' << fmt_double(row.objective) << ','
               << fmt_double(row.step_norm) << '\n';
        }
    }
    return results;
}

namespace {

void write_aggregate_csv(const ExperimentResults& results, const fs::path& path,
                         SweepKind kind, const char* metric) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_figures_data: cannot open " + path.string());
    os << sweep_kind_name(kind) << ",scheme,trials,failures,mean,median,std\n";
    if (results.config.sweep_kind != kind) return;  // headers only
    for (const auto& dp : results.aggregates) {
        double mean = dp.ee_mean, median = dp.ee_median, stddev = dp.ee_std;
        if (std::string(metric) == "power") {
            mean = dp.power_mean;
            median = dp.power_median;
            stddev = dp.power_std;
        } else if (std::string(metric) == "throughput") {
            mean = dp.throughput_mean;
            median = dp.throughput_median;
            stddev = dp.throughput_std;
        }
        os << fmt_double(dp.sweep_value) << ',' << scheme_name(dp.scheme) << ',' << dp.trials
           << ',' << dp.failures << ',' << fmt_double(mean) << ',' << fmt_double(median) << ','
           << fmt_double(stddev) << '\n';
    }
}

}  // namespace

void emit_figures_data(const ExperimentResults& results, const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_figures_data: cannot create " + out_dir + ": " +
                                     ec.message());

    write_aggregate_csv(results, dir / "ee_vs_users.csv", SweepKind::users, "ee");
    write_aggregate_csv(results, dir / "power_vs_users.csv", SweepKind::users, "power");
    write_aggregate_csv(results, dir / "throughput_vs_users.csv", SweepKind::users, "throughput");
    write_aggregate_csv(results, dir / "ee_vs_pmax.csv", SweepKind::p_max_dbw, "ee");
    write_aggregate_csv(results, dir / "power_vs_pmax.csv", SweepKind::p_max_dbw, "power");
    write_aggregate_csv(results, dir / "ee_vs_pc.csv", SweepKind::p_c_dbw, "ee");
    write_aggregate_csv(results, dir / "power_vs_pc.csv", SweepKind::p_c_dbw, "power");

    {
        const fs::path path = dir / "per_trial.csv";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("emit_figures_data: cannot open " + path.string());
        os << sweep_kind_name(results.config.sweep_kind)
           << ",scheme,trial,total_ee,total_power_w,total_throughput,matching_passes,"
              "solver_iterations,error\n";
        for (const auto& t : results.trials) {
            os << fmt_double(t.sweep_value) << ',' << scheme_name(t.scheme) << ',' << t.trial
               << ',' << fmt_double(t.total_ee) << ',' << fmt_double(t.total_power_w) << ','
               << fmt_double(t.total_throughput) << ',' << t.matching_passes << ','
               << t.solver_iterations << ',' << (t.failed ? t.error : "") << '\n';
        }
    }

    {
        json hist;
        hist["sweep_kind"] = sweep_kind_name(results.config.sweep_kind);
        hist["points"] = json::array();
        for (double v : results.config.sweep_values) {
            for (SchemeId s : results.config.schemes) {
                std::vector<long> sc_hist, user_hist;
                for (const auto& t : results.trials) {
                    if (t.sweep_value != v || t.scheme != s || t.failed) continue;
                    if (sc_hist.size() < t.per_sc_users_hist.size())
                        sc_hist.resize(t.per_sc_users_hist.size(), 0);
                    for (std::size_t i = 0; i < t.per_sc_users_hist.size(); ++i)
                        sc_hist[i] += t.per_sc_users_hist[i];
                    if (user_hist.size() < t.per_user_scs_hist.size())
                        user_hist.resize(t.per_user_scs_hist.size(), 0);
                    for (std::size_t i = 0; i < t.per_user_scs_hist.size(); ++i)
                        user_hist[i] += t.per_user_scs_hist[i];
                }
                json point;
                point["sweep_value"] = v;
                point["scheme"] = scheme_name(s);
                point["users_per_sc"] = sc_hist;
                point["scs_per_user"] = user_hist;
                hist["points"].push_back(std::move(point));
            }
        }
        std::ofstream os(dir / "sc_user_histograms.json");
        if (!os) throw std::runtime_error("emit_figures_data: cannot open histogram json");
        os << hist.dump(2) << '\n';
    }

    if (results.config.dump_trials) {
        json dumps = json::array();
        for (const auto& d : results.dumps) {
            json jd;
            jd["sweep_value"] = d.sweep_value;
            jd["scheme"] = scheme_name(d.scheme);
            jd["trial"] = d.trial;
            json members = json::array();
            for (int n = 0; n < d.assignment.num_subchannels(); ++n)
                members.push_back(d.assignment.members(n));
            jd["users_per_sc"] = std::move(members);
            json scs = json::array();
            for (int m = 0; m < d.assignment.num_users(); ++m)
                scs.push_back(d.assignment.subchannels(m));
            jd["scs_per_user"] = std::move(scs);
            json slots = json::array();
            for (int n = 0; n < d.powers.num_subchannels(); ++n)
                for (const auto& [user, p] : d.powers.slots(n))
                    slots.push_back({{"user", user}, {"sc", n}, {"power", p}});
            jd["powers"] = std::move(slots);
            dumps.push_back(std::move(jd));
        }
        std::ofstream os(dir / "trial_dumps.json");
        if (!os) throw std::runtime_error("emit_figures_data: cannot open trial dump json");
        os << dumps.dump(2) << '\n';
    }
}

OracleResult brute_force_oracle(const Scenario& scen, double grid_step) {
    scen.validate();
    if (scen.num_users > 4 || scen.num_subchannels > 3 || scen.max_users_per_sc > 2)
        throw std::invalid_argument("brute_force_oracle: instance too large (M<=4, N<=3, K<=2)");
    if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force_oracle: bad grid step");

    const int M = scen.num_users, N = scen.num_subchannels, K = scen.max_users_per_sc;
    const int levels = static_cast<int>(std::floor(scen.p_max_w / grid_step + 1e-9));

    // Feasible member sets per subchannel as user bitmasks.
    std::vector<int> masks;
    for (int mask = 0; mask < (1 << M); ++mask)
        if (std::popcount(static_cast<unsigned>(mask)) <= K) masks.push_back(mask);

    struct CellBest {
        double rate = 0.0;          // best sum-rate at this total power
        std::vector<double> split;  // powers by ascending user index
    };
    // best intra-subchannel split per (sc, mask, total-level)
    std::vector<std::vector<std::vector<CellBest>>> table(
        N, std::vector<std::vector<CellBest>>(masks.size()));

    for (int n = 0; n < N; ++n) {
        for (std::size_t mi = 0; mi < masks.size(); ++mi) {
            const int mask = masks[mi];
            std::vector<int> members;
            for (int m = 0; m < M; ++m)
                if (mask & (1 << m)) members.push_back(m);
            auto& column = table[n][mi];
            column.resize(levels + 1);
            if (members.empty()) continue;

            for (int l = 0; l <= levels; ++l) {
                const double total = l * grid_step;
                CellBest best;
                if (members.size() == 1) {
                    best.split = {total};
                    best.rate = members_rate(n, members, best.split, scen, false);
                } else {
                    // Two members: decode order fixes who must get the
                    // smaller share (weak inequality on the grid).
                    const bool first_stronger =
                        stronger_on_sc(scen, n, members[0], members[1]);
                    best.rate = -1.0;
                    for (int i = 0; i <= l; ++i) {
                        const double p0 = i * grid_step;
                        const double p1 = total - p0;
                        if (first_stronger ? (p0 > p1) : (p1 > p0)) continue;
                        std::vector<double> split{p0, p1};
                        const double r = members_rate(n, members, split, scen, false);
                        if (r > best.rate) {
                            best.rate = r;
                            best.split = split;
                        }
                    }
                }
                column[l] = std::move(best);
            }
        }
    }

    auto sc_ee = [&](int n, std::size_t mi, int l) {
        const double rate = table[n][mi][l].rate;
        if (rate <= 0.0) return 0.0;
        return rate / (scen.p_c_w + l * grid_step);
    };

    OracleResult out;
    out.assignment = Assignment(M, N, K);
    out.powers = PowerAllocation(N);
    out.ee = -1.0;

    // Enumerate assignments (mask per subchannel), then budget-DP over
    // subchannels for the best per-subchannel power levels.
    std::vector<std::size_t> choice(N, 0);
    std::vector<std::vector<double>> dp(N + 1, std::vector<double>(levels + 1, 0.0));
    std::vector<std::vector<int>> take(N, std::vector<int>(levels + 1, 0));

    auto evaluate_choice = [&]() {
        for (int b = 0; b <= levels; ++b) dp[0][b] = 0.0;
        for (int n = 0; n < N; ++n) {
            for (int b = 0; b <= levels; ++b) {
                double best = -1.0;
                int best_l = 0;
                for (int l = 0; l <= b; ++l) {
                    const double v = dp[n][b - l] + sc_ee(n, choice[n], l);
                    if (v > best) {
                        best = v;
                        best_l = l;
                    }
                }
                dp[n + 1][b] = best;
                take[n][b] = best_l;
            }
        }
        if (dp[N][levels] > out.ee) {
            out.ee = dp[N][levels];
            out.assignment = Assignment(M, N, K);
            out.powers = PowerAllocation(N);
            int budget = levels;
            for (int n = N - 1; n >= 0; --n) {
                const int l = take[n][budget];
                budget -= l;
                const int mask = masks[choice[n]];
                std::vector<int> members;
                for (int m = 0; m < M; ++m)
                    if (mask & (1 << m)) members.push_back(m);
                const auto& cell = table[n][choice[n]][l];
                for (std::size_t i = 0; i < members.size(); ++i) {
                    out.assignment.add(members[i], n);
                    out.powers.set(members[i], n, cell.split.empty() ? 0.0 : cell.split[i]);
                }
            }
        }
    };

    // Odometer over per-subchannel member sets.
    for (;;) {
        evaluate_choice();
        int pos = 0;
        while (pos < N) {
            if (++choice[pos] < masks.size()) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == N) break;
    }
    return out;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config_from_json_file: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config_from_json_file: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    if (j.contains("cell")) {
        const auto& c = j["cell"];
        auto get = [&](const char* key, double& field) {
            if (c.contains(key)) field = c[key].get<double>();
        };
        get("radius_m", cfg.cell.radius_m);
        get("min_user_bs_dist_m", cfg.cell.min_user_bs_dist_m);
        get("min_user_user_dist_m", cfg.cell.min_user_user_dist_m);
        get("ref_dist_m", cfg.cell.ref_dist_m);
        get("ref_snr_db", cfg.cell.ref_snr_db);
        get("shadow_variance", cfg.cell.shadow_variance);
        get("rayleigh_variance", cfg.cell.rayleigh_variance);
        get("pathloss_exponent", cfg.cell.pathloss_exponent);
        get("bandwidth_per_sc_hz", cfg.cell.bandwidth_per_sc_hz);
        get("ber", cfg.cell.ber);
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        int kinds = 0;
        if (s.contains("users")) {
            cfg.sweep_kind = SweepKind::users;
            cfg.sweep_values = s["users"].get<std::vector<double>>();
            ++kinds;
        }
        if (s.contains("pmax_dbw")) {
            cfg.sweep_kind = SweepKind::p_max_dbw;
            cfg.sweep_values = s["pmax_dbw"].get<std::vector<double>>();
            ++kinds;
        }
        if (s.contains("pc_dbw")) {
            cfg.sweep_kind = SweepKind::p_c_dbw;
            cfg.sweep_values = s["pc_dbw"].get<std::vector<double>>();
            ++kinds;
        }
        if (kinds > 1)
            throw std::runtime_error("config_from_json_file: multiple sweep kinds given");
    }
    if (j.contains("users")) cfg.num_users = j["users"].get<int>();
    if (j.contains("subchannels")) cfg.num_subchannels = j["subchannels"].get<int>();
    if (j.contains("k")) cfg.max_users_per_sc = j["k"].get<int>();
    if (j.contains("pmax_dbw")) cfg.p_max_dbw = j["pmax_dbw"].get<double>();
    if (j.contains("pc_dbw")) cfg.p_c_dbw = j["pc_dbw"].get<double>();
    if (j.contains("alpha")) cfg.ftpa_alpha = j["alpha"].get<double>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("log_terms")) cfg.log_terms = j["log_terms"].get<int>();
    if (j.contains("ideal")) cfg.ideal = j["ideal"].get<bool>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("dump_trials")) cfg.dump_trials = j["dump_trials"].get<bool>();
    if (j.contains("gp_trace")) cfg.gp_trace_path = j["gp_trace"].get<std::string>();
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& name : j["schemes"]) {
            auto id = scheme_from_name(name.get<std::string>());
            if (!id)
                throw std::runtime_error("config_from_json_file: unknown scheme '" +
                                         name.get<std::string>() + "'");
            cfg.schemes.push_back(*id);
        }
    }
    return cfg;
}

}  // namespace noma
