// Monte-Carlo driver for the NOMA downlink energy-efficiency schemes:
// generates random cells, runs the selected matching + power-loading
// combinations and writes figure-ready CSV/JSON data.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "noma/harness.hpp"

namespace {

std::vector<double> parse_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("invalid ") + what + " value '" + item + "'");
        }
    }
    if (out.empty()) throw std::runtime_error(std::string("empty ") + what + " list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noma-ee-sim: energy-efficient NOMA downlink resource allocation simulator"};

    std::string config_path, scheme_csv, users_csv, pmax_csv, pc_csv, out_dir, gp_trace;
    int subchannels = -1, k = -1, trials = -1, log_terms = -1, workers = -1;
    std::uint64_t seed = 0;
    bool have_seed = false, ideal = false, dump_trials = false;
    double delta = -1.0, alpha = 0.0;
    bool have_alpha = false;

    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--scheme", scheme_csv,
                   "comma list of scheme1..scheme5,baseline");
    app.add_option("--users", users_csv, "user counts; a list sweeps M");
    app.add_option("--subchannels", subchannels, "number of subchannels N");
    app.add_option("--k", k, "max users per subchannel K");
    app.add_option("--pmax-dbw", pmax_csv, "BS power budget in dBW; a list sweeps it");
    app.add_option("--pc-dbw", pc_csv, "circuit power per subchannel in dBW; a list sweeps it");
    app.add_option("--trials", trials, "Monte-Carlo trials per data point");
    auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--delta", delta, "greedy allocator power step (W); default p_max/100");
    app.add_option("--log-terms", log_terms, "series terms in the GP objectives (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    app.add_flag("--ideal", ideal, "report gap-free rates (no BER SINR gap)");
    app.add_option("--out", out_dir, "output directory for CSV/JSON data");
    app.add_flag("--dump-trials", dump_trials, "write per-trial assignment/power JSON");
    app.add_option("--gp-trace", gp_trace, "CSV of condensation iterates (serializes the run)");
    app.add_option("--workers", workers, "worker threads (default: hardware)");
    auto* alpha_opt = app.add_option("--alpha", alpha, "FTPA decay exponent (<= 0)");

    try {
        app.parse(argc, argv);
        have_seed = seed_opt->count() > 0;
        have_alpha = alpha_opt->count() > 0;

        noma::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = noma::config_from_json_file(config_path);

        if (!scheme_csv.empty()) {
            cfg.schemes.clear();
            std::stringstream ss(scheme_csv);
            std::string name;
            while (std::getline(ss, name, ',')) {
                auto id = noma::scheme_from_name(name);
                if (!id) throw std::runtime_error("unknown scheme '" + name + "'");
                cfg.schemes.push_back(*id);
            }
        }

        int sweep_flags = 0;
        if (!users_csv.empty()) {
            const auto vals = parse_list(users_csv, "--users");
            if (vals.size() > 1) {
                cfg.sweep_kind = noma::SweepKind::users;
                cfg.sweep_values = vals;
                ++sweep_flags;
            } else {
                cfg.num_users = static_cast<int>(vals[0]);
                if (cfg.sweep_kind == noma::SweepKind::users) cfg.sweep_values = {vals[0]};
            }
        }
        if (!pmax_csv.empty()) {
            const auto vals = parse_list(pmax_csv, "--pmax-dbw");
            if (vals.size() > 1) {
                cfg.sweep_kind = noma::SweepKind::p_max_dbw;
                cfg.sweep_values = vals;
                ++sweep_flags;
            } else {
                cfg.p_max_dbw = vals[0];
            }
        }
        if (!pc_csv.empty()) {
            const auto vals = parse_list(pc_csv, "--pc-dbw");
            if (vals.size() > 1) {
                cfg.sweep_kind = noma::SweepKind::p_c_dbw;
                cfg.sweep_values = vals;
                ++sweep_flags;
            } else {
                cfg.p_c_dbw = vals[0];
            }
        }
        if (sweep_flags > 1) throw std::runtime_error("only one flag may carry a sweep list");
        if (cfg.sweep_kind == noma::SweepKind::users && cfg.sweep_values.size() == 1 &&
            !users_csv.empty())
            cfg.sweep_values = {static_cast<double>(cfg.num_users)};

        if (subchannels > 0) cfg.num_subchannels = subchannels;
        if (k > 0) cfg.max_users_per_sc = k;
        if (trials > 0) cfg.trials = trials;
        if (have_seed) cfg.seed = seed;
        if (delta >= 0.0) cfg.delta = delta;
        if (log_terms > 0) cfg.log_terms = log_terms;
        if (ideal) cfg.ideal = true;
        if (dump_trials) cfg.dump_trials = true;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!gp_trace.empty()) cfg.gp_trace_path = gp_trace;
        if (workers > 0) cfg.workers = workers;
        if (have_alpha) cfg.ftpa_alpha = alpha;
        if (cfg.out_dir.empty()) cfg.out_dir = "results";

        const auto results = noma::run_experiment(cfg);
        noma::emit_figures_data(results, cfg.out_dir);

        int failures = 0;
        for (const auto& t : results.trials)
            if (t.failed) ++failures;
        std::cout << "wrote " << cfg.out_dir << " (" << results.trials.size() << " trials, "
                  << failures << " failed)\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << '\n';
        return 1;
    }
}
