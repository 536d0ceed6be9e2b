#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "noma/channel.hpp"
#include "noma/rng.hpp"
#include "noma/scenario.hpp"

using namespace noma;

namespace {
double dist(const Position& a, const Position& b) {
    return std::hypot(a.first - b.first, a.second - b.second);
}
}  // namespace

TEST_CASE("place_users basic geometry") {
    CellConfig cfg;

    CHECK(place_users(cfg, 0, 1).empty());

    const auto one = place_users(cfg, 1, 42);
    REQUIRE(one.size() == 1);
    const double r = std::hypot(one[0].first, one[0].second);
    CHECK(r >= cfg.min_user_bs_dist_m);
    CHECK(r <= cfg.radius_m);

    const auto two = place_users(cfg, 2, 7);
    REQUIRE(two.size() == 2);
    CHECK(dist(two[0], two[1]) >= cfg.min_user_user_dist_m);
    const auto again = place_users(cfg, 2, 7);
    CHECK(two[0] == again[0]);
    CHECK(two[1] == again[1]);
}

TEST_CASE("place_users respects constraints for every user") {
    CellConfig cfg;
    const auto pos = place_users(cfg, 30, 123);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double r = std::hypot(pos[i].first, pos[i].second);
        CHECK(r >= cfg.min_user_bs_dist_m);
        CHECK(r <= cfg.radius_m + 1e-9);
        for (std::size_t j = 0; j < i; ++j)
            CHECK(dist(pos[i], pos[j]) >= cfg.min_user_user_dist_m);
    }
}

TEST_CASE("place_users prefixes are stable as m grows") {
    CellConfig cfg;
    const auto small = place_users(cfg, 5, 99);
    const auto big = place_users(cfg, 12, 99);
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == big[i]);
}

TEST_CASE("place_users reports infeasible packings") {
    CellConfig cfg;
    cfg.radius_m = 60.0;  // thin annulus, 40 users can't sit 40 m apart
    CHECK_THROWS_AS(place_users(cfg, 40, 1), PlacementError);
}

TEST_CASE("reference distance calibration is 28 dB") {
    CellConfig cfg;
    // Pathloss times the shadowing and Rayleigh means recovers the
    // configured reference SNR exactly.
    const double g_mean = pathloss(cfg, cfg.ref_dist_m) * shadow_mean_linear(cfg) *
                          cfg.rayleigh_variance;
    const double snr_db = 10.0 * std::log10(g_mean);
    CHECK(snr_db == doctest::Approx(cfg.ref_snr_db).epsilon(1e-9));
    CHECK(std::abs(snr_db - 28.0) < 1.0);
}

TEST_CASE("rayleigh component has the configured mean") {
    CellConfig cfg;
    cfg.shadow_variance = 1e-12;  // isolate the Rayleigh factor
    const std::vector<Position> pos{{cfg.ref_dist_m, 0.0}};
    const int n = 100000;
    const auto g = draw_gains(cfg, pos, n, 5);
    const double pl = pathloss(cfg, cfg.ref_dist_m);
    double mean = 0.0;
    for (double x : g) {
        CHECK(x > 0.0);
        mean += x / pl;
    }
    mean /= n;
    CHECK(mean == doctest::Approx(cfg.rayleigh_variance).epsilon(0.02));
}

TEST_CASE("shadowing is user-level, fading slot-level") {
    CellConfig cfg;
    // Same position for every user: within a row only Rayleigh varies,
    // across rows the shadowing adds on top.
    const int users = 500, n = 50;
    const std::vector<Position> pos(users, {cfg.ref_dist_m, 0.0});
    const auto g = draw_gains(cfg, pos, n, 11);

    {
        // var(ln Exp) = pi^2/6 regardless of the mean.
        const auto row = draw_gains(cfg, {pos[0]}, 20000, 13);
        double mean = 0.0;
        for (double x : row) mean += std::log(x);
        mean /= row.size();
        double var = 0.0;
        for (double x : row) var += (std::log(x) - mean) * (std::log(x) - mean);
        var /= (row.size() - 1);
        CHECK(var == doctest::Approx(M_PI * M_PI / 6.0).epsilon(0.05));
    }

    std::vector<double> row_means(users, 0.0);
    for (int u = 0; u < users; ++u) {
        for (int k = 0; k < n; ++k)
            row_means[u] += std::log(g[static_cast<std::size_t>(u) * n + k]);
        row_means[u] /= n;
    }
    double mm = 0.0;
    for (double x : row_means) mm += x;
    mm /= users;
    double var = 0.0;
    for (double x : row_means) var += (x - mm) * (x - mm);
    var /= (users - 1);
    const double beta = std::log(10.0) / 10.0;
    const double expected = beta * beta * cfg.shadow_variance + (M_PI * M_PI / 6.0) / n;
    CHECK(var == doctest::Approx(expected).epsilon(0.25));
}

TEST_CASE("sinr gap values") {
    CHECK(sinr_gap(1e-6) == doctest::Approx(-1.5 / std::log(5e-6)).epsilon(1e-12));
    CHECK(sinr_gap(1e-6) == doctest::Approx(0.1229).epsilon(1e-3));
    CHECK(sinr_gap(std::exp(-1.5) / 5.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sinr_gap(1e-3) == doctest::Approx(0.2831).epsilon(1e-3));
    CHECK_THROWS_AS(sinr_gap(0.25), std::domain_error);
    CHECK_THROWS_AS(sinr_gap(-1.0), std::domain_error);
}

TEST_CASE("dbw conversion") {
    CHECK(dbw_to_watts(23.0) == doctest::Approx(199.526).epsilon(1e-4));
    CHECK(dbw_to_watts(1.75) == doctest::Approx(1.4962).epsilon(1e-4));
    CHECK(watts_to_dbw(dbw_to_watts(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("scenario build determinism and validity") {
    CellConfig cfg;
    ScenarioParams params;
    params.num_users = 6;
    params.num_subchannels = 4;
    params.max_users_per_sc = 2;
    params.seed = 77;
    const Scenario a = build_scenario(cfg, params);
    const Scenario b = build_scenario(cfg, params);
    CHECK(a.gains == b.gains);  // bit identical
    CHECK(a.p_max_w == doctest::Approx(dbw_to_watts(23.0)));
    for (double g : a.gains) CHECK(g > 0.0);
    for (double s : a.noise) CHECK(s > 0.0);
    a.validate();
}

TEST_CASE("scenario text round trip is lossless") {
    CellConfig cfg;
    ScenarioParams params;
    params.num_users = 3;
    params.num_subchannels = 2;
    params.max_users_per_sc = 2;
    params.seed = 5;
    const Scenario s = build_scenario(cfg, params);
    const Scenario back = scenario_from_text(to_text(s));
    CHECK(back.num_users == s.num_users);
    CHECK(back.gains == s.gains);
    CHECK(back.noise == s.noise);
    CHECK(back.p_max_w == s.p_max_w);
    CHECK(back.p_c_w == s.p_c_w);
    CHECK(back.sinr_gap == s.sinr_gap);
    CHECK(back.ftpa_alpha == s.ftpa_alpha);
    CHECK(to_text(back) == to_text(s));
}

TEST_CASE("scenario validation rejects bad data") {
    CellConfig cfg;
    ScenarioParams params;
    params.num_users = 2;
    params.num_subchannels = 2;
    Scenario s = build_scenario(cfg, params);
    Scenario bad = s;
    bad.gain(0, 0) = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.noise[1] = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.ftpa_alpha = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.sinr_gap = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_text("num_users 1\nbogus 3\n"), std::invalid_argument);
}

TEST_CASE("cell config invariants") {
    CellConfig cfg;
    cfg.ber = 0.3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = CellConfig{};
    cfg.min_user_bs_dist_m = 600.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = CellConfig{};
    cfg.shadow_variance = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
