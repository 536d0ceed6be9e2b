#include "noma/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "noma/rng.hpp"

namespace noma {

namespace {
constexpr int kPlacementAttemptCap = 100000;
constexpr std::uint64_t kPlacementStream = 0x706c6163;  // "plac"
constexpr std::uint64_t kShadowStream = 0x73686164;     // "shad"
constexpr std::uint64_t kRayleighStream = 0x72617966;   // "rayf"
}  // namespace

void CellConfig::validate() const {
    if (!(radius_m > min_user_bs_dist_m) || !(min_user_bs_dist_m > 0.0))
        throw std::invalid_argument("CellConfig: need radius_m > min_user_bs_dist_m > 0");
    if (min_user_user_dist_m < 0.0)
        throw std::invalid_argument("CellConfig: min_user_user_dist_m must be >= 0");
    if (!(ber > 0.0) || !(ber < 0.2))
        throw std::invalid_argument("CellConfig: ber must be in (0, 0.2)");
    if (!(shadow_variance > 0.0) || !(rayleigh_variance > 0.0))
        throw std::invalid_argument("CellConfig: variances must be > 0");
    if (!(ref_dist_m > 0.0) || !(bandwidth_per_sc_hz > 0.0))
        throw std::invalid_argument("CellConfig: ref_dist_m and bandwidth must be > 0");
}

std::vector<Position> place_users(const CellConfig& cfg, int m, std::uint64_t seed) {
    cfg.validate();
    if (m < 0) throw std::invalid_argument("place_users: m must be >= 0");

    std::vector<Position> out;
    out.reserve(m);
    const double r0 = cfg.min_user_bs_dist_m;
    const double r1 = cfg.radius_m;
    const double dmin2 = cfg.min_user_user_dist_m * cfg.min_user_user_dist_m;

    for (int u = 0; u < m; ++u) {
        Rng rng(derive_seed(seed, kPlacementStream, static_cast<std::uint64_t>(u)));
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttemptCap; ++attempt) {
            // Area-uniform radius on the annulus.
            const double r = std::sqrt(rng.uniform(r0 * r0, r1 * r1));
            const double theta = rng.uniform(0.0, 2.0 * M_PI);
            const Position cand{r * std::cos(theta), r * std::sin(theta)};
            bool ok = true;
            for (const auto& p : out) {
                const double dx = p.first - cand.first;
                const double dy = p.second - cand.second;
                if (dx * dx + dy * dy < dmin2) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                out.push_back(cand);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw PlacementError("place_users: attempt cap exhausted for user " + std::to_string(u));
    }
    return out;
}

double shadow_mean_linear(const CellConfig& cfg) {
    // E[10^(X/10)] for X ~ N(0, v): exp((ln10/10)^2 v / 2).
    const double beta = std::log(10.0) / 10.0;
    return std::exp(beta * beta * cfg.shadow_variance * 0.5);
}

double pathloss(const CellConfig& cfg, double dist_m, double noise_power) {
    // Calibrated so that E[g]/noise at ref_dist equals ref_snr_db; the
    // shadowing and Rayleigh means are divided out here instead of
    // normalizing the draws themselves.
    const double ref_lin = std::pow(10.0, cfg.ref_snr_db / 10.0);
    const double dist_factor = std::pow(dist_m / cfg.ref_dist_m, -cfg.pathloss_exponent);
    return ref_lin * dist_factor * noise_power / (shadow_mean_linear(cfg) * cfg.rayleigh_variance);
}

std::vector<double> draw_gains(const CellConfig& cfg,
                               const std::vector<Position>& positions,
                               int n, std::uint64_t seed) {
    cfg.validate();
    if (positions.empty()) throw std::invalid_argument("draw_gains: positions must be non-empty");
    if (n < 1) throw std::invalid_argument("draw_gains: n must be >= 1");

    const int m = static_cast<int>(positions.size());
    std::vector<double> g(static_cast<std::size_t>(m) * n);
    const double shadow_sigma_db = std::sqrt(cfg.shadow_variance);

    for (int u = 0; u < m; ++u) {
        const double d = std::hypot(positions[u].first, positions[u].second);
        const double pl = pathloss(cfg, d);
        Rng shadow_rng(derive_seed(seed, kShadowStream, static_cast<std::uint64_t>(u)));
        const double shadow = std::pow(10.0, shadow_rng.normal(0.0, shadow_sigma_db) / 10.0);
        Rng fade_rng(derive_seed(seed, kRayleighStream, static_cast<std::uint64_t>(u)));
        for (int sc = 0; sc < n; ++sc) {
            const double h2 = fade_rng.exponential(cfg.rayleigh_variance);
            g[static_cast<std::size_t>(u) * n + sc] = pl * shadow * h2;
        }
    }
    return g;
}

double sinr_gap(double ber) {
    if (!(ber > 0.0)) throw std::domain_error("sinr_gap: ber must be > 0");
    if (5.0 * ber >= 1.0) throw std::domain_error("sinr_gap: need 5*ber < 1");
    return -1.5 / std::log(5.0 * ber);
}

Scenario build_scenario(const CellConfig& cfg, const ScenarioParams& params) {
    if (params.num_users < 1 || params.num_subchannels < 1)
        throw std::invalid_argument("build_scenario: need at least one user and subchannel");

    Scenario s;
    s.num_users = params.num_users;
    s.num_subchannels = params.num_subchannels;
    s.max_users_per_sc = params.max_users_per_sc;
    s.p_max_w = dbw_to_watts(params.p_max_dbw);
    s.p_c_w = dbw_to_watts(params.p_c_dbw);
    s.sinr_gap = sinr_gap(cfg.ber);
    s.ftpa_alpha = params.ftpa_alpha;
    s.noise.assign(params.num_subchannels, 1.0);
    s.min_rates.assign(params.num_users, 0.0);

    const auto positions = place_users(cfg, params.num_users, params.seed);
    s.gains = draw_gains(cfg, positions, params.num_subchannels, params.seed);
    s.validate();
    return s;
}

}  // namespace noma
