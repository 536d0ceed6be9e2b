#ifndef NOMA_CHANNEL_HPP
#define NOMA_CHANNEL_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noma/scenario.hpp"

namespace noma {

/// Cell geometry and fading parameters for random scenario generation.
/// Distances in metres; shadow_variance is the dB-domain log-normal
/// variance; rayleigh_variance is the mean of |h|^2.
struct CellConfig {
    double radius_m = 500.0;
    double min_user_bs_dist_m = 50.0;
    double min_user_user_dist_m = 40.0;
    double ref_dist_m = 1000.0;
    double ref_snr_db = 28.0;
    double shadow_variance = 3.76;
    double rayleigh_variance = 4.3;
    double pathloss_exponent = 3.76;
    double bandwidth_per_sc_hz = 200e3;
    double ber = 1e-6;
    std::uint64_t seed = 1;

    void validate() const;
};

struct PlacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Position = std::pair<double, double>;

/// Uniform user drop on the annulus [min_user_bs_dist, radius] with the
/// pairwise spacing constraint. Rejection-sampled per user from an
/// index-keyed RNG substream, so prefixes are stable as m grows.
/// Throws PlacementError when the attempt cap is exhausted.
std::vector<Position> place_users(const CellConfig& cfg, int m, std::uint64_t seed);

/// Mean SNR-calibrated pathloss: a user at ref_dist_m sees mean SNR equal
/// to ref_snr_db once the shadowing and Rayleigh means are factored in.
double pathloss(const CellConfig& cfg, double dist_m, double noise_power = 1.0);

/// Linear mean of the dB-domain log-normal shadowing term.
double shadow_mean_linear(const CellConfig& cfg);

/// g[m][n] = pathloss(d_m) * S_m * |h_{m,n}|^2 with user-level shadowing
/// and slot-level Rayleigh. Row-major M x n matrix.
std::vector<double> draw_gains(const CellConfig& cfg,
                               const std::vector<Position>& positions,
                               int n, std::uint64_t seed);

/// Capacity-gap factor Gamma = -1.5 / ln(5 ber). Throws std::domain_error
/// when 5*ber >= 1.
double sinr_gap(double ber);

struct ScenarioParams {
    int num_users = 1;
    int num_subchannels = 1;
    int max_users_per_sc = 1;
    double p_max_dbw = 23.0;
    double p_c_dbw = 1.75;
    double ftpa_alpha = -0.4;
    std::uint64_t seed = 1;
};

/// Draws a full random Scenario: placement, gains, unit noise, dBW->W
/// conversion and the BER-derived SINR gap.
Scenario build_scenario(const CellConfig& cfg, const ScenarioParams& params);

}  // namespace noma

#endif
