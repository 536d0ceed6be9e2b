#ifndef NOMA_SCENARIO_HPP
#define NOMA_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace noma {

/// Static problem instance: channel gains, noise, power budgets and the
/// NOMA limits. Gains are linear power gains, powers are linear watts.
struct Scenario {
    int num_users = 0;        // M
    int num_subchannels = 0;  // N
    int max_users_per_sc = 1; // K

    std::vector<double> gains;  // row-major M x N, g[m][n] > 0
    std::vector<double> noise;  // per subchannel, sigma_n^2 > 0

    double p_max_w = 0.0;  // BS power budget
    double p_c_w = 0.0;    // circuit power per subchannel

    double sinr_gap = 1.0;     // Gamma in (0, 1]
    double ftpa_alpha = -0.4;  // FTPA decay exponent, <= 0

    std::vector<double> min_rates;  // per user, bits/s/Hz (default 0)

    double gain(int user, int sc) const { return gains[static_cast<std::size_t>(user) * num_subchannels + sc]; }
    double& gain(int user, int sc) { return gains[static_cast<std::size_t>(user) * num_subchannels + sc]; }

    /// Equal-split per-subchannel budget p^max/N used by the matching stage.
    double equal_split_power() const { return p_max_w / num_subchannels; }

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

/// Flat key-value + matrix-block text form, lossless round-trip.
std::string to_text(const Scenario& s);
Scenario scenario_from_text(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

double dbw_to_watts(double dbw);
double watts_to_dbw(double watts);

}  // namespace noma

#endif
