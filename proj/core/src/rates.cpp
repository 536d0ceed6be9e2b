#include "noma/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noma {

namespace {
constexpr double kLn2 = 0.69314718055994530942;

double log2_1p(double x) { return std::log1p(x) / kLn2; }
}  // namespace

bool stronger_on_sc(const Scenario& scen, int sc, int i, int j) {
    const double gi = scen.gain(i, sc);
    const double gj = scen.gain(j, sc);
    if (gi != gj) return gi > gj;
    return i < j;
}

std::vector<int> interference_set(int sc, int user, const Assignment& asg, const Scenario& scen) {
    if (!asg.is_assigned(user, sc))
        throw std::invalid_argument("interference_set: user " + std::to_string(user) +
                                    " not assigned to sc " + std::to_string(sc));
    std::vector<int> out;
    for (int other : asg.members(sc))
        if (other != user && stronger_on_sc(scen, sc, other, user)) out.push_back(other);
    return out;
}

double member_sinr(int sc, int user, const std::vector<int>& members,
                   const std::vector<double>& powers, const Scenario& scen, bool use_gap) {
    double interference = 0.0;
    double own = 0.0;
    const double g = scen.gain(user, sc);
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (members[k] == user) {
            own = powers[k];
        } else if (stronger_on_sc(scen, sc, members[k], user)) {
            interference += powers[k];
        }
    }
    const double s = own * g / (scen.noise[sc] + interference * g);
    return use_gap ? s * scen.sinr_gap : s;
}

double members_rate(int sc, const std::vector<int>& members, const std::vector<double>& powers,
                    const Scenario& scen, bool use_gap) {
    double rate = 0.0;
    for (int m : members) rate += log2_1p(member_sinr(sc, m, members, powers, scen, use_gap));
    return rate;
}

double sinr(int sc, int user, const PowerAllocation& powers, const Assignment& asg,
            const Scenario& scen, bool use_gap) {
    if (!asg.is_assigned(user, sc))
        throw std::invalid_argument("sinr: user " + std::to_string(user) +
                                    " not assigned to sc " + std::to_string(sc));
    const double g = scen.gain(user, sc);
    double interference = 0.0;
    for (int other : asg.members(sc))
        if (other != user && stronger_on_sc(scen, sc, other, user))
            interference += powers.get(other, sc);
    const double s = powers.get(user, sc) * g / (scen.noise[sc] + interference * g);
    return use_gap ? s * scen.sinr_gap : s;
}

double subchannel_rate(int sc, const Assignment& asg, const PowerAllocation& powers,
                       const Scenario& scen, bool use_gap) {
    double rate = 0.0;
    for (int m : asg.members(sc)) rate += log2_1p(sinr(sc, m, powers, asg, scen, use_gap));
    return rate;
}

double subchannel_ee(int sc, const Assignment& asg, const PowerAllocation& powers,
                     const Scenario& scen, bool use_gap) {
    const double rate = subchannel_rate(sc, asg, powers, scen, use_gap);
    if (rate == 0.0) return 0.0;
    return rate / (scen.p_c_w + powers.sc_total(sc));
}

double total_rate(const Assignment& asg, const PowerAllocation& powers, const Scenario& scen,
                  bool use_gap) {
    double t = 0.0;
    for (int n = 0; n < scen.num_subchannels; ++n)
        t += subchannel_rate(n, asg, powers, scen, use_gap);
    return t;
}

double total_ee(const Assignment& asg, const PowerAllocation& powers, const Scenario& scen,
                bool use_gap) {
    double t = 0.0;
    for (int n = 0; n < scen.num_subchannels; ++n)
        t += subchannel_ee(n, asg, powers, scen, use_gap);
    return t;
}

std::vector<double> ftpa_weights(const std::vector<double>& member_gains, double alpha) {
    if (member_gains.empty()) throw std::invalid_argument("ftpa_weights: empty member set");
    if (alpha > 0.0) throw std::invalid_argument("ftpa_weights: alpha must be <= 0");
    std::vector<double> w(member_gains.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < member_gains.size(); ++i) {
        w[i] = std::pow(member_gains[i], alpha);
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

std::vector<double> ftpa_split(const std::vector<double>& member_gains, double alpha, double p_n) {
    if (p_n < 0.0) throw std::invalid_argument("ftpa_split: p_n must be >= 0");
    auto w = ftpa_weights(member_gains, alpha);
    for (auto& x : w) x *= p_n;
    return w;
}

}  // namespace noma
