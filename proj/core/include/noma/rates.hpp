#ifndef NOMA_RATES_HPP
#define NOMA_RATES_HPP

#include <vector>

#include "noma/assignment.hpp"
#include "noma/power_allocation.hpp"
#include "noma/scenario.hpp"

namespace noma {

/// Decoding-order comparison: true when user i is treated as "stronger"
/// than user j on the subchannel. Gain ties break toward the lower index
/// so the order is a strict total order.
bool stronger_on_sc(const Scenario& scen, int sc, int i, int j);

/// The co-assigned users that interfere with `user` on `sc` (those with
/// strictly larger gain under the tie rule). Throws std::invalid_argument
/// if `user` is not assigned to `sc`.
std::vector<int> interference_set(int sc, int user, const Assignment& asg, const Scenario& scen);

/// SINR of an assigned user given the slot powers. Set use_gap to scale
/// by the scenario's capacity-gap factor.
double sinr(int sc, int user, const PowerAllocation& powers, const Assignment& asg,
            const Scenario& scen, bool use_gap = false);

/// Shannon sum-rate of the subchannel in bits/s/Hz; 0 when empty.
double subchannel_rate(int sc, const Assignment& asg, const PowerAllocation& powers,
                       const Scenario& scen, bool use_gap = false);

/// Rate over total consumed power including circuit power, bits/s/Hz/W.
double subchannel_ee(int sc, const Assignment& asg, const PowerAllocation& powers,
                     const Scenario& scen, bool use_gap = false);

double total_rate(const Assignment& asg, const PowerAllocation& powers, const Scenario& scen,
                  bool use_gap = false);
double total_ee(const Assignment& asg, const PowerAllocation& powers, const Scenario& scen,
                bool use_gap = false);

/// FTPA weights gamma_m = g_m^alpha / sum_i g_i^alpha for alpha <= 0.
std::vector<double> ftpa_weights(const std::vector<double>& member_gains, double alpha);

/// Splits p_n across members by FTPA; returns powers aligned with `members`.
std::vector<double> ftpa_split(const std::vector<double>& member_gains, double alpha, double p_n);

// Membership-list variants used by the matching stage to evaluate
// hypothetical member sets without building an Assignment.
double members_rate(int sc, const std::vector<int>& members, const std::vector<double>& powers,
                    const Scenario& scen, bool use_gap = false);
double member_sinr(int sc, int user, const std::vector<int>& members,
                   const std::vector<double>& powers, const Scenario& scen, bool use_gap = false);

}  // namespace noma

#endif
