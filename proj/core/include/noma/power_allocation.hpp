#ifndef NOMA_POWER_ALLOCATION_HPP
#define NOMA_POWER_ALLOCATION_HPP

#include <stdexcept>
#include <utility>
#include <vector>

namespace noma {

/// Sparse per-slot power levels p_m^n over assigned (user, subchannel)
/// pairs, with cached per-subchannel totals.
class PowerAllocation {
public:
    PowerAllocation() = default;
    explicit PowerAllocation(int num_subchannels)
        : slots_(num_subchannels), totals_(num_subchannels, 0.0) {}

    int num_subchannels() const { return static_cast<int>(slots_.size()); }

    void set(int user, int sc, double power) {
        if (power < 0.0) throw std::invalid_argument("PowerAllocation::set: negative power");
        auto& v = slots_[sc];
        for (auto& [u, p] : v) {
            if (u == user) {
                totals_[sc] += power - p;
                p = power;
                return;
            }
        }
        v.emplace_back(user, power);
        totals_[sc] += power;
    }

    /// Power of the slot, 0 when unset.
    double get(int user, int sc) const {
        for (const auto& [u, p] : slots_[sc])
            if (u == user) return p;
        return 0.0;
    }

    bool has(int user, int sc) const {
        for (const auto& [u, p] : slots_[sc])
            if (u == user) return true;
        return false;
    }

    const std::vector<std::pair<int, double>>& slots(int sc) const { return slots_[sc]; }

    double sc_total(int sc) const { return totals_[sc]; }

    double total() const {
        double t = 0.0;
        for (double x : totals_) t += x;
        return t;
    }

private:
    std::vector<std::vector<std::pair<int, double>>> slots_;
    std::vector<double> totals_;
};

}  // namespace noma

#endif
