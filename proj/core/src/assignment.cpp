#include "noma/assignment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace noma {

namespace {
std::string pair_str(int user, int sc) {
    return "(user " + std::to_string(user) + ", sc " + std::to_string(sc) + ")";
}
}  // namespace

Assignment::Assignment(int num_users, int num_subchannels, int max_users_per_sc)
    : num_users_(num_users),
      num_subchannels_(num_subchannels),
      max_users_per_sc_(max_users_per_sc),
      users_per_sc_(num_subchannels),
      scs_per_user_(num_users),
      rejected_(static_cast<std::size_t>(num_users) * num_subchannels, 0) {
    if (num_users < 0 || num_subchannels < 0 || max_users_per_sc < 1)
        throw std::invalid_argument("Assignment: invalid dimensions");
}

bool Assignment::is_assigned(int user, int sc) const {
    const auto& v = users_per_sc_[sc];
    return std::binary_search(v.begin(), v.end(), user);
}

void Assignment::add(int user, int sc) {
    auto& mem = users_per_sc_[sc];
    if (static_cast<int>(mem.size()) >= max_users_per_sc_)
        throw std::logic_error("Assignment::add: subchannel full at " + pair_str(user, sc));
    if (is_assigned(user, sc))
        throw std::logic_error("Assignment::add: duplicate " + pair_str(user, sc));
    mem.insert(std::upper_bound(mem.begin(), mem.end(), user), user);
    auto& scs = scs_per_user_[user];
    scs.insert(std::upper_bound(scs.begin(), scs.end(), sc), sc);
}

void Assignment::remove(int user, int sc) {
    auto& mem = users_per_sc_[sc];
    auto it = std::lower_bound(mem.begin(), mem.end(), user);
    if (it == mem.end() || *it != user)
        throw std::logic_error("Assignment::remove: missing " + pair_str(user, sc));
    mem.erase(it);
    auto& scs = scs_per_user_[user];
    scs.erase(std::lower_bound(scs.begin(), scs.end(), sc));
}

void Assignment::reject(int user, int sc) {
    if (is_assigned(user, sc))
        throw std::logic_error("Assignment::reject: pair still assigned " + pair_str(user, sc));
    if (!rejected_[slot(user, sc)]) {
        rejected_[slot(user, sc)] = 1;
        ++rejection_count_;
    }
}

int Assignment::total_slots() const {
    int total = 0;
    for (const auto& v : users_per_sc_) total += static_cast<int>(v.size());
    return total;
}

void Assignment::check_consistency() const {
    for (int n = 0; n < num_subchannels_; ++n) {
        const auto& mem = users_per_sc_[n];
        if (static_cast<int>(mem.size()) > max_users_per_sc_)
            throw std::logic_error("Assignment: capacity exceeded on sc " + std::to_string(n));
        if (!std::is_sorted(mem.begin(), mem.end()))
            throw std::logic_error("Assignment: unsorted member list");
        for (int m : mem) {
            const auto& scs = scs_per_user_[m];
            if (!std::binary_search(scs.begin(), scs.end(), n))
                throw std::logic_error("Assignment: asymmetric pair " + pair_str(m, n));
            if (rejected_[slot(m, n)])
                throw std::logic_error("Assignment: rejected pair assigned " + pair_str(m, n));
        }
    }
    for (int m = 0; m < num_users_; ++m)
        for (int n : scs_per_user_[m])
            if (!is_assigned(m, n))
                throw std::logic_error("Assignment: asymmetric pair " + pair_str(m, n));
}

}  // namespace noma
