#ifndef NOMA_ASSIGNMENT_HPP
#define NOMA_ASSIGNMENT_HPP

#include <vector>

namespace noma {

/// Symmetric subchannel-user matching state: member sets per subchannel,
/// subchannel sets per user, and the permanent rejection memory. Member
/// lists are kept sorted so iteration order is deterministic.
class Assignment {
public:
    Assignment() = default;
    Assignment(int num_users, int num_subchannels, int max_users_per_sc);

    int num_users() const { return num_users_; }
    int num_subchannels() const { return num_subchannels_; }
    int capacity() const { return max_users_per_sc_; }

    const std::vector<int>& members(int sc) const { return users_per_sc_[sc]; }
    const std::vector<int>& subchannels(int user) const { return scs_per_user_[user]; }

    bool is_assigned(int user, int sc) const;
    bool is_rejected(int user, int sc) const { return rejected_[slot(user, sc)]; }

    /// Adds the pair on both sides; throws if the subchannel is full or the
    /// pair already exists.
    void add(int user, int sc);
    /// Removes the pair on both sides; throws if absent.
    void remove(int user, int sc);
    /// Marks the pair permanently rejected (must not be currently assigned).
    void reject(int user, int sc);

    int total_slots() const;
    std::size_t rejection_count() const { return rejection_count_; }

    /// Definition-level consistency: mutual membership, capacity, and
    /// rejected pairs not assigned. Throws std::logic_error on violation.
    void check_consistency() const;

private:
    std::size_t slot(int user, int sc) const {
        return static_cast<std::size_t>(user) * num_subchannels_ + sc;
    }

    int num_users_ = 0;
    int num_subchannels_ = 0;
    int max_users_per_sc_ = 0;
    std::vector<std::vector<int>> users_per_sc_;
    std::vector<std::vector<int>> scs_per_user_;
    std::vector<char> rejected_;
    std::size_t rejection_count_ = 0;
};

}  // namespace noma

#endif
