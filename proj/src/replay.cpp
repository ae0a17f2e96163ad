#include "qaf/replay.hpp"

#include <stdexcept>
#include <unordered_set>

namespace qaf {

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[head_] = std::move(t);
        head_ = (head_ + 1) % capacity_;
    }
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, RngStream& rng) const {
    if (count > data_.size())
        throw std::invalid_argument("ReplayBuffer::sample_indices: batch larger than buffer");
    std::vector<std::size_t> picks;
    picks.reserve(count);
    // Floyd's algorithm keeps the draw O(count) regardless of buffer size.
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = data_.size() - count; j < data_.size(); ++j) {
        const std::size_t r = static_cast<std::size_t>(rng.uniform_int(j + 1));
        if (seen.insert(r).second) {
            picks.push_back(r);
        } else {
            seen.insert(j);
            picks.push_back(j);
        }
    }
    return picks;
}

}  // namespace qaf
