#pragma once

#include <cstddef>
#include <vector>

#include "qaf/rng.hpp"

namespace qaf {

struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

/// Fixed-capacity ring buffer with FIFO eviction and uniform batch
/// sampling without replacement within a batch.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 1'000'000) : capacity_(capacity) {}

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& operator[](std::size_t i) const { return data_[i]; }

    /// `count` distinct indices drawn uniformly; requires count <= size.
    std::vector<std::size_t> sample_indices(std::size_t count, RngStream& rng) const;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::vector<Transition> data_;
};

}  // namespace qaf
