#pragma once

#include <cstddef>
#include <vector>

#include "airhockey/learn/transition.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::learn {

// Fixed-capacity ring of transitions with uniform sampling. Storage grows
// lazily up to the capacity.
class ReplayBuffer {
 public:
  static constexpr std::size_t kDefaultCapacity = 1'000'000;

  ReplayBuffer(int obs_dim, int action_dim,
               std::size_t capacity = kDefaultCapacity);

  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // n indices drawn uniformly with replacement.
  Batch sample(std::size_t n, Rng& rng) const;

 private:
  int obs_dim_;
  int action_dim_;
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<double> obs_, next_obs_, actions_, rewards_, dones_;
};

}  // namespace airhockey::learn
