#include "airhockey/learn/replay_buffer.hpp"

#include <algorithm>

#include "airhockey/error.hpp"

namespace airhockey::learn {

ReplayBuffer::ReplayBuffer(int obs_dim, int action_dim, std::size_t capacity)
    : obs_dim_(obs_dim), action_dim_(action_dim), capacity_(capacity) {
  if (obs_dim < 1 || action_dim < 1 || capacity < 1) {
    throw Error("replay buffer needs positive dims and capacity");
  }
}

void ReplayBuffer::add(const Transition& t) {
  const auto od = static_cast<std::size_t>(obs_dim_);
  const auto ad = static_cast<std::size_t>(action_dim_);
  if (t.obs.size() != od || t.next_obs.size() != od || t.action.size() != ad) {
    throw Error("transition dims do not match the replay buffer");
  }
  if (next_ == rewards_.size()) {
    obs_.resize(obs_.size() + od);
    next_obs_.resize(next_obs_.size() + od);
    actions_.resize(actions_.size() + ad);
    rewards_.push_back(0.0);
    dones_.push_back(0.0);
  }
  std::copy(t.obs.begin(), t.obs.end(), obs_.begin() + static_cast<std::ptrdiff_t>(next_ * od));
  std::copy(t.next_obs.begin(), t.next_obs.end(),
            next_obs_.begin() + static_cast<std::ptrdiff_t>(next_ * od));
  std::copy(t.action.begin(), t.action.end(),
            actions_.begin() + static_cast<std::ptrdiff_t>(next_ * ad));
  rewards_[next_] = t.reward;
  dones_[next_] = t.done ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (size_ == 0) throw Error("sampling from an empty replay buffer");
  const auto cols = static_cast<Eigen::Index>(n);
  Batch b;
  b.obs.resize(obs_dim_, cols);
  b.next_obs.resize(obs_dim_, cols);
  b.actions.resize(action_dim_, cols);
  b.rewards.resize(cols);
  b.dones.resize(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::size_t i = rng.below(size_);
    b.obs.col(j) = Eigen::Map<const Vector>(obs_.data() + i * obs_dim_, obs_dim_);
    b.next_obs.col(j) = Eigen::Map<const Vector>(next_obs_.data() + i * obs_dim_, obs_dim_);
    b.actions.col(j) = Eigen::Map<const Vector>(actions_.data() + i * action_dim_, action_dim_);
    b.rewards[j] = rewards_[i];
    b.dones[j] = dones_[i];
  }
  return b;
}

}  // namespace airhockey::learn
