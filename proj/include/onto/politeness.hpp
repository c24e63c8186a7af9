#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace onto {

/// Hands out request slots so that two grants for the same host are never
/// closer than the configured interval. In Global scope every request shares
/// one clock regardless of host.
class PolitenessGate {
 public:
  using Clock = std::chrono::steady_clock;
  enum class Scope { PerHost, Global };

  explicit PolitenessGate(std::chrono::milliseconds interval, Scope scope = Scope::PerHost);

  /// Reserves the next slot for `host` and returns how long the caller must
  /// wait after `now` before issuing the request. Thread-safe.
  Clock::duration acquire_slot(std::string_view host, Clock::time_point now);

  /// acquire_slot() followed by sleeping until the slot; returns the granted
  /// issue time.
  Clock::time_point wait_for_slot(std::string_view host);

  std::chrono::milliseconds interval() const noexcept { return interval_; }
  Scope scope() const noexcept { return scope_; }

 private:
  std::chrono::milliseconds interval_;
  Scope scope_;
  std::mutex mu_;
  std::unordered_map<std::string, Clock::time_point> last_grant_;
};

}  // namespace onto
