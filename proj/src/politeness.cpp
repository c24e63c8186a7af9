#include "onto/politeness.hpp"

#include <thread>

#include "onto/error.hpp"

namespace onto {

PolitenessGate::PolitenessGate(std::chrono::milliseconds interval, Scope scope)
    : interval_(interval), scope_(scope) {
  if (interval.count() < 0) throw Error(Errc::InvalidArgument, "politeness interval must be >= 0");
}

PolitenessGate::Clock::duration PolitenessGate::acquire_slot(std::string_view host,
                                                             Clock::time_point now) {
  std::string key = scope_ == Scope::Global ? std::string() : std::string(host);
  std::lock_guard lock(mu_);
  auto [it, first] = last_grant_.try_emplace(std::move(key), now);
  if (first) return Clock::duration::zero();
  Clock::time_point grant = std::max(now, it->second + interval_);
  it->second = grant;
  return grant - now;
}

PolitenessGate::Clock::time_point PolitenessGate::wait_for_slot(std::string_view host) {
  auto now = Clock::now();
  auto grant = now + acquire_slot(host, now);
  std::this_thread::sleep_until(grant);
  return grant;
}

}  // namespace onto
