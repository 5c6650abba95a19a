#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "logdos/bloom.hpp"
#include "logdos/ids.hpp"
#include "logdos/messages.hpp"
#include "logdos/rng.hpp"

namespace logdos {

enum class StrategyKind : std::uint8_t { NoDefense, Comprehensive, Odd, Even, Dynamic, DPid };

std::string_view to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

/// Whether this kind keeps GET logs at all.
constexpr bool uses_filters(StrategyKind kind) {
  return kind == StrategyKind::Comprehensive || kind == StrategyKind::Odd ||
         kind == StrategyKind::Even || kind == StrategyKind::Dynamic;
}

/// Timing of on/off logging, all in ticks.
struct DynamicParams {
  Tick initial_duration = 10'000;  ///< T0
  Tick silent_period = 10'000;     ///< S
  Tick validation_shift = 200;     ///< delta
  std::uint64_t threshold = 100;   ///< invalid DATA count that extends the window

  void validate() const;
};

/// Parity rule applied to the PID count a GET carries when it arrives.
/// Odd logs odd counts, Even logs even counts including zero.
bool should_log(StrategyKind kind, std::size_t arrival_prefix_len);

enum class Verdict : std::uint8_t { Allow, Reject };

/// Filter-refill source used to re-imitate background load after a
/// dynamic window reset.
struct Refill {
  std::uint64_t count = 0;
  Rng rng;
};

/// Defense state of a single AS.
class RouterState {
 public:
  /// `filters` must be present iff uses_filters(kind). `digest_seed` is the
  /// run seed fed to digest_of. `phase_offset` is the first logging start
  /// for Dynamic routers.
  RouterState(StrategyKind kind, std::optional<RotatingFilterPair> filters,
              std::uint64_t digest_seed, DynamicParams dynamic = {}, Tick phase_offset = 0);

  /// GET crossing into this AS with `arrival_prefix`. Never drops.
  void on_get(const ServiceId& sid, std::span<const PathId> arrival_prefix, Tick now);
  void on_get(const GetMessage& msg, Tick now) { on_get(msg.sid, msg.pids, now); }

  /// DATA whose own PathId has already been stripped. `packet_epoch` and
  /// `current_epoch` only matter for DPid.
  Verdict on_data(const ServiceId& sid, std::span<const PathId> stripped_prefix, Tick now,
                  std::uint64_t packet_epoch = 0, std::uint64_t current_epoch = 0);
  Verdict on_data(const DataMessage& msg, Tick now, std::uint64_t current_epoch = 0) {
    return on_data(msg.sid, msg.pids, now, msg.pid_epoch, current_epoch);
  }

  /// Rolls Dynamic windows forward so that `now` falls before the end of the
  /// current validation window. No-op for other kinds.
  void dynamic_advance(Tick now);

  /// Inserts `count` random digests (background-traffic imitation).
  void prefill(std::uint64_t count, Rng& rng);
  void set_refill(Refill refill) { refill_ = std::move(refill); }

  [[nodiscard]] StrategyKind kind() const { return kind_; }
  [[nodiscard]] const std::optional<RotatingFilterPair>& filters() const { return filters_; }
  [[nodiscard]] std::uint64_t storage_bits() const;

  [[nodiscard]] Tick window_start() const { return t0_; }
  [[nodiscard]] Tick window_length() const { return length_; }
  [[nodiscard]] std::uint64_t invalid_count() const { return invalid_; }
  [[nodiscard]] bool logging_at(Tick now) const;
  [[nodiscard]] bool validating_at(Tick now) const;

  [[nodiscard]] std::uint64_t logged() const { return logged_; }
  [[nodiscard]] std::uint64_t verified() const { return verified_; }
  [[nodiscard]] std::uint64_t rejected() const { return rejected_; }

 private:
  StrategyKind kind_;
  std::optional<RotatingFilterPair> filters_;
  std::uint64_t digest_seed_;
  DynamicParams dyn_;
  Tick t0_ = 0;
  Tick length_ = 0;
  std::uint64_t invalid_ = 0;
  std::optional<Refill> refill_;

  std::uint64_t logged_ = 0;
  std::uint64_t verified_ = 0;
  std::uint64_t rejected_ = 0;
};

}  // namespace logdos
