#include "logdos/strategies.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace logdos {

namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 6> kNames{{
    {StrategyKind::NoDefense, "none"},
    {StrategyKind::Comprehensive, "comprehensive"},
    {StrategyKind::Odd, "odd"},
    {StrategyKind::Even, "even"},
    {StrategyKind::Dynamic, "dynamic"},
    {StrategyKind::DPid, "dpid"},
}};

}  // namespace

std::string_view to_string(StrategyKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

void DynamicParams::validate() const {
  if (initial_duration <= 0) throw std::invalid_argument("dynamic initial duration must be > 0");
  if (silent_period < 0) throw std::invalid_argument("dynamic silent period must be >= 0");
  if (validation_shift < 0) throw std::invalid_argument("dynamic validation shift must be >= 0");
  if (threshold < 1) throw std::invalid_argument("dynamic threshold must be >= 1");
}

bool should_log(StrategyKind kind, std::size_t arrival_prefix_len) {
  switch (kind) {
    case StrategyKind::Comprehensive:
    case StrategyKind::Dynamic:
      return true;
    case StrategyKind::Odd:
      return arrival_prefix_len % 2 == 1;
    case StrategyKind::Even:
      return arrival_prefix_len % 2 == 0;
    case StrategyKind::NoDefense:
    case StrategyKind::DPid:
      return false;
  }
  return false;
}

RouterState::RouterState(StrategyKind kind, std::optional<RotatingFilterPair> filters,
                         std::uint64_t digest_seed, DynamicParams dynamic, Tick phase_offset)
    : kind_(kind), filters_(std::move(filters)), digest_seed_(digest_seed), dyn_(dynamic) {
  if (uses_filters(kind_) != filters_.has_value())
    throw std::invalid_argument("filters must be supplied exactly for logging strategies");
  if (kind_ == StrategyKind::Dynamic) {
    dyn_.validate();
    t0_ = phase_offset;
    length_ = dyn_.initial_duration;
  }
}

bool RouterState::logging_at(Tick now) const {
  if (kind_ != StrategyKind::Dynamic) return uses_filters(kind_);
  return now >= t0_ && now < t0_ + length_;
}

bool RouterState::validating_at(Tick now) const {
  if (kind_ != StrategyKind::Dynamic) return uses_filters(kind_);
  return now >= t0_ + dyn_.validation_shift && now < t0_ + length_ + dyn_.validation_shift;
}

void RouterState::dynamic_advance(Tick now) {
  if (kind_ != StrategyKind::Dynamic) return;
  while (now >= t0_ + length_ + dyn_.validation_shift) {
    if (invalid_ > dyn_.threshold) {
      length_ += dyn_.initial_duration;
    } else {
      t0_ += length_ + dyn_.silent_period;
      length_ = dyn_.initial_duration;
      filters_->reset();
      if (refill_) prefill(refill_->count, refill_->rng);
    }
    invalid_ = 0;
  }
}

void RouterState::on_get(const ServiceId& sid, std::span<const PathId> arrival_prefix,
                         Tick now) {
  if (!uses_filters(kind_)) return;
  dynamic_advance(now);
  if (!should_log(kind_, arrival_prefix.size()) || !logging_at(now)) return;
  filters_->insert(digest_of(sid, arrival_prefix, digest_seed_));
  ++logged_;
}

Verdict RouterState::on_data(const ServiceId& sid, std::span<const PathId> stripped_prefix,
                             Tick now, std::uint64_t packet_epoch,
                             std::uint64_t current_epoch) {
  switch (kind_) {
    case StrategyKind::NoDefense:
      return Verdict::Allow;
    case StrategyKind::DPid:
      ++verified_;
      if (packet_epoch == current_epoch) return Verdict::Allow;
      ++rejected_;
      return Verdict::Reject;
    default:
      break;
  }
  dynamic_advance(now);
  if (!should_log(kind_, stripped_prefix.size()) || !validating_at(now)) return Verdict::Allow;
  ++verified_;
  if (filters_->contains(digest_of(sid, stripped_prefix, digest_seed_))) return Verdict::Allow;
  ++rejected_;
  if (kind_ == StrategyKind::Dynamic) ++invalid_;
  return Verdict::Reject;
}

void RouterState::prefill(std::uint64_t count, Rng& rng) {
  if (!filters_) return;
  for (std::uint64_t i = 0; i < count; ++i) filters_->insert(random_digest(rng));
}

std::uint64_t RouterState::storage_bits() const {
  return filters_ ? filters_->storage_bits() : 0;
}

}  // namespace logdos
