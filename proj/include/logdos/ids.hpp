#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace logdos {

using Tick = std::int64_t;

struct AsId {
  std::uint64_t value = 0;
  auto operator<=>(const AsId&) const = default;
};

/// Identifier of one directed inter-domain link.
struct PathId {
  std::uint64_t value = 0;
  auto operator<=>(const PathId&) const = default;
};

struct ServiceId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  auto operator<=>(const ServiceId&) const = default;
};

struct NodeId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  auto operator<=>(const NodeId&) const = default;
};

/// 128-bit digest of a GET message as seen by one AS. Bloom filter probe
/// positions are derived from it directly.
struct Digest {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  auto operator<=>(const Digest&) const = default;
};

}  // namespace logdos

template <>
struct std::hash<logdos::AsId> {
  std::size_t operator()(const logdos::AsId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<logdos::Digest> {
  std::size_t operator()(const logdos::Digest& d) const noexcept {
    return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL));
  }
};
