#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "logdos/ids.hpp"

namespace logdos {

enum class Provenance : std::uint8_t { Legitimate, Attack };

struct GetMessage {
  ServiceId sid;
  NodeId consumer;
  std::vector<PathId> pids;
  Tick issue_tick = 0;
};

struct DataMessage {
  ServiceId sid;
  std::vector<PathId> pids;
  Provenance ground_truth = Provenance::Legitimate;  ///< bookkeeping only, never read by routers
  std::uint32_t size_bytes = 1024;
  std::uint64_t pid_epoch = 0;  ///< epoch of the PathIds the sender used
};

class MalformedPacket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seeded 128-bit hash of sid ‖ u32 prefix length ‖ each PathId (8 bytes,
/// big-endian). Pure: no state beyond `run_seed`.
Digest digest_of(const ServiceId& sid, std::span<const PathId> prefix, std::uint64_t run_seed);

/// Appends the PathId of the link the GET is about to cross.
void forward_append(GetMessage& msg, PathId pid);

/// Removes and returns the last PathId. Throws MalformedPacket when the
/// list is already empty.
PathId return_strip(DataMessage& msg);

}  // namespace logdos
