#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "logdos/ids.hpp"

namespace logdos {

enum class AsClass : std::uint8_t { Unknown, Transient, Core };

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list or metadata input; carries the 1-based line number.
class TopologyParseError : public TopologyError {
 public:
  TopologyParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnreachableError : public TopologyError {
 public:
  UnreachableError(AsId src, AsId dst);
};

/// Undirected AS-level graph. Nodes are kept sorted by AsId, so dense index
/// order equals id order and neighbor lists are sorted by id.
class Topology {
 public:
  using Index = std::uint32_t;

  Topology() = default;

  /// Builds a graph from an undirected edge list, dropping duplicates in
  /// either orientation. Throws TopologyError on a self-loop.
  static Topology from_edges(std::vector<std::pair<AsId, AsId>> edges);

  [[nodiscard]] std::size_t node_count() const { return ids_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return targets_.size() / 2; }
  [[nodiscard]] std::span<const AsId> nodes() const { return ids_; }

  [[nodiscard]] AsId id_at(Index idx) const { return ids_[idx]; }
  [[nodiscard]] std::optional<Index> index_of(AsId id) const;
  [[nodiscard]] Index require_index(AsId id) const;
  [[nodiscard]] std::span<const Index> neighbors(Index idx) const;
  [[nodiscard]] bool has_edge(AsId a, AsId b) const;

  /// Undirected edges as (lower id, higher id), sorted.
  [[nodiscard]] std::vector<std::pair<AsId, AsId>> edges() const;

  [[nodiscard]] AsClass class_of(AsId id) const;
  [[nodiscard]] bool has_metadata() const { return !classes_.empty(); }
  void set_class(AsId id, AsClass cls);

 private:
  std::vector<AsId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<Index> targets_;
  std::vector<AsClass> classes_;
};

/// Parses whitespace-separated "asid asid" lines. '#' starts a comment and
/// blank lines are skipped.
Topology load_edge_list(std::istream& in);

/// Applies "asid class" lines (class is "transient" or "core").
void load_metadata(std::istream& in, Topology& topology);

/// Preferential-attachment graph: a clique on the first attachment+1 nodes,
/// then each new node links to `attachment` distinct existing nodes chosen
/// with probability proportional to degree. Nodes are numbered 0..n-1.
Topology generate_synthetic(std::size_t n_nodes, std::size_t attachment, std::uint64_t seed);

/// BFS shortest path from src to dst inclusive of both endpoints. Neighbors
/// are expanded in ascending id order, so ties resolve deterministically.
std::vector<AsId> shortest_path(const Topology& t, AsId src, AsId dst);

/// Hop distances from `src` to every node index; -1 where unreachable.
std::vector<std::int32_t> bfs_distances(const Topology& t, Topology::Index src);

struct TopologyStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t pairs = 0;          ///< reachable unordered pairs measured
  bool exact = false;             ///< all pairs rather than a sample
  double mean_path_len = 0.0;     ///< in hops
  double stddev_path_len = 0.0;   ///< spread of individual path lengths
  double stderr_mean_path_len = 0.0;  ///< spread of the mean itself
  std::size_t transient = 0;
  std::size_t core = 0;
};

/// Path-length statistics. Exact over all pairs when the graph has at most
/// 2000 nodes, otherwise over `sample_pairs` random pairs.
TopologyStats topology_stats(const Topology& t, std::size_t sample_pairs, std::uint64_t seed);

/// Directed-edge path identifiers for one epoch.
class PidMap {
 public:
  static PidMap assign(const Topology& t, std::uint64_t seed);

  /// Same directed edges, every PathId redrawn, epoch + 1.
  [[nodiscard]] PidMap reassigned(std::uint64_t seed) const;

  /// Throws std::out_of_range for a pair that is not a directed edge.
  [[nodiscard]] PathId at(AsId from, AsId to) const;
  [[nodiscard]] std::uint64_t epoch() const { return epoch_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

  struct Entry {
    AsId from;
    AsId to;
    PathId pid;
  };
  [[nodiscard]] std::span<const Entry> entries() const { return entries_; }

 private:
  void draw(std::uint64_t seed);

  std::vector<Entry> entries_;
  std::uint64_t epoch_ = 0;
};

/// PathIds along `path`, one per consecutive pair.
std::vector<PathId> pids_along(const PidMap& pids, std::span<const AsId> path);

}  // namespace logdos
