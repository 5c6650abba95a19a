#include "logdos/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <istream>
#include <string_view>
#include <unordered_set>

#include <fmt/format.h>

#include "logdos/rng.hpp"

namespace logdos {

TopologyParseError::TopologyParseError(std::size_t line, const std::string& what)
    : TopologyError(fmt::format("line {}: {}", line, what)), line_(line) {}

UnreachableError::UnreachableError(AsId src, AsId dst)
    : TopologyError(fmt::format("AS {} cannot reach AS {}", src.value, dst.value)) {}

Topology Topology::from_edges(std::vector<std::pair<AsId, AsId>> edges) {
  for (auto& [a, b] : edges) {
    if (a == b) throw TopologyError(fmt::format("self-loop on AS {}", a.value));
    if (b < a) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Topology t;
  t.ids_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    t.ids_.push_back(a);
    t.ids_.push_back(b);
  }
  std::sort(t.ids_.begin(), t.ids_.end());
  t.ids_.erase(std::unique(t.ids_.begin(), t.ids_.end()), t.ids_.end());
  if (t.ids_.size() > UINT32_MAX) throw TopologyError("too many ASes");

  std::vector<std::size_t> degree(t.ids_.size(), 0);
  std::vector<std::pair<Index, Index>> idx_edges;
  idx_edges.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const Index ia = *t.index_of(a);
    const Index ib = *t.index_of(b);
    ++degree[ia];
    ++degree[ib];
    idx_edges.emplace_back(ia, ib);
  }
  t.offsets_.assign(t.ids_.size() + 1, 0);
  for (std::size_t i = 0; i < degree.size(); ++i) t.offsets_[i + 1] = t.offsets_[i] + degree[i];
  t.targets_.resize(t.offsets_.back());
  std::vector<std::size_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
  for (const auto& [ia, ib] : idx_edges) {
    t.targets_[cursor[ia]++] = ib;
    t.targets_[cursor[ib]++] = ia;
  }
  for (std::size_t i = 0; i < t.ids_.size(); ++i) {
    std::sort(t.targets_.begin() + static_cast<std::ptrdiff_t>(t.offsets_[i]),
              t.targets_.begin() + static_cast<std::ptrdiff_t>(t.offsets_[i + 1]));
  }
  return t;
}

std::optional<Topology::Index> Topology::index_of(AsId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

Topology::Index Topology::require_index(AsId id) const {
  auto idx = index_of(id);
  if (!idx) throw TopologyError(fmt::format("unknown AS {}", id.value));
  return *idx;
}

std::span<const Topology::Index> Topology::neighbors(Index idx) const {
  return std::span<const Index>(targets_).subspan(offsets_[idx],
                                                   offsets_[idx + 1] - offsets_[idx]);
}

bool Topology::has_edge(AsId a, AsId b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (!ia || !ib) return false;
  auto nb = neighbors(*ia);
  return std::binary_search(nb.begin(), nb.end(), *ib);
}

std::vector<std::pair<AsId, AsId>> Topology::edges() const {
  std::vector<std::pair<AsId, AsId>> out;
  out.reserve(edge_count());
  for (Index i = 0; i < ids_.size(); ++i) {
    for (Index j : neighbors(i)) {
      if (i < j) out.emplace_back(ids_[i], ids_[j]);
    }
  }
  return out;
}

AsClass Topology::class_of(AsId id) const {
  if (classes_.empty()) return AsClass::Unknown;
  auto idx = index_of(id);
  return idx ? classes_[*idx] : AsClass::Unknown;
}

void Topology::set_class(AsId id, AsClass cls) {
  const Index idx = require_index(id);
  if (classes_.empty()) classes_.assign(ids_.size(), AsClass::Unknown);
  classes_[idx] = cls;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

std::optional<std::uint64_t> parse_decimal(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Topology load_edge_list(std::istream& in) {
  std::vector<std::pair<AsId, AsId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw TopologyParseError(lineno, fmt::format("expected 2 fields, got {}", fields.size()));
    auto a = parse_decimal(fields[0]);
    auto b = parse_decimal(fields[1]);
    if (!a || !b) throw TopologyParseError(lineno, "AS ids must be decimal integers");
    if (*a == *b) throw TopologyParseError(lineno, fmt::format("self-loop on AS {}", *a));
    edges.emplace_back(AsId{*a}, AsId{*b});
  }
  if (in.bad()) throw TopologyError("read error on edge list");
  return Topology::from_edges(std::move(edges));
}

void load_metadata(std::istream& in, Topology& topology) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw TopologyParseError(lineno, fmt::format("expected 2 fields, got {}", fields.size()));
    auto id = parse_decimal(fields[0]);
    if (!id) throw TopologyParseError(lineno, "AS id must be a decimal integer");
    AsClass cls;
    if (fields[1] == "transient") {
      cls = AsClass::Transient;
    } else if (fields[1] == "core") {
      cls = AsClass::Core;
    } else {
      throw TopologyParseError(lineno, fmt::format("unknown class '{}'", fields[1]));
    }
    if (!topology.index_of(AsId{*id}))
      throw TopologyParseError(lineno, fmt::format("AS {} not in topology", *id));
    topology.set_class(AsId{*id}, cls);
  }
}

Topology generate_synthetic(std::size_t n_nodes, std::size_t attachment, std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("synthetic topology needs at least 2 nodes");
  if (attachment < 1) throw std::invalid_argument("attachment must be >= 1");
  Rng rng = derive_rng(seed, 0x70b0);

  std::vector<std::pair<AsId, AsId>> edges;
  std::vector<std::uint64_t> endpoints;  // each node repeated once per incident edge
  const std::size_t core = std::min(attachment + 1, n_nodes);
  for (std::uint64_t i = 0; i < core; ++i) {
    for (std::uint64_t j = i + 1; j < core; ++j) {
      edges.emplace_back(AsId{i}, AsId{j});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<std::uint64_t> chosen;
  for (std::uint64_t v = core; v < n_nodes; ++v) {
    chosen.clear();
    const std::size_t want = std::min<std::size_t>(attachment, v);
    while (chosen.size() < want) {
      const std::uint64_t u = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (std::uint64_t u : chosen) {
      edges.emplace_back(AsId{u}, AsId{v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return Topology::from_edges(std::move(edges));
}

std::vector<std::int32_t> bfs_distances(const Topology& t, Topology::Index src) {
  std::vector<std::int32_t> dist(t.node_count(), -1);
  std::vector<Topology::Index> frontier{src};
  dist[src] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const auto u = frontier[head];
    for (auto v : t.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<AsId> shortest_path(const Topology& t, AsId src, AsId dst) {
  const auto s = t.require_index(src);
  const auto d = t.require_index(dst);
  if (s == d) return {src};

  constexpr auto kNone = UINT32_MAX;
  std::vector<Topology::Index> parent(t.node_count(), kNone);
  std::vector<Topology::Index> frontier{s};
  parent[s] = s;
  bool found = false;
  for (std::size_t head = 0; head < frontier.size() && !found; ++head) {
    const auto u = frontier[head];
    for (auto v : t.neighbors(u)) {
      if (parent[v] != kNone) continue;
      parent[v] = u;
      if (v == d) {
        found = true;
        break;
      }
      frontier.push_back(v);
    }
  }
  if (!found) throw UnreachableError(src, dst);

  std::vector<AsId> path;
  for (auto v = d; v != s; v = parent[v]) path.push_back(t.id_at(v));
  path.push_back(src);
  std::reverse(path.begin(), path.end());
  return path;
}

TopologyStats topology_stats(const Topology& t, std::size_t sample_pairs, std::uint64_t seed) {
  TopologyStats stats;
  stats.nodes = t.node_count();
  stats.edges = t.edge_count();
  for (AsId id : t.nodes()) {
    switch (t.class_of(id)) {
      case AsClass::Transient: ++stats.transient; break;
      case AsClass::Core: ++stats.core; break;
      case AsClass::Unknown: break;
    }
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  auto record = [&](std::int32_t d) {
    if (d <= 0) return;
    sum += d;
    sum_sq += static_cast<double>(d) * d;
    ++count;
  };

  const auto n = static_cast<Topology::Index>(t.node_count());
  if (n <= 2000) {
    stats.exact = true;
    for (Topology::Index u = 0; u < n; ++u) {
      auto dist = bfs_distances(t, u);
      for (Topology::Index v = u + 1; v < n; ++v) record(dist[v]);
    }
  } else if (n >= 2) {
    Rng rng = derive_rng(seed, 0x57a7);
    for (std::size_t i = 0; i < sample_pairs; ++i) {
      const auto u = static_cast<Topology::Index>(uniform_below(rng, n));
      auto v = static_cast<Topology::Index>(uniform_below(rng, n - 1));
      if (v >= u) ++v;
      record(bfs_distances(t, u)[v]);
    }
  }

  stats.pairs = count;
  if (count > 0) {
    stats.mean_path_len = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq / static_cast<double>(count) -
                                          stats.mean_path_len * stats.mean_path_len);
    stats.stddev_path_len = std::sqrt(var);
    stats.stderr_mean_path_len = stats.stddev_path_len / std::sqrt(static_cast<double>(count));
  }
  return stats;
}

PidMap PidMap::assign(const Topology& t, std::uint64_t seed) {
  PidMap pm;
  pm.entries_.reserve(t.edge_count() * 2);
  for (Topology::Index u = 0; u < t.node_count(); ++u) {
    for (auto v : t.neighbors(u)) pm.entries_.push_back({t.id_at(u), t.id_at(v), PathId{}});
  }
  pm.draw(seed);
  return pm;
}

PidMap PidMap::reassigned(std::uint64_t seed) const {
  PidMap next = *this;
  ++next.epoch_;
  next.draw(seed);
  return next;
}

void PidMap::draw(std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0x91d, epoch_);
  std::unordered_set<std::uint64_t> used;
  used.reserve(entries_.size() * 2);
  for (auto& e : entries_) {
    std::uint64_t v;
    do {
      v = rng();
    } while (!used.insert(v).second);
    e.pid = PathId{v};
  }
}

PathId PidMap::at(AsId from, AsId to) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{from, to},
                             [](const Entry& e, const std::pair<AsId, AsId>& key) {
                               return std::pair{e.from, e.to} < key;
                             });
  if (it == entries_.end() || it->from != from || it->to != to)
    throw std::out_of_range(fmt::format("no path identifier for {}->{}", from.value, to.value));
  return it->pid;
}

std::vector<PathId> pids_along(const PidMap& pids, std::span<const AsId> path) {
  std::vector<PathId> out;
  if (path.size() < 2) return out;
  out.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) out.push_back(pids.at(path[i], path[i + 1]));
  return out;
}

}  // namespace logdos
