#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "logdos/rng.hpp"
#include "logdos/topology.hpp"

using namespace logdos;

namespace {

Topology parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

Topology line_graph(std::uint64_t n) {
  std::vector<std::pair<AsId, AsId>> e;
  for (std::uint64_t i = 0; i + 1 < n; ++i) e.emplace_back(AsId{i}, AsId{i + 1});
  return Topology::from_edges(e);
}

// All-pairs hop counts by Floyd-Warshall over an adjacency matrix.
std::vector<std::vector<int>> floyd(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : edges) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("edge list parsing") {
  auto t = parse("# header\n1 2\n\n2 3   # trailing\n3 1\n2 1\n");
  CHECK(t.node_count() == 3);
  CHECK(t.edge_count() == 3);
  CHECK(t.has_edge(AsId{1}, AsId{2}));
  CHECK(t.has_edge(AsId{2}, AsId{1}));
  CHECK_FALSE(t.has_edge(AsId{1}, AsId{4}));
  CHECK(t.edges().front() == std::pair{AsId{1}, AsId{2}});
}

TEST_CASE("edge list errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const TopologyParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("1 2\n3\n") == 2);
  CHECK(line_of("1 2\n2 3\n4 5 6\n") == 3);
  CHECK(line_of("1 x\n") == 1);
  CHECK(line_of("1 -2\n") == 1);
  CHECK(line_of("# c\n7 7\n") == 2);
  CHECK_THROWS_AS(Topology::from_edges({{AsId{3}, AsId{3}}}), TopologyError);
}

TEST_CASE("metadata") {
  auto t = parse("1 2\n2 3\n");
  CHECK_FALSE(t.has_metadata());
  CHECK(t.class_of(AsId{1}) == AsClass::Unknown);
  std::istringstream meta("1 transient\n# comment\n2 core\n");
  load_metadata(meta, t);
  CHECK(t.has_metadata());
  CHECK(t.class_of(AsId{1}) == AsClass::Transient);
  CHECK(t.class_of(AsId{2}) == AsClass::Core);
  CHECK(t.class_of(AsId{3}) == AsClass::Unknown);

  std::istringstream bad_class("1 stub\n");
  CHECK_THROWS_AS(load_metadata(bad_class, t), TopologyParseError);
  std::istringstream unknown_as("1 core\n9 core\n");
  try {
    load_metadata(unknown_as, t);
    FAIL("expected a parse error");
  } catch (const TopologyParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("synthetic generator") {
  SUBCASE("two nodes form one edge") {
    auto t = generate_synthetic(2, 1, 1);
    CHECK(t.node_count() == 2);
    CHECK(t.edge_count() == 1);
  }
  SUBCASE("edge count and determinism") {
    auto a = generate_synthetic(500, 3, 9);
    auto b = generate_synthetic(500, 3, 9);
    auto c = generate_synthetic(500, 3, 10);
    CHECK(a.node_count() == 500);
    // clique on 4 nodes plus 3 edges per later node
    CHECK(a.edge_count() == 6 + 3 * 496);
    CHECK(a.edges() == b.edges());
    CHECK(a.edges() != c.edges());
  }
  SUBCASE("connected with short paths") {
    auto t = generate_synthetic(1000, 2, 1);
    auto dist = bfs_distances(t, 0);
    CHECK(std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; }));
    auto stats = topology_stats(t, 0, 1);
    CHECK(stats.exact);
    CHECK(stats.mean_path_len == doctest::Approx(4.0).epsilon(0.25));
  }
  CHECK_THROWS_AS(generate_synthetic(1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(10, 0, 1), std::invalid_argument);
}

TEST_CASE("shortest path on a line") {
  auto t = line_graph(6);
  auto p = shortest_path(t, AsId{0}, AsId{5});
  REQUIRE(p.size() == 6);
  for (std::uint64_t i = 0; i < 6; ++i) CHECK(p[i] == AsId{i});
  CHECK(shortest_path(t, AsId{3}, AsId{3}) == std::vector<AsId>{AsId{3}});
  CHECK_THROWS_AS(shortest_path(t, AsId{0}, AsId{99}), TopologyError);
}

TEST_CASE("unreachable pair") {
  auto t = Topology::from_edges({{AsId{1}, AsId{2}}, {AsId{3}, AsId{4}}});
  CHECK_THROWS_AS(shortest_path(t, AsId{1}, AsId{4}), UnreachableError);
}

TEST_CASE("shortest paths agree with an all-pairs oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + uniform_below(rng, 30);
    std::vector<std::pair<int, int>> raw;
    std::vector<std::pair<AsId, AsId>> edges;
    const std::size_t m = n + uniform_below(rng, 2 * n);
    for (std::size_t i = 0; i < m; ++i) {
      const int a = static_cast<int>(uniform_below(rng, n));
      const int b = static_cast<int>(uniform_below(rng, n));
      if (a == b) continue;
      raw.emplace_back(a, b);
      edges.emplace_back(AsId{static_cast<std::uint64_t>(a)}, AsId{static_cast<std::uint64_t>(b)});
    }
    if (edges.empty()) continue;
    auto t = Topology::from_edges(edges);
    auto oracle = floyd(n, raw);
    for (AsId s : t.nodes()) {
      for (AsId d : t.nodes()) {
        const int want = oracle[s.value][d.value];
        if (want >= (1 << 20)) {
          CHECK_THROWS_AS(shortest_path(t, s, d), UnreachableError);
          continue;
        }
        auto p = shortest_path(t, s, d);
        CHECK(p.size() == static_cast<std::size_t>(want) + 1);
        CHECK(p.front() == s);
        CHECK(p.back() == d);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(t.has_edge(p[i], p[i + 1]));
        CHECK(shortest_path(t, s, d) == p);
      }
    }
  }
}

TEST_CASE("path statistics on small graphs") {
  auto tri = Topology::from_edges({{AsId{0}, AsId{1}}, {AsId{1}, AsId{2}}, {AsId{0}, AsId{2}}});
  auto s = topology_stats(tri, 0, 1);
  CHECK(s.pairs == 3);
  CHECK(s.mean_path_len == doctest::Approx(1.0));
  CHECK(s.stddev_path_len == doctest::Approx(0.0));

  // pair lengths 1, 1, 2
  auto line = line_graph(3);
  s = topology_stats(line, 0, 1);
  CHECK(s.pairs == 3);
  CHECK(s.mean_path_len == doctest::Approx(4.0 / 3.0));
  CHECK(s.stddev_path_len == doctest::Approx(std::sqrt(2.0) / 3.0));
  CHECK(s.stderr_mean_path_len == doctest::Approx(std::sqrt(2.0) / 3.0 / std::sqrt(3.0)));
}

TEST_CASE("sampled statistics on a large graph") {
  auto t = generate_synthetic(3000, 2, 4);
  auto s = topology_stats(t, 400, 5);
  CHECK_FALSE(s.exact);
  CHECK(s.pairs == 400);
  CHECK(s.mean_path_len > 2.0);
  CHECK(s.mean_path_len < 7.0);
  auto again = topology_stats(t, 400, 5);
  CHECK(again.mean_path_len == s.mean_path_len);
}

TEST_CASE("PathId assignment") {
  auto t = generate_synthetic(200, 2, 3);
  auto pm = PidMap::assign(t, 77);
  CHECK(pm.size() == 2 * t.edge_count());
  CHECK(pm.epoch() == 0);

  std::unordered_set<std::uint64_t> seen;
  for (const auto& [a, b] : t.edges()) {
    const PathId ab = pm.at(a, b);
    const PathId ba = pm.at(b, a);
    CHECK(ab != ba);
    seen.insert(ab.value);
    seen.insert(ba.value);
  }
  CHECK(seen.size() == pm.size());
  CHECK_THROWS_AS((void)pm.at(AsId{0}, AsId{0}), std::out_of_range);
  CHECK_THROWS_AS((void)pm.at(AsId{0}, AsId{100000}), std::out_of_range);

  auto again = PidMap::assign(t, 77);
  CHECK(again.at(AsId{0}, AsId{1}).value == pm.at(AsId{0}, AsId{1}).value);

  auto next = pm.reassigned(77);
  CHECK(next.epoch() == 1);
  CHECK(next.size() == pm.size());
  std::size_t unchanged = 0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    CHECK(next.entries()[i].from == pm.entries()[i].from);
    CHECK(next.entries()[i].to == pm.entries()[i].to);
    unchanged += next.entries()[i].pid == pm.entries()[i].pid ? 1 : 0;
  }
  CHECK(unchanged == 0);
}

TEST_CASE("pids along a path") {
  auto t = line_graph(4);
  auto pm = PidMap::assign(t, 1);
  std::vector<AsId> path{AsId{0}, AsId{1}, AsId{2}, AsId{3}};
  auto pids = pids_along(pm, path);
  REQUIRE(pids.size() == 3);
  CHECK(pids[1] == pm.at(AsId{1}, AsId{2}));
  CHECK(pids_along(pm, std::span<const AsId>(path).first(1)).empty());
  std::vector<AsId> broken{AsId{0}, AsId{2}};
  CHECK_THROWS_AS(pids_along(pm, broken), std::out_of_range);
}
