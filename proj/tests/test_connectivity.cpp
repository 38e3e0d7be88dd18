#include <doctest.h>

#include <sstream>

#include "lamapf/connectivity.hpp"
#include "support.hpp"

using namespace lamapf;
using test::TestRng;

namespace {

std::vector<ConnNode::Kind> kinds_of(const ConnectivityGraph& g, const DependencePath& p) {
  std::vector<ConnNode::Kind> kinds;
  for (int n : p.nodes) kinds.push_back(g.node(n).kind);
  return kinds;
}

std::pair<int, int> objective(const ConnectivityGraph& g, const DependencePath& p) {
  return {static_cast<int>(agents_visited(g, p).size()), static_cast<int>(p.nodes.size())};
}

}  // namespace

TEST_CASE("connectivity graph of the two-free-group instance") {
  Instance inst = test::fig2_instance();
  ConnectivityGraph g = build_connectivity_graph(inst);

  CHECK(g.free_group_count() == 2);
  CHECK(g.node_count() == 8);
  CHECK(g.group_cells(0).size() == 2);  // the two cells beside agent 0's start
  CHECK(g.group_cells(1).size() == 4);

  // every passable cell belongs to exactly one node
  std::vector<int> owned(g.node_count(), 0);
  int passable = 0;
  for (int c = 0; c < inst.map.cell_count(); ++c) {
    if (!inst.map.is_passable(c)) {
      CHECK(g.node_of_cell(c) == -1);
      continue;
    }
    ++passable;
    REQUIRE(g.node_of_cell(c) >= 0);
    ++owned[g.node_of_cell(c)];
  }
  CHECK(passable == inst.map.free_count());
  int covered = 0;
  for (int n = 0; n < g.node_count(); ++n) covered += owned[n];
  CHECK(covered == passable);
  for (int a = 0; a < 3; ++a) {
    CHECK(owned[g.start_node(a)] == 1);
    CHECK(owned[g.target_node(a)] == 1);
  }
}

TEST_CASE("connectivity dump matches the golden adjacency listing") {
  Instance inst = test::fig2_instance();
  ConnectivityGraph g = build_connectivity_graph(inst);
  std::ostringstream out;
  dump_connectivity(g, out);
  CHECK(out.str() ==
        "0f\n1f\n0s\n1s\n2s\n0t\n1t\n2t\n"
        "0f 0s\n0f 1t\n1f 1s\n1f 2s\n1f 0t\n1f 1t\n1f 2t\n");
}

TEST_CASE("dependence paths of the two-free-group instance") {
  Instance inst = test::fig2_instance();
  ConnectivityGraph g = build_connectivity_graph(inst);
  using K = ConnNode::Kind;

  auto p1 = search_dependence_path(g, 1, {}, {});
  REQUIRE(p1);
  CHECK(kinds_of(g, *p1) == std::vector<K>{K::Start, K::Free, K::Target});
  CHECK(agents_on_path(g, *p1).empty());

  auto p0 = search_dependence_path(g, 0, {}, {});
  REQUIRE(p0);
  CHECK(kinds_of(g, *p0) == std::vector<K>{K::Start, K::Free, K::Target, K::Free, K::Target});
  CHECK(g.node(p0->nodes[2]).ref == 1);  // the crossed target belongs to agent 1
  auto visits0 = agents_on_path(g, *p0);
  REQUIRE(visits0.size() == 1);
  CHECK(visits0[0] == AgentVisit{1, K::Target});

  auto p2 = search_dependence_path(g, 2, {}, {});
  REQUIRE(p2);
  CHECK(kinds_of(g, *p2) == std::vector<K>{K::Start, K::Free, K::Target});
  CHECK(agents_on_path(g, *p2).empty());

  // agent 1's target is unavoidable for agent 0
  std::vector<int> avoid{1};
  CHECK(!search_dependence_path(g, 0, {}, avoid));
  CHECK(search_dependence_path(g, 1, {}, std::vector<int>{0}));
}

TEST_CASE("available set restricts traversable agents") {
  Instance inst = test::fig2_instance();
  ConnectivityGraph g = build_connectivity_graph(inst);
  // with only itself available, agent 0 cannot reach its target
  std::vector<int> only_self{0};
  CHECK(!search_dependence_path(g, 0, only_self, {}));
  std::vector<int> with_1{0, 1};
  CHECK(search_dependence_path(g, 0, with_1, {}));
  // an empty available set means every node is available
  CHECK(search_dependence_path(g, 0, {}, {}));
}

TEST_CASE("search emptiness matches exhaustive enumeration on small graphs") {
  TestRng rng(99);
  int graphs = 0, queries = 0;
  while (graphs < 60) {
    int agents = 1 + rng.below(3);
    auto inst = test::random_instance(rng, 5 + rng.below(3), 4 + rng.below(3), 0.35, agents);
    if (!inst) continue;
    ConnectivityGraph g = build_connectivity_graph(*inst);
    if (g.node_count() > 12) continue;
    ++graphs;
    for (int i = 0; i < agents; ++i) {
      for (int j = 0; j < agents; ++j) {
        if (i == j) continue;
        std::vector<int> avoid{j};
        auto best = test::enumeration_best_objective(g, i, {}, avoid);
        auto found = search_dependence_path(g, i, {}, avoid);
        CHECK(found.has_value() == best.has_value());
        CHECK(dependence_path_exists(g, i, {}, avoid) == best.has_value());
        if (found && best) CHECK(objective(g, *found) == *best);
        ++queries;
      }
      auto best = test::enumeration_best_objective(g, i, {}, {});
      auto found = search_dependence_path(g, i, {}, {});
      REQUIRE(found.has_value() == best.has_value());
      if (found && best) CHECK(objective(g, *found) == *best);
      ++queries;
    }
  }
  CHECK(queries > 100);
}

TEST_CASE("unconstrained search is never worse than constrained") {
  TestRng rng(5);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int agents = 2 + rng.below(4);
    auto inst = test::random_instance(rng, 8, 8, 0.25, agents);
    if (!inst) continue;
    ConnectivityGraph g = build_connectivity_graph(*inst);
    int a = rng.below(agents);
    std::vector<int> avoid;
    for (int j = 0; j < agents; ++j)
      if (j != a && rng.below(3) == 0) avoid.push_back(j);
    auto free = search_dependence_path(g, a, {}, {});
    auto constrained = search_dependence_path(g, a, {}, avoid);
    REQUIRE(free);
    if (!constrained) continue;
    CHECK(objective(g, *free) <= objective(g, *constrained));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("search is deterministic") {
  TestRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = test::random_instance(rng, 10, 10, 0.3, 4);
    if (!inst) continue;
    ConnectivityGraph g1 = build_connectivity_graph(*inst);
    ConnectivityGraph g2 = build_connectivity_graph(*inst);
    for (int a = 0; a < 4; ++a) {
      auto p1 = search_dependence_path(g1, a, {}, {});
      auto p2 = search_dependence_path(g2, a, {}, {});
      REQUIRE(p1);
      REQUIRE(p2);
      CHECK(p1->nodes == p2->nodes);
    }
  }
}

TEST_CASE("node cell sets partition passable cells on random maps") {
  TestRng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    auto inst = test::random_instance(rng, 8, 8, 0.3, 3);
    if (!inst) continue;
    ConnectivityGraph g = build_connectivity_graph(*inst);
    int covered = 0;
    for (int c = 0; c < inst->map.cell_count(); ++c) {
      int n = g.node_of_cell(c);
      if (inst->map.is_passable(c)) {
        REQUIRE(n >= 0);
        REQUIRE(n < g.node_count());
        ++covered;
      } else {
        CHECK(n == -1);
      }
    }
    CHECK(covered == inst->map.free_count());
    int group_cells = 0;
    for (int gi = 0; gi < g.free_group_count(); ++gi)
      group_cells += static_cast<int>(g.group_cells(gi).size());
    CHECK(group_cells == covered - 2 * g.agent_count());
  }
}

TEST_CASE("free grid groups are maximal and exclude endpoints") {
  TestRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = test::random_instance(rng, 8, 8, 0.3, 3);
    if (!inst) continue;
    ConnectivityGraph g = build_connectivity_graph(*inst);
    std::array<int, 2 * kMaxDims> nb;
    for (int gi = 0; gi < g.free_group_count(); ++gi) {
      for (int cell : g.group_cells(gi)) {
        CHECK(g.node(g.node_of_cell(cell)).kind == ConnNode::Kind::Free);
        int cnt = inst->map.neighbor_cells(cell, nb);
        for (int i = 0; i < cnt; ++i) {
          int n = g.node_of_cell(nb[i]);
          // a passable neighbor that is free must be in the same group
          if (n >= 0 && g.node(n).kind == ConnNode::Kind::Free) CHECK(n == gi);
        }
      }
    }
  }
}
