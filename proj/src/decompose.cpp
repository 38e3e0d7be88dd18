#include "lamapf/decompose.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "lamapf/exec.hpp"

namespace lamapf {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void sorted_insert(std::vector<int>& sorted, int x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) sorted.insert(it, x);
}

// Connected components of an undirected adjacency list, each sorted, the
// component list ordered by smallest member.
std::vector<std::vector<int>> components(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[id].push_back(u);
      for (int v : adj[u])
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

std::vector<DependencePath> cluster_paths(const std::vector<int>& cluster,
                                          const ConnectivityGraph& graph,
                                          const DecomposeOptions& opts) {
  std::vector<DependencePath> paths(cluster.size());
  std::vector<uint8_t> ok(cluster.size(), 1);
  parallel_for(static_cast<int>(cluster.size()), opts.threads, [&](int i) {
    auto p = search_dependence_path(graph, cluster[i], cluster, {});
    if (p)
      paths[i] = std::move(*p);
    else
      ok[i] = 0;
  });
  for (size_t i = 0; i < cluster.size(); ++i)
    if (!ok[i])
      throw std::invalid_argument("cluster is not independent: agent " +
                                  std::to_string(cluster[i]) +
                                  " has no cluster-confined dependence path");
  return paths;
}

void tarjan_dfs(int u, const std::vector<std::vector<int>>& succ, int& counter,
                std::vector<int>& index, std::vector<int>& low,
                std::vector<uint8_t>& on_stack, std::vector<int>& stack,
                std::vector<std::vector<int>>& sccs) {
  index[u] = low[u] = counter++;
  stack.push_back(u);
  on_stack[u] = 1;
  for (int v : succ[u]) {
    if (index[v] < 0) {
      tarjan_dfs(v, succ, counter, index, low, on_stack, stack, sccs);
      low[u] = std::min(low[u], low[v]);
    } else if (on_stack[v]) {
      low[u] = std::min(low[u], index[v]);
    }
  }
  if (low[u] == index[u]) {
    std::vector<int> scc;
    while (true) {
      int v = stack.back();
      stack.pop_back();
      on_stack[v] = 0;
      scc.push_back(v);
      if (v == u) break;
    }
    std::sort(scc.begin(), scc.end());
    sccs.push_back(std::move(scc));
  }
}

}  // namespace

std::vector<Cluster> initial_clusters(const Instance& instance,
                                      const ConnectivityGraph& graph,
                                      const DecomposeOptions& opts) {
  const int k = instance.agent_count();
  std::vector<DependencePath> paths(k);
  std::vector<uint8_t> ok(k, 1);
  parallel_for(k, opts.threads, [&](int a) {
    auto p = search_dependence_path(graph, a, {}, {});
    if (p)
      paths[a] = std::move(*p);
    else
      ok[a] = 0;
  });
  for (int a = 0; a < k; ++a)
    if (!ok[a])
      throw std::runtime_error("instance unsolvable: agent " + std::to_string(a) +
                               " has no dependence path");

  std::vector<std::vector<int>> relevance(k);
  for (int a = 0; a < k; ++a)
    for (int b : agents_visited(graph, paths[a])) {
      relevance[a].push_back(b);
      relevance[b].push_back(a);
    }
  std::vector<Cluster> clusters;
  for (std::vector<int>& c : components(relevance)) clusters.push_back(Cluster{std::move(c)});
  return clusters;
}

bool is_independent(const std::vector<int>& agents, const ConnectivityGraph& graph) {
  if (agents.empty()) throw std::invalid_argument("is_independent: empty agent set");
  for (int a : agents)
    if (!dependence_path_exists(graph, a, agents, {})) return false;
  return true;
}

std::vector<int> max_unavoidable_set(const std::vector<int>& cluster,
                                     const ConnectivityGraph& graph,
                                     const DecomposeOptions& opts) {
  if (cluster.empty()) throw std::invalid_argument("max_unavoidable_set: empty cluster");
  const int n = static_cast<int>(cluster.size());
  std::vector<int> local(graph.agent_count(), -1);
  for (int i = 0; i < n; ++i) local[cluster[i]] = i;

  // An agent j visited by i's current path is the only kind of candidate for
  // being unavoidable to i; a path already avoiding j settles the pair.
  std::vector<DependencePath> base = cluster_paths(cluster, graph, opts);
  std::vector<std::pair<int, int>> pairs;  // (local i, agent j)
  for (int i = 0; i < n; ++i)
    for (int j : agents_visited(graph, base[i])) pairs.emplace_back(i, j);

  std::vector<uint8_t> unavoidable(pairs.size(), 0);
  parallel_for(static_cast<int>(pairs.size()), opts.threads, [&](int p) {
    auto [i, j] = pairs[p];
    int avoid[1] = {j};
    unavoidable[p] = !dependence_path_exists(graph, cluster[i], cluster, avoid);
  });

  std::vector<std::vector<int>> adj(n);
  for (size_t p = 0; p < pairs.size(); ++p) {
    if (!unavoidable[p]) continue;
    auto [i, j] = pairs[p];
    adj[i].push_back(local[j]);
    adj[local[j]].push_back(i);
  }
  std::vector<std::vector<int>> comps = components(adj);
  const std::vector<int>* best = &comps[0];
  for (const auto& c : comps)
    if (c.size() > best->size()) best = &c;  // earlier component wins ties
  std::vector<int> major;
  for (int i : *best) major.push_back(cluster[i]);
  return major;
}

std::pair<std::vector<int>, std::vector<int>> bipartition(
    const std::vector<int>& cluster, const ConnectivityGraph& graph,
    const DecomposeOptions& opts) {
  // step 1: the major set seeds from the maximum unavoidable agents
  std::vector<int> major = max_unavoidable_set(cluster, graph, opts);
  std::vector<int> remain = minus(cluster, major);

  while (true) {
    // step 2: agents of the remaining set whose every cluster-confined path
    // crosses the major set move to the major set
    while (!remain.empty()) {
      std::vector<uint8_t> fails(remain.size(), 0);
      parallel_for(static_cast<int>(remain.size()), opts.threads, [&](int i) {
        fails[i] = !dependence_path_exists(graph, remain[i], cluster, major);
      });
      std::vector<int> moved;
      for (size_t i = 0; i < remain.size(); ++i)
        if (fails[i]) moved.push_back(remain[i]);
      if (moved.empty()) break;  // every survivor routes within remain
      for (int a : moved) sorted_insert(major, a);
      remain = minus(remain, moved);
    }

    // step 3: every major member must route within the major set; members
    // that cannot pull the remaining agents on a repair path into the major
    // set. Visits to major members carry no cost, so the repair path drags
    // in as few remaining agents as possible.
    bool repaired = false;
    while (true) {
      bool moved_any = false;
      std::vector<int> snapshot = major;
      for (int a : snapshot) {
        if (dependence_path_exists(graph, a, major, {})) continue;
        PathQuery q;
        q.available = cluster;
        q.zero_cost = major;
        auto repair = search_dependence_path(graph, a, q);
        if (!repair)
          throw std::invalid_argument("bipartition: cluster is not independent");
        for (int b : agents_visited(graph, *repair))
          if (contains(remain, b)) {
            sorted_insert(major, b);
            moved_any = true;
          }
        remain = minus(remain, major);
      }
      if (!moved_any) break;
      repaired = true;
    }

    // step 4: both sets satisfy the cluster requirement once step 2 and
    // step 3 reach their fixpoints in the same round
    if (remain.empty() || !repaired) break;
  }
  return {std::move(major), std::move(remain)};
}

std::vector<Cluster> decompose_to_clusters(const Instance& instance,
                                           const ConnectivityGraph& graph,
                                           const DecomposeOptions& opts) {
  std::vector<Cluster> init = initial_clusters(instance, graph, opts);
  std::vector<std::vector<Cluster>> emitted(init.size());
  parallel_for(static_cast<int>(init.size()), opts.threads, [&](int c) {
    std::vector<int> rest = init[c].agents;
    while (!rest.empty()) {
      auto [major, remain] = bipartition(rest, graph, opts);
      emitted[c].push_back(Cluster{std::move(major)});
      rest = std::move(remain);
    }
  });
  std::vector<Cluster> out;
  for (auto& list : emitted)
    for (Cluster& c : list) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& b) { return a.agents[0] < b.agents[0]; });
  return out;
}

std::vector<Level> decompose_to_levels(const std::vector<int>& cluster,
                                       const ConnectivityGraph& graph,
                                       const DecomposeOptions& opts) {
  const int n = static_cast<int>(cluster.size());
  std::vector<int> local(graph.agent_count(), -1);
  for (int i = 0; i < n; ++i) local[cluster[i]] = i;

  std::vector<DependencePath> paths = cluster_paths(cluster, graph, opts);

  // Solving-order graph: visiting j's start means j is solved first
  // (edge j -> i); visiting j's target means i is solved first (edge i -> j).
  std::vector<std::vector<int>> succ(n);
  for (int i = 0; i < n; ++i)
    for (const AgentVisit& v : agents_on_path(graph, paths[i])) {
      int j = local[v.agent];
      if (v.kind == ConnNode::Kind::Start)
        succ[j].push_back(i);
      else
        succ[i].push_back(j);
    }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<uint8_t> on_stack(n, 0);
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  for (int u = 0; u < n; ++u)
    if (index[u] < 0) tarjan_dfs(u, succ, counter, index, low, on_stack, stack, sccs);

  const int m = static_cast<int>(sccs.size());
  std::vector<int> scc_of(n);
  for (int s = 0; s < m; ++s)
    for (int u : sccs[s]) scc_of[u] = s;

  // Condensation plus longest-path layering: roots get rank 0, every other
  // level 1 + the maximum over its predecessors.
  std::vector<std::vector<int>> cond(m);
  std::vector<int> indeg(m, 0);
  for (int u = 0; u < n; ++u)
    for (int v : succ[u])
      if (scc_of[u] != scc_of[v]) cond[scc_of[u]].push_back(scc_of[v]);
  for (auto& c : cond) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (int v : c) ++indeg[v];
  }
  std::vector<int> order(m, 0), queue;
  for (int s = 0; s < m; ++s)
    if (indeg[s] == 0) queue.push_back(s);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int v : cond[u]) {
      order[v] = std::max(order[v], order[u] + 1);
      if (--indeg[v] == 0) queue.push_back(v);
    }
  }

  std::vector<Level> levels(m);
  for (int s = 0; s < m; ++s) {
    for (int u : sccs[s]) levels[s].agents.push_back(cluster[u]);
    std::sort(levels[s].agents.begin(), levels[s].agents.end());
    levels[s].order = order[s];
  }
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    return a.order != b.order ? a.order < b.order : a.agents[0] < b.agents[0];
  });
  return levels;
}

CompareResult compare_decompositions(std::vector<int> a, std::vector<int> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("compare_decompositions: empty size list");
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int va = i < a.size() ? a[i] : 0;
    int vb = i < b.size() ? b[i] : 0;
    if (va < vb) return CompareResult::ABetter;
    if (vb < va) return CompareResult::BBetter;
  }
  return CompareResult::Equal;
}

double decomposition_rate(const std::vector<Level>& levels, int agent_count) {
  size_t largest = 0;
  for (const Level& l : levels) largest = std::max(largest, l.agents.size());
  return static_cast<double>(largest) / agent_count;
}

std::vector<Level> solve_order(const std::vector<std::vector<Level>>& per_cluster) {
  std::vector<int> idx(per_cluster.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return per_cluster[a][0].agents[0] < per_cluster[b][0].agents[0];
  });
  std::vector<Level> out;
  for (int c : idx)
    for (const Level& l : per_cluster[c]) out.push_back(l);
  for (size_t i = 0; i < out.size(); ++i) out[i].order = static_cast<int>(i);
  return out;
}

Decomposition decompose_instance(const Instance& instance, const DecomposeOptions& opts) {
  Decomposition d;
  d.agent_count = instance.agent_count();

  auto t0 = Clock::now();
  d.graph = build_connectivity_graph(instance);
  d.initial_clusters = initial_clusters(instance, d.graph, opts);
  std::vector<int> sizes1;
  size_t max1 = 0;
  for (const Cluster& c : d.initial_clusters) max1 = std::max(max1, c.agents.size());
  d.steps[0] = StepStats{static_cast<double>(max1) / d.agent_count,
                         static_cast<int>(d.initial_clusters.size()), ms_since(t0)};

  auto t1 = Clock::now();
  std::vector<std::vector<Cluster>> emitted(d.initial_clusters.size());
  parallel_for(static_cast<int>(d.initial_clusters.size()), opts.threads, [&](int c) {
    std::vector<int> rest = d.initial_clusters[c].agents;
    while (!rest.empty()) {
      auto [major, remain] = bipartition(rest, d.graph, opts);
      emitted[c].push_back(Cluster{std::move(major)});
      rest = std::move(remain);
    }
  });
  for (auto& list : emitted)
    for (Cluster& c : list) d.clusters.push_back(std::move(c));
  std::sort(d.clusters.begin(), d.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.agents[0] < b.agents[0]; });
  size_t max2 = 0;
  for (const Cluster& c : d.clusters) max2 = std::max(max2, c.agents.size());
  d.steps[1] = StepStats{static_cast<double>(max2) / d.agent_count,
                         static_cast<int>(d.clusters.size()), ms_since(t1)};

  auto t2 = Clock::now();
  d.cluster_levels.resize(d.clusters.size());
  parallel_for(static_cast<int>(d.clusters.size()), opts.threads, [&](int c) {
    d.cluster_levels[c] = decompose_to_levels(d.clusters[c].agents, d.graph, opts);
  });
  d.levels = solve_order(d.cluster_levels);
  size_t max3 = 0;
  for (const Level& l : d.levels) max3 = std::max(max3, l.agents.size());
  d.steps[2] = StepStats{static_cast<double>(max3) / d.agent_count,
                         static_cast<int>(d.levels.size()), ms_since(t2)};
  return d;
}

void write_decomposition_report(const Decomposition& d, std::ostream& out) {
  for (int s = 0; s < 3; ++s)
    out << "step " << (s + 1) << ": rate=" << d.steps[s].rate
        << " subproblems=" << d.steps[s].subproblems << '\n';
  for (const Level& l : d.levels) {
    out << l.order << ": [";
    for (size_t i = 0; i < l.agents.size(); ++i) {
      if (i) out << ' ';
      out << l.agents[i];
    }
    out << "]\n";
  }
}

bool decomposition_preserves_solvability(const Instance& instance,
                                         const Decomposition& d) {
  const GridMap& map = instance.map;
  const size_t n = d.levels.size();
  for (size_t i = 0; i < n; ++i) {
    std::vector<uint8_t> blocked(map.cell_count(), 0);
    for (size_t j = 0; j < n; ++j) {
      if (j < i)
        for (int a : d.levels[j].agents)
          blocked[map.index_of(instance.tasks[a].target)] = 1;
      else if (j > i)
        for (int a : d.levels[j].agents)
          blocked[map.index_of(instance.tasks[a].start)] = 1;
    }
    for (int a : d.levels[i].agents) {
      const AgentTask& t = instance.tasks[a];
      if (bfs_distance(map, map.index_of(t.start), map.index_of(t.target), &blocked) < 0)
        return false;
    }
  }
  return true;
}

}  // namespace lamapf
