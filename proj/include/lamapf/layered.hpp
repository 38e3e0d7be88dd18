#pragma once

#include <functional>
#include <optional>

#include "lamapf/decompose.hpp"
#include "lamapf/solvers.hpp"

namespace lamapf {

enum class SolverKind { Serial, Parallel };

// Serial solvers accept external paths as dynamic obstacles; parallel solvers
// solve each level in isolation and rely on merge_results.
using SerialSolverFn =
    std::function<SolveResult(const GridMap&, const std::vector<AgentTask>&,
                              const ExternalConstraint&, std::span<const int>, Deadline)>;
using ParallelSolverFn = std::function<SolveResult(
    const GridMap&, const std::vector<AgentTask>&, std::span<const int>, Deadline)>;

struct LayeredOptions {
  DecomposeOptions decompose{};
  SerialSolverFn serial = serial_solve;
  ParallelSolverFn parallel = parallel_solve;
};

struct LayeredOutcome {
  std::optional<Solution> solution;
  Decomposition decomposition;
  std::vector<double> per_level_ms;
  std::optional<int> failure_level;  // present iff solution absent
  bool timed_out = false;
  bool validation_failed = false;  // post-merge validator hit (hard failure)
  double decomposition_ms = 0.0;
  double merge_ms = 0.0;
  double total_ms = 0.0;
};

// Decomposes the instance and solves its levels in order. Serial kind: later
// levels' start cells become unpassable and accumulated paths are passed as
// external constraints; the final solution is their union. Parallel kind:
// earlier levels' target cells and later levels' start cells become
// unpassable, levels solve in isolation, and merge_results inserts waits.
// Decomposition time is charged against the deadline. The instance must pass
// is_instance_solvable.
LayeredOutcome layered_solve(const Instance& instance, SolverKind kind,
                             Deadline deadline, const LayeredOptions& opts = {});

// Wait-insertion merge over solutions listed in level-solve order, each
// internally conflict-free and produced under the parallel blocking rule.
// A per-cell last-occupied-time table delays every unfinished path of a
// solution in lockstep until its next cell is clear of all earlier-order
// traffic; the returned solutions' union is conflict-free.
std::vector<Solution> merge_results(std::vector<Solution> solutions);

}  // namespace lamapf
