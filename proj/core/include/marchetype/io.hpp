#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "marchetype/datagen.hpp"
#include "marchetype/pdhg.hpp"
#include "marchetype/sparse.hpp"
#include "marchetype/targeting.hpp"
#include "marchetype/toy.hpp"

namespace marchetype {

// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// {"n_rows":int,"n_cols":int,"entries":[[row,col,value],...]}
std::string matrix_to_json(const SparseMatrix& m);
SparseMatrix matrix_from_json(const std::string& text);

// {"n_customers","n_actions","profits","constraint_segment","action_segment","max_actions"}
std::string instance_to_json(const TargetingInstance& instance);
TargetingInstance instance_from_json(const std::string& text);

// Mirrors the menu fields; infinities encode as the strings "inf"/"-inf".
std::string menu_to_json(const ConstraintMenu& menu);
ConstraintMenu menu_from_json(const std::string& text);

std::string hierarchy_to_json(const SegmentHierarchy& hierarchy);
SegmentHierarchy hierarchy_from_json(const std::string& text);

// Triplet matrix payload plus objective, rhs and column labels.
std::string lp_to_json(const StandardLP& lp);
StandardLP lp_from_json(const std::string& text);

// Solution payload: status, objective, primal, dual and the counters.
// Timing is deliberately not serialized so reruns are byte-identical.
std::string report_to_json(const SolveReport& report);

// Convergence log, one row per gap evaluation:
// total_iter,outer,inner,primal_res,dual_res,rel_gap,rho,objective,elapsed_s
std::string trace_to_csv(const std::vector<TraceRow>& trace);

std::string toy_trajectory_to_csv(const std::vector<ToyPoint>& trajectory);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;     // arguments after the program name
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

}  // namespace marchetype
