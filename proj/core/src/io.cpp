#include "marchetype/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace marchetype {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json bound_to_json(double v) {
  if (v == kInf) return json("inf");
  if (v == -kInf) return json("-inf");
  return json(v);
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("bound string must be 'inf' or '-inf', got '" + s + "'");
  }
  return j.get<double>();
}

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::customer_action: return "customer";
    case VarKind::segment_action: return "segment";
    case VarKind::single_action: return "single";
    case VarKind::pair_action: return "pair";
    case VarKind::aux_action: return "aux";
  }
  return "customer";
}

VarKind kind_from_name(const std::string& s) {
  if (s == "customer") return VarKind::customer_action;
  if (s == "segment") return VarKind::segment_action;
  if (s == "single") return VarKind::single_action;
  if (s == "pair") return VarKind::pair_action;
  if (s == "aux") return VarKind::aux_action;
  throw std::invalid_argument("unknown column kind '" + s + "'");
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument(std::string(what) + ": malformed JSON");
  }
  return j;
}

// %.17g round-trips IEEE doubles exactly through strtod.
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string matrix_to_json(const SparseMatrix& m) {
  json entries = json::array();
  for (Index r = 0; r < m.n_rows; ++r) {
    for (Index k = m.row_offsets[static_cast<std::size_t>(r)];
         k < m.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      entries.push_back(json::array({r, m.col_indices[static_cast<std::size_t>(k)],
                                     m.values[static_cast<std::size_t>(k)]}));
    }
  }
  json j;
  j["n_rows"] = m.n_rows;
  j["n_cols"] = m.n_cols;
  j["entries"] = std::move(entries);
  return j.dump();
}

namespace {

SparseMatrix matrix_from_json_value(const json& j) {
  std::vector<Triplet> triplets;
  for (const json& e : j.at("entries")) {
    triplets.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>()});
  }
  return csr_from_triplets(j.at("n_rows").get<Index>(), j.at("n_cols").get<Index>(),
                           std::move(triplets));
}

}  // namespace

SparseMatrix matrix_from_json(const std::string& text) {
  return matrix_from_json_value(parse(text, "matrix"));
}

std::string instance_to_json(const TargetingInstance& instance) {
  json profits = json::array();
  for (Index i = 0; i < instance.n_customers; ++i) {
    json row = json::array();
    for (Index j = 0; j < instance.n_actions; ++j) row.push_back(instance.profit(i, j));
    profits.push_back(std::move(row));
  }
  json j;
  j["n_customers"] = instance.n_customers;
  j["n_actions"] = instance.n_actions;
  j["profits"] = std::move(profits);
  j["constraint_segment"] = instance.constraint_segment_of;
  j["action_segment"] = instance.action_segment_of;
  j["max_actions"] = instance.max_actions;
  return j.dump();
}

TargetingInstance instance_from_json(const std::string& text) {
  json j = parse(text, "instance");
  TargetingInstance inst;
  inst.n_customers = j.at("n_customers").get<Index>();
  inst.n_actions = j.at("n_actions").get<Index>();
  inst.profits.reserve(static_cast<std::size_t>(inst.n_customers * inst.n_actions));
  for (const json& row : j.at("profits")) {
    for (const json& v : row) inst.profits.push_back(v.get<double>());
  }
  inst.constraint_segment_of = j.at("constraint_segment").get<std::vector<Index>>();
  inst.action_segment_of = j.at("action_segment").get<std::vector<Index>>();
  inst.max_actions = j.at("max_actions").get<std::vector<Index>>();
  inst.recompute_segment_sizes();
  inst.validate();
  return inst;
}

std::string menu_to_json(const ConstraintMenu& menu) {
  json j;
  if (menu.volume1) {
    json rows = json::array();
    for (const VolumeIEntry& e : *menu.volume1) {
      rows.push_back(json::array({e.segment, e.action, e.lower, e.upper}));
    }
    j["volume1"] = std::move(rows);
  } else {
    j["volume1"] = nullptr;
  }
  if (menu.volume2) {
    json v2;
    json lower = json::array(), upper = json::array();
    for (double v : menu.volume2->lower) lower.push_back(bound_to_json(v));
    for (double v : menu.volume2->upper) upper.push_back(bound_to_json(v));
    v2["lower"] = std::move(lower);
    v2["upper"] = std::move(upper);
    v2["weights"] = menu.volume2->weights;
    j["volume2"] = std::move(v2);
  } else {
    j["volume2"] = nullptr;
  }
  if (menu.similarity1) {
    json rows = json::array();
    for (const SimilarityIEntry& e : *menu.similarity1) {
      rows.push_back(json::array({e.action, e.seg_a, e.seg_b, e.ratio, e.offset}));
    }
    j["similarity1"] = std::move(rows);
  } else {
    j["similarity1"] = nullptr;
  }
  if (menu.similarity2) {
    json s2;
    json pairs = json::array();
    for (const SimilarityIIPair& e : menu.similarity2->pairs) {
      pairs.push_back(json::array({e.seg_a, e.seg_b, e.ratio, e.offset}));
    }
    s2["pairs"] = std::move(pairs);
    s2["weights"] = menu.similarity2->weights;
    j["similarity2"] = std::move(s2);
  } else {
    j["similarity2"] = nullptr;
  }
  j["targeting_enabled"] = menu.targeting_enabled;
  return j.dump();
}

ConstraintMenu menu_from_json(const std::string& text) {
  json j = parse(text, "menu");
  ConstraintMenu menu;
  if (j.contains("volume1") && !j.at("volume1").is_null()) {
    std::vector<VolumeIEntry> rows;
    for (const json& e : j.at("volume1")) {
      rows.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>(),
                      e.at(3).get<double>()});
    }
    menu.volume1 = std::move(rows);
  }
  if (j.contains("volume2") && !j.at("volume2").is_null()) {
    VolumeII v2;
    for (const json& v : j.at("volume2").at("lower")) v2.lower.push_back(bound_from_json(v));
    for (const json& v : j.at("volume2").at("upper")) v2.upper.push_back(bound_from_json(v));
    v2.weights = j.at("volume2").at("weights").get<std::vector<double>>();
    menu.volume2 = std::move(v2);
  }
  if (j.contains("similarity1") && !j.at("similarity1").is_null()) {
    std::vector<SimilarityIEntry> rows;
    for (const json& e : j.at("similarity1")) {
      rows.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<Index>(),
                      e.at(3).get<double>(), e.at(4).get<double>()});
    }
    menu.similarity1 = std::move(rows);
  }
  if (j.contains("similarity2") && !j.at("similarity2").is_null()) {
    SimilarityII s2;
    for (const json& e : j.at("similarity2").at("pairs")) {
      s2.pairs.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>(),
                          e.at(3).get<double>()});
    }
    s2.weights = j.at("similarity2").at("weights").get<std::vector<double>>();
    menu.similarity2 = std::move(s2);
  }
  menu.targeting_enabled = j.value("targeting_enabled", true);
  return menu;
}

std::string hierarchy_to_json(const SegmentHierarchy& hierarchy) {
  json j;
  j["zip_depth"] = hierarchy.zip_depth;
  j["branching"] = hierarchy.branching;
  j["leaf_paths"] = hierarchy.leaf_paths;
  return j.dump();
}

SegmentHierarchy hierarchy_from_json(const std::string& text) {
  json j = parse(text, "hierarchy");
  SegmentHierarchy h;
  h.zip_depth = j.at("zip_depth").get<int>();
  h.branching = j.at("branching").get<std::vector<Index>>();
  h.leaf_paths = j.at("leaf_paths").get<std::vector<std::vector<Index>>>();
  h.n_leaves = static_cast<Index>(h.leaf_paths.size());
  return h;
}

std::string lp_to_json(const StandardLP& lp) {
  json j = parse(matrix_to_json(lp.constraints), "matrix");
  j["objective"] = lp.objective;
  j["rhs"] = lp.rhs;
  json labels = json::array();
  for (const ColumnLabel& l : lp.column_labels) {
    labels.push_back(json::array({kind_name(l.kind), l.owner, l.action, l.action2}));
  }
  j["labels"] = std::move(labels);
  return j.dump();
}

StandardLP lp_from_json(const std::string& text) {
  json j = parse(text, "lp");
  StandardLP lp;
  lp.constraints = matrix_from_json_value(j);
  lp.objective = j.at("objective").get<DenseVector>();
  lp.rhs = j.at("rhs").get<DenseVector>();
  if (j.contains("labels") && !j.at("labels").is_null()) {
    for (const json& e : j.at("labels")) {
      lp.column_labels.push_back({kind_from_name(e.at(0).get<std::string>()), e.at(1).get<Index>(),
                                  e.at(2).get<Index>(), e.at(3).get<Index>()});
    }
  }
  lp.validate();
  return lp;
}

std::string report_to_json(const SolveReport& report) {
  json j;
  j["status"] = to_string(report.status);
  j["objective"] = report.objective;
  j["primal"] = report.primal;
  j["dual"] = report.dual;
  j["iterations"] = report.iterations;
  j["restarts"] = report.restarts;
  j["primal_residual"] = report.primal_residual;
  j["dual_residual"] = report.dual_residual;
  j["relative_gap"] = report.relative_gap;
  return j.dump();
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "total_iter,outer,inner,primal_res,dual_res,rel_gap,rho,objective,elapsed_s\n";
  for (const TraceRow& r : trace) {
    out << r.total_iter << ',' << r.outer << ',' << r.inner << ','
        << format_double(r.primal_residual) << ',' << format_double(r.dual_residual) << ','
        << format_double(r.relative_gap) << ',' << format_double(r.rho) << ','
        << format_double(r.objective) << ',' << format_double(r.elapsed_seconds) << '\n';
  }
  return out.str();
}

std::string toy_trajectory_to_csv(const std::vector<ToyPoint>& trajectory) {
  std::ostringstream out;
  out << "iter,x_avg,y_avg\n";
  for (const ToyPoint& p : trajectory) {
    out << p.iteration << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
  return out.str();
}

std::string manifest_to_json(const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json j = parse(text, "manifest");
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.inputs = j.at("inputs").get<std::vector<std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  return m;
}

}  // namespace marchetype
