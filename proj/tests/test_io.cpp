#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <limits>

#include "helpers.hpp"
#include "marchetype/io.hpp"
#include "marchetype/mps.hpp"

using namespace marchetype;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_matrix(const SparseMatrix& a, const SparseMatrix& b) {
  return a.n_rows == b.n_rows && a.n_cols == b.n_cols && a.row_offsets == b.row_offsets &&
         a.col_indices == b.col_indices && a.values == b.values;
}

}  // namespace

TEST_CASE("matrix JSON round trip is exact") {
  SparseMatrix a = testutil::random_sparse(9, 14, 60, 123);
  SparseMatrix b = matrix_from_json(matrix_to_json(a));
  CHECK(same_matrix(a, b));
}

TEST_CASE("instance JSON round trip is exact") {
  auto c = testutil::random_small_case(5);
  TargetingInstance back = instance_from_json(instance_to_json(c.instance));
  CHECK(back.n_customers == c.instance.n_customers);
  CHECK(back.profits == c.instance.profits);
  CHECK(back.constraint_segment_of == c.instance.constraint_segment_of);
  CHECK(back.action_segment_of == c.instance.action_segment_of);
  CHECK(back.max_actions == c.instance.max_actions);
  CHECK(back.segment_sizes == c.instance.segment_sizes);
}

TEST_CASE("menu JSON round trip keeps infinities and weights") {
  auto c = testutil::random_small_case(6);
  ConstraintMenu back = menu_from_json(menu_to_json(c.menu));
  REQUIRE(back.volume1.has_value());
  CHECK(back.volume1->size() == c.menu.volume1->size());
  for (std::size_t i = 0; i < back.volume1->size(); ++i) {
    CHECK((*back.volume1)[i].lower == (*c.menu.volume1)[i].lower);
    CHECK((*back.volume1)[i].upper == (*c.menu.volume1)[i].upper);
  }
  REQUIRE(back.volume2.has_value());
  CHECK(back.volume2->lower == c.menu.volume2->lower);
  for (double u : back.volume2->upper) CHECK(u == kInf);
  CHECK(back.volume2->weights == c.menu.volume2->weights);
  CHECK(back.similarity1.has_value() == c.menu.similarity1.has_value());
  if (back.similarity2.has_value()) {
    CHECK(back.similarity2->weights == c.menu.similarity2->weights);
    CHECK(back.similarity2->pairs.size() == c.menu.similarity2->pairs.size());
  }
  CHECK(back.targeting_enabled == c.menu.targeting_enabled);
}

TEST_CASE("menu JSON encodes infinity as a string") {
  auto c = testutil::random_small_case(7);
  std::string text = menu_to_json(c.menu);
  CHECK(text.find("\"inf\"") != std::string::npos);
}

TEST_CASE("empty menu serializes with explicit nulls") {
  ConstraintMenu menu;
  std::string text = menu_to_json(menu);
  ConstraintMenu back = menu_from_json(text);
  CHECK_FALSE(back.volume1.has_value());
  CHECK_FALSE(back.volume2.has_value());
  CHECK_FALSE(back.similarity1.has_value());
  CHECK_FALSE(back.similarity2.has_value());
  CHECK(back.targeting_enabled);
}

TEST_CASE("hierarchy JSON round trip") {
  GenConfig cfg;
  cfg.branching = {2, 3};
  SegmentHierarchy h = make_hierarchy(cfg);
  SegmentHierarchy back = hierarchy_from_json(hierarchy_to_json(h));
  CHECK(back.zip_depth == h.zip_depth);
  CHECK(back.n_leaves == h.n_leaves);
  CHECK(back.leaf_paths == h.leaf_paths);
}

TEST_CASE("LP JSON round trip keeps labels") {
  auto c = testutil::random_small_case(8);
  StandardLP lp = compile_ipwc(c.instance, c.menu);
  StandardLP back = lp_from_json(lp_to_json(lp));
  CHECK(same_matrix(lp.constraints, back.constraints));
  CHECK(lp.objective == back.objective);
  CHECK(lp.rhs == back.rhs);
  REQUIRE(lp.column_labels.size() == back.column_labels.size());
  for (std::size_t w = 0; w < lp.column_labels.size(); ++w) {
    CHECK(lp.column_labels[w].kind == back.column_labels[w].kind);
    CHECK(lp.column_labels[w].owner == back.column_labels[w].owner);
    CHECK(lp.column_labels[w].action == back.column_labels[w].action);
  }
}

TEST_CASE("identical payloads serialize to identical bytes") {
  auto c = testutil::random_small_case(9);
  CHECK(instance_to_json(c.instance) == instance_to_json(c.instance));
  StandardLP lp = compile_ipwc(c.instance, c.menu);
  CHECK(lp_to_json(lp) == lp_to_json(lp));
}

TEST_CASE("MPS export re-reads losslessly") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    auto c = testutil::random_small_case(seed, 20, 2);
    StandardLP lp = compile_ipwc(c.instance, c.menu);
    StandardLP back = read_mps(write_mps(lp));
    CHECK(same_matrix(lp.constraints, back.constraints));
    CHECK(lp.objective == back.objective);
    CHECK(lp.rhs == back.rhs);
  }
}

TEST_CASE("MPS reader folds G and E rows into the one-sided form") {
  std::string text =
      "NAME T\n"
      "ROWS\n"
      " N COST\n"
      " L C1\n"
      " G C2\n"
      " E C3\n"
      "COLUMNS\n"
      " X1 COST -1 C1 2\n"
      " X1 C2 1 C3 1\n"
      " X2 COST 0.5 C3 -1\n"
      "RHS\n"
      " RHS C1 4 C2 0.25\n"
      " RHS C3 0.125\n"
      "BOUNDS\n"
      " UP BND X1 1\n"
      " LO BND X1 0\n"
      " UP BND X2 1\n"
      " LO BND X2 0\n"
      "ENDATA\n";
  StandardLP lp = read_mps(text);
  CHECK(lp.n_vars() == 2);
  CHECK(lp.n_rows() == 4);  // L + G + (E as two rows)
  CHECK(lp.objective == DenseVector{-1.0, 0.5});
  // G row negated
  CHECK(lp.rhs[1] == -0.25);
  // E row expanded to <= and negated <=
  CHECK(lp.rhs[2] == 0.125);
  CHECK(lp.rhs[3] == -0.125);
}

TEST_CASE("MPS reader rejects what the format does not carry here") {
  CHECK_THROWS_AS(read_mps("NAME X\nROWS\n N OBJ\nCOLUMNS\n"), std::invalid_argument);  // no ENDATA
  CHECK_THROWS_AS(read_mps("NAME X\nROWS\n R R1\nENDATA\n"), std::invalid_argument);
  std::string ranged =
      "NAME X\nROWS\n N OBJ\n L C1\nCOLUMNS\n X1 C1 1\nRANGES\n RNG C1 2\nENDATA\n";
  CHECK_THROWS_AS(read_mps(ranged), std::invalid_argument);
}

TEST_CASE("solution JSON carries no timing") {
  SolveReport r;
  r.status = SolveStatus::optimal;
  r.objective = -5.0;
  r.primal = {1.0};
  r.dual = {5.0};
  r.iterations = 12;
  r.restarts = 2;
  r.wall_seconds = 123.456;
  std::string text = report_to_json(r);
  CHECK(text.find("123.456") == std::string::npos);
  CHECK(text.find("\"status\":\"optimal\"") != std::string::npos);
}

TEST_CASE("trace CSV has the pinned header") {
  std::vector<TraceRow> trace(1);
  trace[0].total_iter = 3;
  trace[0].rho = 0.5;
  std::string csv = trace_to_csv(trace);
  CHECK(csv.rfind("total_iter,outer,inner,primal_res,dual_res,rel_gap,rho,objective,elapsed_s\n",
                  0) == 0);
}

TEST_CASE("atomic write leaves no temp file behind") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "marchetype_io_test";
  fs::create_directories(dir);
  fs::path target = dir / "payload.json";
  write_text_atomic(target.string(), "{\"a\":1}");
  CHECK(read_text(target.string()) == "{\"a\":1}");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.command = "gen";
  m.argv = {"gen", "--customers", "10", "--out", "d"};
  m.inputs = {};
  m.outputs = {"d/instance.json"};
  m.seed = 7;
  m.tool_version = "0.1.0";
  m.started_at = "2026-01-01T00:00:00Z";
  m.finished_at = "2026-01-01T00:00:01Z";
  RunManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.command == m.command);
  CHECK(back.argv == m.argv);
  CHECK(back.outputs == m.outputs);
  CHECK(back.seed == m.seed);
}

TEST_CASE("missing files raise a usage-style error") {
  CHECK_THROWS_AS(read_text("/nonexistent/marchetype/file.json"), std::invalid_argument);
}
