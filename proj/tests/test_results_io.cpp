#include "pbo/results_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pbo;

namespace {

std::vector<ResultRow> sample_rows(Index dim) {
  std::vector<ResultRow> rows;
  for (int i = 0; i < 3; ++i) {
    ResultRow r;
    r.replicate = i / 2;
    r.iter = i;
    r.policy = "dts";
    r.fn = dim == 1 ? "forrester" : "levy";
    r.winner = Vector::LinSpaced(dim, 0.1 * i, 1.0 / 3.0 + i);
    r.g_winner = -6.020740055 + 1e-17 * i + 0.1 / 3.0;
    r.wall_ms = 0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("empty record list gives a header-only CSV") {
  std::ostringstream out;
  write_csv(out, {}, 1);
  CHECK(out.str() == "replicate,iter,policy,fn,x_c_0,g_xc,wall_ms\n");
}

TEST_CASE("2-D schema expands the winner columns") {
  std::ostringstream out;
  write_csv(out, sample_rows(2), 2);
  CHECK(out.str().rfind("replicate,iter,policy,fn,x_c_0,x_c_1,g_xc,wall_ms\n", 0) == 0);
}

TEST_CASE("CSV and JSON round trip exactly") {
  for (const Index dim : {1, 2}) {
    const auto rows = sample_rows(dim);
    std::stringstream csv, json;
    write_csv(csv, rows, dim);
    write_json(json, rows, dim);
    CHECK(read_csv(csv) == rows);
    CHECK(read_json(json) == rows);
  }
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-6.0) == "-6");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("files use LF line endings and unwritable paths fail") {
  const auto dir = std::filesystem::temp_directory_path() / "pbo_results_io_test";
  std::filesystem::create_directories(dir);
  ExperimentRecord rec;
  rec.iter = 0;
  rec.winner = Vector::Constant(1, 0.75);
  rec.g_winner = -5.99;
  const auto path = dir / "out.csv";
  write_results({rec}, Policy::random, BenchmarkId::forrester, path, ResultFormat::csv);
  std::ifstream in(path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text == "replicate,iter,policy,fn,x_c_0,g_xc,wall_ms\n0,0,random,forrester,0.75,-5.99,0\n");
  const auto rows = read_results(path, ResultFormat::csv);
  CHECK(rows.size() == 1);

  const auto json_path = dir / "out.json";
  write_results({rec}, Policy::random, BenchmarkId::forrester, json_path, ResultFormat::json);
  CHECK(read_results(json_path, ResultFormat::json) == rows);

  try {
    write_results({rec}, Policy::random, BenchmarkId::forrester, dir / "missing" / "x.csv", ResultFormat::csv);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed input is reported") {
  std::istringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_csv(bad_header), Error);
  std::istringstream bad_row("replicate,iter,policy,fn,x_c_0,g_xc,wall_ms\n0,0,dts,forrester,x,1,0\n");
  CHECK_THROWS_AS(read_csv(bad_row), Error);
  std::istringstream bad_json("{");
  CHECK_THROWS_AS(read_json(bad_json), Error);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("summary CSV") {
  std::ostringstream out;
  write_summary_csv(out, {{0, 2, -1.5, -1.25}});
  CHECK(out.str() == "iter,count,median,mean\n0,2,-1.5,-1.25\n");
}
