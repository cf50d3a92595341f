#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "critzero/report.hpp"
#include "critzero/rng.hpp"

using namespace critzero;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "critzero_report_test";
  fs::create_directories(dir);
  return dir / name;
}

ReportFile sample_report() {
  ReportFile r;
  r.kind = "radial";
  r.config = {{"N", 20}, {"M", 3}, {"seed", 7}, {"bins", 80}};
  r.columns = {"trial", "re", "im"};
  CounterRng rng({900, 0});
  for (int i = 0; i < 50; ++i) r.rows.push_back({double(i), rng.normal(), rng.normal() * 1e-300});
  r.rows.push_back({1.0, std::numeric_limits<double>::denorm_min(), -0.0});
  r.rows.push_back({2.0, 0.1, 1.0 / 3.0});
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << s;
}

}  // namespace

TEST(Report, RoundTrip) {
  const auto r = sample_report();
  const auto p = temp_path("round.csv");
  write_report(r, p);
  const auto back = read_report(p);
  EXPECT_EQ(back, r);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (std::size_t j = 0; j < r.rows[i].size(); ++j) {
      EXPECT_EQ(std::signbit(back.rows[i][j]), std::signbit(r.rows[i][j]));
    }
  }
}

TEST(Report, ByteIdenticalRewrite) {
  const auto p = temp_path("a.csv"), q = temp_path("b.csv");
  write_report(sample_report(), p);
  write_report(read_report(p), q);
  EXPECT_EQ(slurp(p), slurp(q));
}

TEST(Report, HeaderLayout) {
  const auto text = render_report(sample_report());
  EXPECT_EQ(text.rfind("# {\"schema_version\":1,\"kind\":\"radial\"", 0), 0u);
  EXPECT_NE(text.find("\ntrial,re,im\n"), std::string::npos);
  EXPECT_NE(text.find("\n2,0.10000000000000001,0.33333333333333331\n"), std::string::npos);
}

TEST(Report, EmptyPayloadRoundTrip) {
  ReportFile r;
  r.kind = "special";
  r.columns = {"re", "im"};
  EXPECT_EQ(parse_report(render_report(r)), r);
}

TEST(Report, TruncatedFileRejected) {
  const auto text = render_report(sample_report());
  // Cut mid-row and at a row boundary.
  for (const std::size_t cut : {text.size() - 5, text.rfind('\n', text.size() - 2) + 1}) {
    try {
      (void)parse_report(text.substr(0, cut));
      FAIL() << cut;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.code(), ErrorCode::parse);
      EXPECT_GT(e.line(), 2u);
    }
  }
}

TEST(Report, VersionMismatch) {
  auto text = render_report(sample_report());
  text.replace(text.find("\"schema_version\":1"), 18, "\"schema_version\":2");
  try {
    (void)parse_report(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::version);
  }
}

TEST(Report, BadNumberLocated) {
  auto text = render_report(sample_report());
  // Row with trial index 2 is the fifth line.
  text.replace(text.find("\n2,") + 1, 1, "x");
  try {
    (void)parse_report(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Report, BadCellColumn) {
  const std::string text =
      "# {\"schema_version\":1,\"kind\":\"k\",\"config\":{},\"columns\":[\"a\",\"b\"],\"rows\":1}\na,b\n1.5,2e\n";
  try {
    (void)parse_report(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 3, column 5"), std::string::npos);
  }
}

TEST(Report, MalformedMetadata) {
  EXPECT_THROW((void)parse_report("no header\n"), ParseError);
  EXPECT_THROW((void)parse_report("# {oops\na\n"), ParseError);
  EXPECT_THROW((void)parse_report("# {\"schema_version\":1}\na\n"), ParseError);
  EXPECT_THROW((void)parse_report(""), ParseError);
  EXPECT_THROW(
      (void)parse_report("# {\"schema_version\":1,\"kind\":\"k\",\"config\":{},\"columns\":[\"a\"],\"rows\":0}\nb\n"),
      ParseError);
}

TEST(Report, RaggedRowsRejectedOnWrite) {
  ReportFile r;
  r.columns = {"a", "b"};
  r.rows = {{1.0}};
  EXPECT_THROW((void)render_report(r), Error);
}

TEST(Report, MissingFileIsIoError) {
  try {
    (void)read_report(temp_path("does_not_exist.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
  }
}

TEST(Report, WriteJson) {
  const auto p = temp_path("s.json");
  ordered_json j;
  j["z"] = 1;
  j["a"] = 0.1;
  write_json(j, p);
  EXPECT_EQ(slurp(p), "{\n  \"z\": 1,\n  \"a\": 0.1\n}\n");
}

TEST(Report, HistogramTable) {
  Histogram h{{0.0, 0.5, 1.0}, {1.2, 0.8}};
  const auto r = histogram_report("hist", {{"N", 20}}, h);
  EXPECT_EQ(r.columns, (std::vector<std::string>{"left_edge", "right_edge", "density"}));
  EXPECT_EQ(r.rows[1], (std::vector<double>{0.5, 1.0, 0.8}));
  spit(temp_path("h.csv"), render_report(r));
  EXPECT_EQ(read_report(temp_path("h.csv")), r);
}
