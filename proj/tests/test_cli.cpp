#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>

#include "coxtorus/pipeline.hpp"

using namespace coxtorus;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(COXTORUS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// A private copy of the seed data that a test may corrupt.
std::filesystem::path data_copy(const std::string& tag) {
  const auto d = std::filesystem::temp_directory_path() / ("coxtorus_cli_" + tag);
  std::filesystem::remove_all(d);
  std::filesystem::copy(default_data_dir(), d, std::filesystem::copy_options::recursive);
  return d;
}

void replace_line(const std::filesystem::path& f, const std::string& prefix, const std::string& line) {
  std::ifstream in(f);
  std::string all, l;
  while (std::getline(in, l)) all += (l.rfind(prefix, 0) == 0 ? line : l) + "\n";
  in.close();
  std::ofstream(f) << all;
}

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Emit, EmptyJson) { EXPECT_EQ(emit_report(Outcome{}, Format::json), "{\"checks\":[]}\n"); }

TEST(Emit, OnePassingCheck) {
  Outcome o;
  o.report.add("group", "order", true, "24");
  EXPECT_EQ(emit_report(o, Format::text), "PASS [group] order: 24\n");
  EXPECT_EQ(emit_report(o, Format::csv), "status,tag,name,detail\nPASS,group,order,24\n");
  EXPECT_EQ(emit_report(o, Format::json), "{\"checks\":[{\"tag\":\"group\",\"name\":\"order\",\"pass\":true,\"detail\":\"24\"}]}\n");
}

TEST(Emit, CsvQuoting) { EXPECT_EQ(csv_field("a,b"), "\"a,b\""); EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\""); }

TEST(Emit, TableCsvIsSorted) {
  Outcome o;
  o.table = DimensionTable{{{2, 0}, 1}, {{0, 16}, 1}, {{10, 2}, 3}};
  EXPECT_EQ(emit_report(o, Format::csv), "0,16,1\n2,0,1\n10,2,3\n");
}

TEST(Emit, Grid) {
  const std::string g = table_grid({{{0, 1}, 1}, {{1, 0}, 12}});
  EXPECT_NE(g.find("   1 |  1  ."), std::string::npos) << g;
  EXPECT_NE(g.find("   0 |  . 12"), std::string::npos) << g;
}

TEST(Cli, Group) {
  const auto r = run("group");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, "PASS"), 7u);
  EXPECT_NE(r.out.find("order: 24"), std::string::npos);
}

TEST(Cli, EulerDiagram) {
  const auto r = run("euler --bundle 2,1 --bound 130 --format csv");
  EXPECT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string line;
  std::vector<Weight> keys;
  const std::regex row(R"((\d+),(\d+),(\d+))");
  bool anchor = false;
  while (std::getline(is, line)) {
    std::smatch m;
    ASSERT_TRUE(std::regex_match(line, m, row)) << line;
    keys.push_back({std::stol(m[1]), std::stol(m[2])});
    anchor |= line == "26,22,50";
  }
  EXPECT_TRUE(anchor);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(keys.size(), 694u);
}

TEST(Cli, OtherBundles) {
  EXPECT_EQ(run("euler --bundle 0,0 --bound 40").code, 0);
  EXPECT_EQ(run("euler --bundle 1,3 --bound 40").code, 0);
}

TEST(Cli, DegreeMatrixFaultNamesColumn) {
  const auto d = data_copy("fault");
  replace_line(d / "degree_matrix.txt", "tw2",
               "tw2    1   6   0   0   4   3   1   2   4   1   2   4   2   0   3   5   2   3  0  0");
  const auto r = run("oracle --data " + d.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL [degrees] column w14"), std::string::npos) << r.out;
  EXPECT_EQ(count(r.out, "FAIL [degrees] column"), 1u);
  std::filesystem::remove_all(d);
}

TEST(Cli, DataErrors) {
  const auto d = data_copy("bad");
  replace_line(d / "degree_matrix.txt", "tw1", "tw1    1   0   6   4   0   1   3   2   0   3   x   2   2   4   1   1   4   3  0  0");
  EXPECT_EQ(run("oracle --data " + d.string()).code, 2);
  std::filesystem::remove(d / "seeds.txt");
  EXPECT_EQ(run("coxring --data " + d.string()).code, 2);
  std::filesystem::remove_all(d);
  EXPECT_EQ(run("group --data /nonexistent/coxtorus").code, 2);
  EXPECT_EQ(run("group --bundle 2").code, 2);
  EXPECT_EQ(run("group --primes 1").code, 2);
  EXPECT_EQ(run("group --bound 0").code, 2);
  EXPECT_EQ(run("group --format xml").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, DeterministicOutput) {
  const auto a = run("coxring --bound 40 --seed 3 --format json --threads 1");
  const auto b = run("coxring --bound 40 --seed 3 --format json --threads 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("charts --seed 5").out, run("charts --seed 5").out);
}

TEST(Cli, OutFile) {
  const auto f = std::filesystem::temp_directory_path() / "coxtorus_walls.json";
  const auto r = run("walls --format json --out " + f.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(f);
  const std::string body((std::istreambuf_iterator<char>(in)), {});
  const auto j = nlohmann::json::parse(body);
  ASSERT_EQ(j["checks"].size(), 1u);
  EXPECT_TRUE(j["checks"][0]["pass"].get<bool>());
}

TEST(Cli, AllCollectsFailures) {
  const auto r = run("all");
  // the non-normal loci and chart 1's printed list are the known failures; later stages still run
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL [central-fibre/Z0] non-normal curves"), std::string::npos);
  EXPECT_NE(r.out.find("FAIL [charts/1] ambient invariants match the printed list"), std::string::npos);
  EXPECT_NE(r.out.find("PASS [walls]"), std::string::npos);
  EXPECT_NE(r.out.find("PASS [cox] L=(4,2) graded pieces reach the sections"), std::string::npos);
  EXPECT_EQ(count(r.out, "FAIL"), 4u);
}
