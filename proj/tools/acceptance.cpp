// Runs the twelve acceptance criteria and prints one PASS/FAIL line for each.
// Failing checks are listed under their criterion. Exit code 1 if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>

#include "coxtorus/pipeline.hpp"

#ifndef COXTORUS_TEST_BIN_DIR
#define COXTORUS_TEST_BIN_DIR "tests"
#endif

using namespace coxtorus;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds
  std::function<Report(const RunConfig&)> run;
};

Report anchors_21(const RunConfig& cfg) {
  Report r;
  const auto t = hilbert_weight_table({2, 1}, load_fixed_point_data(cfg.data), kDefaultEll, 130);
  const std::vector<std::pair<Weight, long>> anchors{{{0, 16}, 1}, {{1, 11}, 1}, {{5, 5}, 1}, {{6, 10}, 5},
                                                     {{10, 2}, 1}, {{20, 0}, 1}, {{26, 22}, 50}};
  for (const auto& [w, want] : anchors) {
    auto it = t.find(w);
    const long got = it == t.end() ? 0 : it->second.get_si();
    r.add("lrr", "anchor " + w2s(w), got == want, std::to_string(got));
  }
  return r;
}

Report property_suites(const RunConfig&) {
  Report r;
  const std::vector<std::pair<std::string, std::string>> suites{
      {"test_exactmath", "ExactmathProperty.*"},
      {"test_latgeom", "LatgeomProperty.*"},
      {"test_polylaurent", "PolylaurentProperty.*"},
      {"test_equivariant", "*Property*"},
      {"test_coxoracle", "*Property*"},
  };
  for (const auto& [bin, filter] : suites) {
    const std::string cmd = std::string(COXTORUS_TEST_BIN_DIR) + "/" + bin + " --gtest_filter='" + filter + "' > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    r.add("properties", bin + " " + filter, rc == 0, rc == 0 ? "" : "exit status " + std::to_string(rc));
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (argc > 1) cfg.data = argv[1];

  auto both = [](auto f, auto g) { return [f, g](const RunConfig& c) {
    Report r = f(c);
    r.merge(g(c));
    return r;
  }; };

  const std::vector<Criterion> crits{
      {1, "group suite", 1, group_pipeline},
      {2, "degree matrix and semi-invariance", 5, degree_pipeline},
      {3, "central fibre", 30, central_fibre_pipeline},
      {4, "semistability, products and base loci", 5, semistability_pipeline},
      {5, "compasses and weight hull", 10, compass_pipeline},
      {6, "component weight tables", 10, component_table_pipeline},
      {7, "Lefschetz-Riemann-Roch series for 2L1+L2", 30,
       both([](const RunConfig& c) { return euler_pipeline(c).report; }, anchors_21)},
      {8, "walls", 1, walls_pipeline},
      {9, "charts", 120, charts_pipeline},
      {10, "regularity closure", 1, regularity_pipeline},
      {11, "Cox ring equals the sections on S", 1800, [](const RunConfig& c) { return verdict_pipeline(c).report; }},
      {12, "property suites", 120, property_suites},
  };

  int failed = 0;
  for (const auto& c : crits) {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = c.run(cfg);
    } catch (const std::exception& e) {
      r.add("error", "criterion aborted", false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget;
    const bool pass = r.ok() && in_time && !r.checks.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " " << std::setw(2) << c.id << " " << c.title << " (" << r.checks.size()
              << " checks, " << r.failures() << " failed, " << std::fixed << std::setprecision(2) << secs << " s of "
              << std::setprecision(0) << c.budget << " s)\n";
    for (const auto& k : r.checks)
      if (!k.pass) std::cout << "       - [" << k.tag << "] " << k.name << (k.detail.empty() ? "" : ": " + k.detail) << "\n";
    if (!in_time) std::cout << "       - over the time budget\n";
    std::cout.flush();
  }
  return failed ? 1 : 0;
}
