#pragma once

#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coxtorus/coxoracle.hpp"
#include "coxtorus/equivariant.hpp"
#include "coxtorus/fingroup.hpp"
#include "coxtorus/gitquot.hpp"
#include "coxtorus/report.hpp"
#include "coxtorus/seeddata.hpp"
#include "json.hpp"

namespace coxtorus {

enum class Format { text, csv, json };

struct RunConfig {
  std::filesystem::path data = default_data_dir();
  Weight bundle{2, 1};
  long D = 130;
  std::size_t primes = 2;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  Format format = Format::text;

  void validate() const {
    if (D < 1) throw DataError("--bound must be at least 1");
    if (primes < 2) throw DataError("--primes must be at least 2");
    if (bundle[0] < 0 || bundle[1] < 0) throw DataError("--bundle needs nonnegative p,q");
  }
};

struct Outcome {
  Report report;
  std::optional<DimensionTable> table;  // filled by euler
};

// --- per-theorem pipelines ---

inline Report group_pipeline(const RunConfig& cfg) { return group_report(load_group(cfg.data)); }

inline Report degree_pipeline(const RunConfig& cfg) {
  const auto gens = load_generators(cfg.data);
  Report r = verify_degree_matrix(gens, load_degree_matrix(cfg.data));
  r.merge(verify_semiinvariance(gens, load_group(cfg.data)).report);
  return r;
}

inline Report central_fibre_pipeline(const RunConfig& cfg) {
  const auto cf = load_central_fibre(cfg.data, {2, 1});
  Report r;
  for (const auto& c : cf.comps)
    if (c.kind == "toric") r.merge(central_fibre_report(c, analyse_component(c, cf.comps, cf.dm, {2, 1})));
  r.merge(zp_checks(cf.component("ZP"), cf.dm, cf.comps));
  return r;
}

inline Report semistability_pipeline(const RunConfig& cfg) {
  const auto cf = load_central_fibre(cfg.data, {2, 1});
  const auto charts = load_corrected_charts(cfg.data, cf.dm);
  Report r = semistability_report(charts, load_products(cfg.data), cf.comps, cf.quotients, cf.dm, {2, 1});
  r.merge(base_locus_report(cf.comps, cf.quotients, cf.dm, {2, 1}));
  return r;
}

inline Report compass_pipeline(const RunConfig& cfg) {
  const auto pts = load_fixed_point_data(cfg.data);
  const auto tables = component_tables(load_central_fibre(cfg.data, {2, 1}), {2, 1});
  Report r = fixed_point_report(load_fixed_points(cfg.data), pts);
  r.merge(compass_report(pts, tables));
  return r;
}

inline Report component_table_pipeline(const RunConfig& cfg) {
  const auto tables = component_tables(load_central_fibre(cfg.data, cfg.bundle), cfg.bundle);
  return component_table_report(tables, load_component_weight_sets(cfg.data));
}

inline std::filesystem::path diagram_path(const RunConfig& cfg, const Weight& L) {
  return cfg.data / ("diagram_" + std::to_string(L[0]) + "_" + std::to_string(L[1]) + ".txt");
}

inline Outcome euler_pipeline(const RunConfig& cfg) {
  Outcome out;
  const auto pts = load_fixed_point_data(cfg.data);
  try {
    out.table = hilbert_weight_table(cfg.bundle, pts, kDefaultEll, cfg.D);
    out.report.add("euler", "dimension table of " + w2s(cfg.bundle) + " up to 3a+2b <= " + std::to_string(cfg.D), true,
                   std::to_string(out.table->size()) + " nonzero cells");
  } catch (const MathError& e) {
    out.report.add("euler", "dimension table of " + w2s(cfg.bundle), false, e.what());
    return out;
  }
  const auto dp = diagram_path(cfg, cfg.bundle);
  if (std::filesystem::exists(dp)) {
    const auto ell2 = find_admissible_functional(pts, {kDefaultEll});
    out.report.merge(lrr_report(pts, load_diagram(dp), kDefaultEll, cfg.D, ell2));
  }
  return out;
}

inline Report walls_pipeline(const RunConfig& cfg) { return walls_report(load_fixed_point_data(cfg.data)); }

inline Report charts_pipeline(const RunConfig& cfg) {
  const auto dm = load_degree_matrix(cfg.data);
  const auto charts = load_corrected_charts(cfg.data, dm);
  return chart_report(charts, load_generators(cfg.data), dm, cfg.seed);
}

// Invariant ring against the trivial bundle's table.
inline Report molien_pipeline(const RunConfig& cfg) {
  Report r;
  const auto pts = load_fixed_point_data(cfg.data);
  const long amax = cfg.D / kDefaultEll[0], bmax = cfg.D / kDefaultEll[1];
  const MolienSeries mol(load_group(cfg.data), amax, bmax);
  const auto t = hilbert_weight_table({0, 0}, pts, kDefaultEll, cfg.D);
  std::size_t cells = 0, bad = 0;
  std::string first;
  for (long a = 0; a <= amax; ++a)
    for (long b = 0; pair_with(kDefaultEll, {a, b}) <= cfg.D; ++b) {
      ++cells;
      auto it = t.find({a, b});
      const long want = it == t.end() ? 0 : it->second.get_si();
      if (mol.dim(a, b) != want && !bad++) first = w2s({a, b});
    }
  r.add("oracle", "Molien series of G equals the table of O", bad == 0,
        std::to_string(cells) + " cells, " + std::to_string(bad) + " differ" + (first.empty() ? "" : ", first " + first));
  return r;
}

inline Report regularity_pipeline(const RunConfig& cfg) { return regularity_report(load_seeds(cfg.data), 50); }

inline Verdict verdict_pipeline(const RunConfig& cfg) {
  VerdictOptions opt;
  opt.D = cfg.D;
  opt.nprimes = cfg.primes;
  opt.threads = cfg.threads;
  opt.rank.seed = cfg.seed;
  return cox_equality_verdict(load_seeds(cfg.data).S, load_fixed_point_data(cfg.data), load_generators(cfg.data), opt);
}

// --- subcommands ---

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"group", "central-fibre", "compasses", "charts", "euler", "walls", "oracle", "coxring"};
  return s;
}

inline Outcome run_subcommand(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  Outcome out;
  if (name == "group") {
    out.report = group_pipeline(cfg);
  } else if (name == "central-fibre") {
    out.report = central_fibre_pipeline(cfg);
    out.report.merge(semistability_pipeline(cfg));
  } else if (name == "compasses") {
    out.report = compass_pipeline(cfg);
    out.report.merge(component_table_pipeline(cfg));
  } else if (name == "charts") {
    out.report = charts_pipeline(cfg);
  } else if (name == "euler") {
    out = euler_pipeline(cfg);
  } else if (name == "walls") {
    out.report = walls_pipeline(cfg);
  } else if (name == "oracle") {
    out.report = degree_pipeline(cfg);
    out.report.merge(molien_pipeline(cfg));
  } else if (name == "coxring") {
    out.report = regularity_pipeline(cfg);
    out.report.merge(verdict_pipeline(cfg).report);
  } else if (name == "all") {
    // every stage runs; failures are collected, data errors abort
    for (const auto& s : subcommands()) {
      try {
        out.report.merge(run_subcommand(s, cfg).report);
      } catch (const MathError& e) {
        out.report.add(s, "stage completed", false, e.what());
      }
    }
  } else {
    throw DataError("unknown subcommand " + name);
  }
  return out;
}

// --- emission ---

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string table_grid(const DimensionTable& t) {
  long amax = 0, bmax = 0;
  std::size_t width = 1;
  for (const auto& [w, d] : t) {
    amax = std::max(amax, w[0]);
    bmax = std::max(bmax, w[1]);
    width = std::max(width, d.get_str().size());
  }
  const int cw = static_cast<int>(width) + 1;
  std::ostringstream os;
  for (long b = bmax; b >= 0; --b) {
    os << std::setw(4) << b << " |";
    for (long a = 0; a <= amax; ++a) {
      auto it = t.find({a, b});
      os << std::setw(cw) << (it == t.end() ? std::string(".") : it->second.get_str());
    }
    os << "\n";
  }
  os << "     +" << std::string(static_cast<std::size_t>((amax + 1) * cw), '-') << "\n      ";
  for (long a = 0; a <= amax; ++a) os << std::setw(cw) << (a % 5 == 0 ? std::to_string(a) : std::string());
  os << "\n";
  return os.str();
}

inline std::string emit_report(const Outcome& out, Format f) {
  const Report& r = out.report;
  std::ostringstream os;
  switch (f) {
    case Format::text:
      for (const auto& c : r.checks)
        os << (c.pass ? "PASS" : "FAIL") << " [" << c.tag << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
      for (const auto& n : r.notes) os << "note: " << n << "\n";
      if (out.table) os << "\n" << table_grid(*out.table);
      break;
    case Format::csv:
      if (out.table) {
        for (const auto& [w, d] : *out.table) os << w[0] << "," << w[1] << "," << d.get_str() << "\n";
      } else {
        os << "status,tag,name,detail\n";
        for (const auto& c : r.checks)
          os << (c.pass ? "PASS" : "FAIL") << "," << csv_field(c.tag) << "," << csv_field(c.name) << "," << csv_field(c.detail) << "\n";
      }
      break;
    case Format::json: {
      nlohmann::ordered_json j;
      j["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : r.checks)
        j["checks"].push_back({{"tag", c.tag}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      if (!r.notes.empty()) j["notes"] = r.notes;
      if (out.table) {
        j["table"] = nlohmann::ordered_json::array();
        for (const auto& [w, d] : *out.table) j["table"].push_back({w[0], w[1], d.get_si()});
      }
      os << j.dump() << "\n";
      break;
    }
  }
  return os.str();
}

}  // namespace coxtorus
