#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxtorus/error.hpp"
#include "coxtorus/laurent.hpp"
#include "coxtorus/linsolve.hpp"
#include "coxtorus/parse.hpp"

namespace coxtorus {

#ifndef COXTORUS_DATA_DIR
#define COXTORUS_DATA_DIR "data"
#endif

inline std::string default_data_dir() { return COXTORUS_DATA_DIR; }

struct SeedLine {
  std::size_t lineno;
  std::string text;
};

// Non-empty lines with '#' comments removed.
inline std::vector<SeedLine> read_seed_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open seed file " + p.string());
  std::vector<SeedLine> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back({n, line.substr(b, e - b + 1)});
  }
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> v;
  std::string w;
  while (is >> w) v.push_back(w);
  return v;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void seed_fail(const std::filesystem::path& p, std::size_t line, const std::string& why) {
  throw DataError(p.filename().string() + ":" + std::to_string(line) + ": " + why);
}

// "name = expression" lines, in file order.
inline std::vector<std::pair<std::string, LaurentPoly>> load_named_polys(const std::filesystem::path& p) {
  std::vector<std::pair<std::string, LaurentPoly>> out;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto eq = text.find('=');
    if (eq == std::string::npos) seed_fail(p, ln, "expected 'name = polynomial'");
    try {
      out.emplace_back(trim(text.substr(0, eq)), parse_poly(text.substr(eq + 1)));
    } catch (const DataError& e) {
      seed_fail(p, ln, e.what());
    }
  }
  return out;
}

struct GeneratorSet {
  std::vector<std::string> names;
  std::map<std::string, LaurentPoly> poly;
  const LaurentPoly& operator[](const std::string& n) const {
    auto it = poly.find(n);
    if (it == poly.end()) throw DataError("unknown generator " + n);
    return it->second;
  }
};

inline GeneratorSet load_generators(const std::filesystem::path& dir) {
  GeneratorSet g;
  for (auto& [n, f] : load_named_polys(dir / "generators.txt")) {
    if (g.poly.count(n)) throw DataError("generators.txt: duplicate generator " + n);
    g.names.push_back(n);
    g.poly.emplace(n, std::move(f));
  }
  if (g.names.size() != 20) throw DataError("generators.txt: expected 20 generators, found " + std::to_string(g.names.size()));
  return g;
}

using Weight = std::array<long, 2>;

struct DegreeMatrix {
  std::vector<std::string> names;
  std::map<std::string, Weight> pic, tw;
  std::size_t index(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return i;
    throw DataError("degree matrix has no column " + n);
  }
};

inline DegreeMatrix load_degree_matrix(const std::filesystem::path& dir) {
  const auto p = dir / "degree_matrix.txt";
  DegreeMatrix d;
  std::map<std::string, std::vector<long>> rows;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    if (tok.empty()) continue;
    if (tok[0] == "names") {
      d.names.assign(tok.begin() + 1, tok.end());
      continue;
    }
    if (d.names.empty()) seed_fail(p, ln, "row before the names line");
    if (tok.size() != d.names.size() + 1) seed_fail(p, ln, "row length does not match the names line");
    std::vector<long> v;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      try {
        std::size_t used = 0;
        v.push_back(std::stol(tok[i], &used));
        if (used != tok[i].size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        seed_fail(p, ln, "bad integer '" + tok[i] + "' in column " + d.names[i - 1]);
      }
    }
    rows[tok[0]] = v;
  }
  for (const char* r : {"pic1", "pic2", "tw1", "tw2"})
    if (!rows.count(r)) throw DataError("degree_matrix.txt: missing row " + std::string(r));
  for (std::size_t i = 0; i < d.names.size(); ++i) {
    d.pic[d.names[i]] = {rows["pic1"][i], rows["pic2"][i]};
    d.tw[d.names[i]] = {rows["tw1"][i], rows["tw2"][i]};
  }
  return d;
}

// "matrix NAME" ... rows ... "end" blocks of field constants.
inline std::vector<std::pair<std::string, Matrix<CycNum>>> load_matrices(const std::filesystem::path& p) {
  std::vector<std::pair<std::string, Matrix<CycNum>>> out;
  auto lines = read_seed_lines(p);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tok = split_ws(lines[i].text);
    if (tok.size() != 2 || tok[0] != "matrix") seed_fail(p, lines[i].lineno, "expected 'matrix NAME'");
    Matrix<CycNum> M;
    for (++i; i < lines.size() && lines[i].text != "end"; ++i) {
      std::vector<CycNum> row;
      for (const auto& t : split_ws(lines[i].text)) {
        try {
          row.push_back(parse_cyc(t));
        } catch (const DataError& e) {
          seed_fail(p, lines[i].lineno, e.what());
        }
      }
      if (!M.empty() && row.size() != M[0].size()) seed_fail(p, lines[i].lineno, "ragged matrix");
      M.push_back(std::move(row));
    }
    if (i == lines.size()) throw DataError(p.filename().string() + ": unterminated matrix " + tok[1]);
    out.emplace_back(tok[1], std::move(M));
  }
  return out;
}

struct FixedPointData {
  int id = 0;
  Weight vertex{};
  std::vector<Weight> compass;
  std::map<std::string, Weight> mu;  // keyed by bundle name: L1, L2, L1+L2
};

inline std::vector<FixedPointData> load_fixed_points(const std::filesystem::path& dir) {
  const auto p = dir / "fixed_points.txt";
  std::vector<FixedPointData> out;
  FixedPointData* cur = nullptr;
  auto weight = [&](const std::vector<std::string>& tok, std::size_t at, std::size_t ln) {
    if (tok.size() != at + 2) seed_fail(p, ln, "expected two integers");
    try {
      return Weight{std::stol(tok[at]), std::stol(tok[at + 1])};
    } catch (const std::exception&) {
      seed_fail(p, ln, "bad integer");
    }
  };
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    if (tok[0] == "point") {
      if (cur) seed_fail(p, ln, "nested point");
      out.push_back({});
      cur = &out.back();
      try {
        cur->id = std::stoi(tok.at(1));
      } catch (const std::exception&) {
        seed_fail(p, ln, "expected 'point N'");
      }
      continue;
    }
    if (!cur) seed_fail(p, ln, "line outside a point block");
    if (tok[0] == "end") {
      if (cur->compass.size() != 4) seed_fail(p, ln, "compass needs four weights");
      cur = nullptr;
    } else if (tok[0] == "vertex") {
      cur->vertex = weight(tok, 1, ln);
    } else if (tok[0] == "compass") {
      std::istringstream is(text.substr(7));
      std::string piece;
      while (std::getline(is, piece, ';')) {
        auto t = split_ws(piece);
        t.insert(t.begin(), "");
        cur->compass.push_back(weight(t, 1, ln));
      }
    } else if (tok[0] == "mu") {
      if (tok.size() != 4) seed_fail(p, ln, "expected 'mu BUNDLE a b'");
      cur->mu[tok[1]] = weight(tok, 2, ln);
    } else {
      seed_fail(p, ln, "unknown keyword " + tok[0]);
    }
  }
  if (cur) throw DataError(p.string() + ": unterminated point block");
  return out;
}

}  // namespace coxtorus
