// Lists the monomials in the 20 generators spanning one graded piece of the Cox ring,
// with the rank of their x-expansions next to the dimension predicted by fixed points.
//   graded_piece [p q a b]

#include <iostream>
#include <string>

#include "coxtorus/coxoracle.hpp"

using namespace coxtorus;

int main(int argc, char** argv) {
  Weight L{1, 1}, w{3, 3};
  if (argc > 4) {
    L = {std::stol(argv[1]), std::stol(argv[2])};
    w = {std::stol(argv[3]), std::stol(argv[4])};
  }
  const auto dir = default_data_dir();
  const auto gens = load_generators(dir);
  const GradedPieces gp(gens, std::max(w[0], 1L), std::max(w[1], 1L));
  const auto ms = gp.enumerate(L, w);
  std::cout << ms.size() << " monomials of Picard degree " << w2s(L) << " and torus weight " << w2s(w) << "\n";
  for (std::size_t k = 0; k < ms.size() && k < 20; ++k) std::cout << "  " << gp.to_string(ms[k]) << "\n";
  if (ms.size() > 20) std::cout << "  ...\n";

  const auto table = hilbert_weight_table(L, load_fixed_point_data(dir), kDefaultEll, 3 * w[0] + 2 * w[1]);
  auto it = table.find(w);
  const long lrr = it == table.end() ? 0 : it->second.get_si();
  const RankOracle oracle(gp, 2, lrr);
  const auto c = oracle.rank(L, w, lrr);
  std::cout << "dimension from fixed points " << lrr << ", rank mod p";
  for (auto r : c.ranks) std::cout << " " << r;
  std::cout << (c.certified() ? " (equal)" : " (short)") << "\n";
  if (ms.size() <= 30) std::cout << "exact rank over Q(z) " << exact_piece_rank(gp, ms) << "\n";
}
