// Prints the dimension table of H^0(X, pL1 + qL2) by torus weight.
//   dimension_table [p q [D]]

#include <iostream>
#include <string>

#include "coxtorus/pipeline.hpp"

using namespace coxtorus;

int main(int argc, char** argv) {
  const Weight L{argc > 2 ? std::stol(argv[1]) : 2, argc > 2 ? std::stol(argv[2]) : 1};
  const long D = argc > 3 ? std::stol(argv[3]) : 80;
  const auto pts = load_fixed_point_data(default_data_dir());
  const auto t = hilbert_weight_table(L, pts, kDefaultEll, D);
  std::cout << "H^0 of " << w2s(L) << " by torus weight, 3a+2b <= " << D << "\n\n" << table_grid(t);
}
