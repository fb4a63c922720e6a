// Rebuilds the tangent weights at the seven torus-fixed points from the component
// weight tables, and prints the weight hull.

#include <iostream>

#include "coxtorus/equivariant.hpp"

using namespace coxtorus;

int main() {
  const auto dir = default_data_dir();
  const auto tables = component_tables(load_central_fibre(dir, {2, 1}), {2, 1});
  const auto pts = load_fixed_point_data(dir);
  std::cout << "hull vertices " << weights_to_string(weight_hull_vertices(tables)) << "\n";
  for (const auto& p : pts) {
    const auto known = known_compass_weights(p.vertex, tables);
    std::cout << "P" << p.id << " at " << w2s(p.vertex) << ": from components " << weights_to_string(known);
    try {
      std::cout << " -> " << weights_to_string(assemble_compass(known, kEll0)) << "\n";
    } catch (const CompassError& e) {
      std::cout << " -> " << e.what() << "\n";
    }
  }
}
