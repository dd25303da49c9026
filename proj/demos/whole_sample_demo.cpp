// Generates a planted-star dataset in memory, runs the whole-sample
// pipeline, and prints both arborescence roots and maximal paths.

#include <iostream>

#include "sectorflow/sectorflow.hpp"

int main() {
  using namespace sectorflow;
  const auto spec = synth::star_dataset(6, 2, 0.8, 20000, 7);
  Dataset ds;
  ds.series = synth::generate_dataset(spec);

  const auto result = whole_sample_msas(ds);
  for (auto o : {Orientation::kOutgoing, Orientation::kIncoming}) {
    const auto& tree = result.tree(o);
    std::cout << to_string(o) << " root " << tree.nodes[tree.root].code << ", path ";
    for (auto v : result.path(o).nodes) std::cout << tree.nodes[v].short_code << ' ';
    std::cout << "(" << result.path(o).total_weight << " bits)\n";
  }
}
