// Betti numbers over GF(2) of the sample complexes.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ffinv/ffinv.hpp"

int main() {
  using namespace ffinv;
  PrimeField f2(2);
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> cases{
      {"data/triangle.txt", {1, 1}}, {"data/sphere.txt", {1, 0, 1}}};
  int bad = 0;
  for (const auto& [path, expect] : cases) {
    std::ifstream in(path);
    const auto c = SimplicialComplex::build(io::read_simplices(in));
    SeededRng rng(1);
    const BettiResult r = betti_numbers(c, f2, rng);
    std::printf("%s:", path.c_str());
    for (auto b : r.betti) std::printf(" %zu", b);
    std::printf("\n");
    bad += r.betti == expect ? 0 : 1;
  }
  return bad;
}
