// Invert 1 + 2σ + τ in GF(5)[D3] and print the inverse in normal form σ^a τ^b.

#include <cstdio>
#include <fstream>

#include "ffinv/ffinv.hpp"

int main(int argc, char** argv) {
  using namespace ffinv;
  std::ifstream in(argc > 1 ? argv[1] : "data/d3_gf5.txt");
  const io::GroupElementFile file = io::read_group_element(in);
  PrimeField f(file.p);
  const MetacyclicGroup g(file.m, file.s, file.t, file.u);
  GroupRingElement beta;
  for (auto c : file.coeffs) beta.push_back(f.from_int(c));

  const UnitResult r = group_ring_unit(g, f, beta);
  GroupRingElement one(g.order(), 0);
  one[g.identity()] = 1;
  const bool ok = ring_multiply(g, f, beta, r.inverse) == one;

  for (std::int64_t a = 0; a < g.m(); ++a) {
    for (std::int64_t b = 0; b < g.s(); ++b) {
      if (auto c = r.inverse[g.index(a, b)]) std::printf("%llu·σ^%lld τ^%lld\n", static_cast<unsigned long long>(c),
                                                        static_cast<long long>(a), static_cast<long long>(b));
    }
  }
  std::printf("block size %zu, check %s\n", r.block_size, ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}
