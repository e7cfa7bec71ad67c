// Load a sparse matrix, invert it with the block Krylov pipeline, check A·A⁻¹ = I.

#include <cstdio>
#include <iostream>

#include "ffinv/ffinv.hpp"

int main(int argc, char** argv) {
  using namespace ffinv;
  const char* path = argc > 1 ? argv[1] : "data/small_sparse.txt";
  const io::LoadedMatrix file = io::read_matrix_file(path);
  PrimeField f(file.header.p);
  const SparseMatrix a = file.to_sparse(f);

  SeededRng rng(7);
  MatrixInvOptions opt;
  opt.s = 2;
  opt.strategy = GeneratorStrategy::SchurRecursive;
  MatrixInvReport rep;
  const DenseMatrix inv = matrix_inv(a, opt, rng, &rep);

  io::write_dense(std::cout, inv);
  const bool ok = a.apply(inv).is_identity();
  std::printf("s=%zu m=%zu attempts=%d check=%s\n", rep.s, rep.m, rep.attempts, ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}
