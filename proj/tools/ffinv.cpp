// ffinv command-line tool. Exit codes: 0 ok, 1 math failure, 2 bad input,
// 3 precondition (field too small, bad flags).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffinv/ffinv.hpp"
#include "json.hpp"

using namespace ffinv;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kMath = 1, kFormat = 2, kPrecondition = 3 };

struct RunConfig {
  std::string in, in2, out, omega_table, counters_out, strategy = "dense-oracle", format = "auto";
  std::optional<std::uint64_t> p;
  std::optional<std::size_t> s;
  std::uint64_t seed = 1;
  int retries = 8;
  int threads = 1;
  bool quiet = false;
  bool assume_closed = false;
  std::vector<std::size_t> sizes{128, 256};
};

class Session {
 public:
  explicit Session(const RunConfig& c) : cfg_(c) {}

  void emit(const json& j) const {
    if (!cfg_.quiet) std::cout << j.dump() << '\n';
    if (!cfg_.counters_out.empty()) {
      std::ofstream out(cfg_.counters_out, std::ios::app);
      out << j.dump() << '\n';
    }
  }

  GeneratorStrategy strategy() const {
    return cfg_.strategy == "schur" ? GeneratorStrategy::SchurRecursive : GeneratorStrategy::DenseOracle;
  }

  io::MatrixFormat format() const {
    if (cfg_.format == "sparse") return io::MatrixFormat::Sparse;
    if (cfg_.format == "dense") return io::MatrixFormat::Dense;
    return io::MatrixFormat::Auto;
  }

  /// Header modulus, which must agree with --p when both are present.
  std::uint64_t modulus(std::uint64_t from_file) const {
    if (cfg_.p && *cfg_.p != from_file) {
      throw FormatError("file modulus " + std::to_string(from_file) + " differs from --p " + std::to_string(*cfg_.p));
    }
    return from_file;
  }

  io::LoadedMatrix load(const std::string& path) const { return io::read_matrix_file(path, format()); }

  std::optional<OmegaTable> table() const {
    if (cfg_.omega_table.empty()) return std::nullopt;
    return OmegaTable::load(cfg_.omega_table);
  }

  void write_matrix(const DenseMatrix& a) const {
    if (cfg_.out.empty()) {
      io::write_dense(std::cout, a);
      return;
    }
    std::ofstream out(cfg_.out);
    if (!out) throw FormatError("cannot write " + cfg_.out);
    io::write_dense(out, a);
  }

  const RunConfig& cfg() const { return cfg_; }

 private:
  const RunConfig& cfg_;
};

json counters(const OpCounter& c) { return {{"muls", c.muls}, {"adds", c.adds}, {"invs", c.invs}}; }

int cmd_invert(const Session& ss) {
  const auto m = ss.load(ss.cfg().in);
  PrimeField f(ss.modulus(m.header.p));
  const SparseMatrix a = m.to_sparse(f);
  MatrixInvOptions opt;
  opt.s = ss.cfg().s;
  opt.strategy = ss.strategy();
  opt.retries = ss.cfg().retries;
  opt.table = ss.table();
  SeededRng rng(ss.cfg().seed);
  MatrixInvReport rep;
  OpCounter total;
  DenseMatrix inv(f, 0, 0);
  {
    CounterScope scope(total);
    inv = matrix_inv(a, opt, rng, &rep);
  }
  ss.write_matrix(inv);
  ss.emit({{"command", "invert"},
           {"n", a.rows()},
           {"s", rep.s},
           {"m", rep.m},
           {"attempts", rep.attempts},
           {"blocking_fallback", rep.blocking_fallback},
           {"strategy", to_string(opt.strategy)},
           {"krylov", counters(rep.krylov)},
           {"hankel", counters(rep.hankel)},
           {"hankel_inverse", counters(rep.hankel_inverse)},
           {"sandwich", counters(rep.sandwich)},
           {"total", counters(total)}});
  return kOk;
}

int cmd_rank(const Session& ss, bool want_nullspace) {
  const auto m = ss.load(ss.cfg().in);
  PrimeField f(ss.modulus(m.header.p));
  const SparseMatrix a = m.to_sparse(f);
  RankOptions opt;
  opt.strategy = ss.strategy();
  opt.retries = ss.cfg().retries;
  SeededRng rng(ss.cfg().seed);
  OpCounter total;
  const RankCertificate cert = [&] {
    CounterScope scope(total);
    return rank_and_nullspace(a, rng, opt);
  }();
  if (want_nullspace) {
    ss.write_matrix(cert.nullspace);
  } else {
    std::cout << cert.r << '\n';
  }
  ss.emit({{"command", want_nullspace ? "nullspace" : "rank"},
           {"n", a.rows()},
           {"rank", cert.r},
           {"nullity", cert.nullspace.cols()},
           {"attempts", cert.attempts},
           {"total", counters(total)}});
  return kOk;
}

int cmd_betti(const Session& ss) {
  std::ifstream in(ss.cfg().in);
  if (!in) throw FormatError("cannot open " + ss.cfg().in);
  const auto simplices = io::read_simplices(in);
  PrimeField f(ss.cfg().p.value_or(2));
  const auto c = SimplicialComplex::build(simplices, !ss.cfg().assume_closed);
  SeededRng rng(ss.cfg().seed);
  RankOptions opt;
  opt.strategy = ss.strategy();
  opt.retries = ss.cfg().retries;
  OpCounter total;
  BettiResult r;
  {
    CounterScope scope(total);
    r = betti_numbers(c, f, rng, opt);
  }
  for (std::size_t k = 0; k < r.betti.size(); ++k) std::cout << (k ? " " : "") << r.betti[k];
  std::cout << '\n';
  ss.emit({{"command", "betti"},
           {"p", f.modulus()},
           {"betti", r.betti},
           {"sparse_pipeline", r.used_sparse_pipeline},
           {"total", counters(total)}});
  return kOk;
}

int cmd_group_unit(const Session& ss) {
  std::ifstream in(ss.cfg().in);
  if (!in) throw FormatError("cannot open " + ss.cfg().in);
  const auto gf = io::read_group_element(in);
  PrimeField f(ss.modulus(gf.p));
  const MetacyclicGroup g(gf.m, gf.s, gf.t, gf.u);
  GroupRingElement beta;
  for (auto c : gf.coeffs) beta.push_back(f.from_int(c));
  OpCounter total;
  const UnitResult r = [&] {
    CounterScope scope(total);
    return group_ring_unit(g, f, beta, ss.strategy());
  }();
  std::ostringstream text;
  text << gf.m << ' ' << gf.s << ' ' << gf.t << ' ' << gf.u << ' ' << gf.p << '\n';
  for (std::int64_t a = 0; a < gf.m; ++a) {
    for (std::int64_t b = 0; b < gf.s; ++b) {
      const residue c = r.inverse[g.index(a, b)];
      if (c != 0) text << a << ' ' << b << ' ' << c << '\n';
    }
  }
  if (ss.cfg().out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(ss.cfg().out);
    if (!out) throw FormatError("cannot write " + ss.cfg().out);
    out << text.str();
  }
  ss.emit({{"command", "group-unit"},
           {"order", g.order()},
           {"block_size", r.block_size},
           {"swapped", r.swapped},
           {"fallback", r.used_fallback},
           {"total", counters(total)}});
  return kOk;
}

/// Block Hankel inversion under the rectangular and per-column recovery paths.
int cmd_bench(const Session& ss) {
  PrimeField f(ss.cfg().p.value_or(65537));
  const auto t = ss.table();
  const ExponentReport e = solve_crossing(t ? *t : OmegaTable::bundled());
  std::ostringstream csv;
  csv << "seed,n,s,m,width,generator_muls,product_muls,recovery_muls,rectangular_muls,naive_muls,k_star,exponent\n";
  for (std::size_t n : ss.cfg().sizes) {
    const std::size_t s = ss.cfg().s.value_or(n / 4);
    if (s == 0 || n % s != 0) throw UsageError("block size must divide every size");
    const std::size_t m = n / s;
    const std::uint64_t seed = ss.cfg().seed + n;
    SeededRng rng(seed);
    auto draw = [&] {
      std::vector<DenseMatrix> h;
      for (std::size_t k = 0; k < 2 * m - 1; ++k) {
        DenseMatrix b(f, s, s);
        for (std::size_t i = 0; i < s; ++i) {
          for (std::size_t j = 0; j < s; ++j) b.set(i, j, random_residue(f, rng));
        }
        h.push_back(std::move(b));
      }
      return build_block_hankel(h);
    };
    DenseMatrix h = draw();
    while (dense_rank(h) != n) h = draw();
    const auto op = DisplacementOperator::hankel(n, s);
    OpCounter gen, naive;
    GeneratorPair g{DenseMatrix(f, 0, 0), DenseMatrix(f, 0, 0), op};
    {
      CounterScope scope(gen);
      g = inverse_generators(h, op, ss.strategy());
    }
    RecoveryReport rect;
    (void)decompress_hankel(g, &rect);
    {
      CounterScope scope(naive);
      (void)naive_column_recovery(g);
    }
    csv << seed << ',' << n << ',' << s << ',' << m << ',' << g.width() << ',' << gen.muls << ','
        << rect.product.muls << ',' << rect.recovery.muls << ',' << rect.product.muls + rect.recovery.muls << ','
        << naive.muls << ',' << e.k_star << ',' << e.omega_star << '\n';
  }
  if (ss.cfg().out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(ss.cfg().out);
    if (!out) throw FormatError("cannot write " + ss.cfg().out);
    out << csv.str();
  }
  ss.emit({{"command", "bench"}, {"k_star", e.k_star}, {"exponent", e.omega_star}});
  return kOk;
}

int cmd_verify(const Session& ss) {
  const auto a = ss.load(ss.cfg().in), b = ss.load(ss.cfg().in2);
  if (a.header.p != b.header.p) throw FormatError("the two files use different moduli");
  PrimeField f(ss.modulus(a.header.p));
  const DenseMatrix ad = a.dense(f), bd = b.dense(f);
  const bool ok = ad.cols() == bd.rows() && ad.rows() == bd.cols() && mat_mul(ad, bd).is_identity();
  ss.emit({{"command", "verify"}, {"identity", ok}});
  return ok ? kOk : kMath;
}

int fail(int code, const std::string& what) {
  std::cerr << "ffinv: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact linear algebra over prime fields"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool needs_input = true) {
    auto* in = sub->add_option("--in", cfg.in, "Input file");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out, "Output file (standard output if omitted)");
    sub->add_option("--p", cfg.p, "Field modulus; must match the file header")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--strategy", cfg.strategy, "Generator strategy")
        ->check(CLI::IsMember({"dense-oracle", "schur"}));
    sub->add_option("--retries", cfg.retries, "Retry budget")->check(CLI::Range(1, 1000));
    sub->add_option("--counters-out", cfg.counters_out, "Append JSON counter lines to this file");
    sub->add_flag("--quiet", cfg.quiet, "Suppress JSON lines on standard output");
    sub->add_option("--threads", cfg.threads, "Worker threads for dense products")->check(CLI::Range(1, 256));
    sub->add_option("--format", cfg.format, "Matrix file format")->check(CLI::IsMember({"auto", "sparse", "dense"}));
  };

  auto* invert = app.add_subcommand("invert", "Invert a sparse nonsingular matrix");
  common(invert);
  invert->add_option("--s", cfg.s, "Block size")->check(CLI::PositiveNumber);
  invert->add_option("--omega-table", cfg.omega_table, "Rectangular exponent table")->check(CLI::ExistingFile);
  auto* rank = app.add_subcommand("rank", "Certified rank");
  common(rank);
  auto* nullspace = app.add_subcommand("nullspace", "Certified nullspace basis");
  common(nullspace);
  auto* betti = app.add_subcommand("betti", "Betti numbers of a simplicial complex");
  common(betti);
  betti->add_flag("--assume-closed", cfg.assume_closed, "Reject complexes that miss a face");
  auto* unit = app.add_subcommand("group-unit", "Inverse of a metacyclic group ring element");
  common(unit);
  auto* bench = app.add_subcommand("bench", "Recovery-path multiplication counts on block Hankel inputs");
  common(bench, false);
  bench->add_option("--s", cfg.s, "Block size (default n/4)")->check(CLI::PositiveNumber);
  bench->add_option("--sizes", cfg.sizes, "Matrix orders")->check(CLI::PositiveNumber);
  bench->add_option("--omega-table", cfg.omega_table, "Rectangular exponent table")->check(CLI::ExistingFile);
  auto* verify = app.add_subcommand("verify", "Check that A·B = I");
  common(verify);
  verify->add_option("--with", cfg.in2, "Second matrix file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kPrecondition;
  }

  set_num_threads(cfg.threads);
  const Session ss(cfg);
  try {
    if (*invert) return cmd_invert(ss);
    if (*rank) return cmd_rank(ss, false);
    if (*nullspace) return cmd_rank(ss, true);
    if (*betti) return cmd_betti(ss);
    if (*unit) return cmd_group_unit(ss);
    if (*bench) return cmd_bench(ss);
    if (*verify) return cmd_verify(ss);
  } catch (const FormatError& e) {
    return fail(kFormat, e.what());
  } catch (const NonClosedComplex& e) {
    return fail(kFormat, e.what());
  } catch (const InvalidPresentation& e) {
    return fail(kFormat, e.what());
  } catch (const FieldTooSmall& e) {
    return fail(kPrecondition, std::string(e.what()) + "; use a larger prime or dense elimination");
  } catch (const NotAUnit& e) {
    return fail(kMath, e.what());
  } catch (const UsageError& e) {
    return fail(kPrecondition, e.what());
  } catch (const Error& e) {
    return fail(kMath, e.what());
  }
  return kOk;
}
