// ppim: benchmark harness and demos for the simulated PIM framework.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppim/ppim.hpp"

namespace {

struct Options {
  std::size_t dpus = 64;
  unsigned tasklets = 16;
  std::string codec = "vbyte";
  std::vector<std::uint64_t> sizes;
  std::uint64_t seed = 1;
  std::string cost_config;
  std::string out;
  unsigned bits = 0;
  std::size_t blocks = 16;
  std::size_t parties = 3;
  std::uint64_t modulus = 2147483647;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--dpus", o.dpus, "number of DPUs (N)")->check(CLI::PositiveNumber);
  cmd->add_option("--tasklets", o.tasklets, "tasklets per DPU (T)")->check(CLI::Range(1, 24));
  cmd->add_option("--codec", o.codec, "codec: none, vbyte or dedup")->check(CLI::IsMember({"none", "vbyte", "dedup"}));
  cmd->add_option("--sizes", o.sizes, "comma-separated element counts")->delimiter(',');
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--cost-config", o.cost_config, "key=value cost model file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "CSV output path (default: stdout)");
  cmd->add_option("--blocks", o.blocks, "compressed blocks per chunk")->check(CLI::PositiveNumber);
}

ppim::pim::CostModel cost_model(const Options& o) {
  return o.cost_config.empty() ? ppim::pim::CostModel{} : ppim::pim::load_cost_model(o.cost_config);
}

ppim::orchestrate::OrchestrationConfig pipeline_config(const Options& o) {
  ppim::orchestrate::OrchestrationConfig cfg;
  cfg.n_dpus = o.dpus;
  cfg.tasklets_per_dpu = o.tasklets;
  cfg.inbound_codec = ppim::orchestrate::parse_codec(o.codec);
  cfg.blocks_per_chunk = o.blocks;
  return cfg;
}

void emit(const Options& o, const ppim::apps::BenchReport& report) {
  std::ostringstream csv;
  report.write_csv(csv);
  if (o.out.empty())
    std::cout << csv.str();
  else
    ppim::apps::write_file_atomically(o.out, csv.str());
}

int bench_vecadd(const Options& o) {
  const auto sizes = o.sizes.empty() ? ppim::apps::default_sizes() : o.sizes;
  const auto report = ppim::apps::bench_vector_add(sizes, pipeline_config(o), cost_model(o), o.seed);
  emit(o, report);
  return 0;
}

int bench_compress(const Options& o) {
  const std::vector<std::uint64_t> sizes = o.sizes.empty() ? std::vector<std::uint64_t>{1u << 20} : o.sizes;
  const auto report = ppim::apps::bench_compression(sizes, o.bits ? o.bits : 2, o.blocks, o.seed,
                                                    ppim::orchestrate::parse_codec(o.codec), cost_model(o));
  emit(o, report);
  return 0;
}

int compare_strategies(const Options& o) {
  const std::vector<std::uint64_t> sizes = o.sizes.empty() ? std::vector<std::uint64_t>{1u << 20} : o.sizes;
  std::string winners;
  const auto report =
      ppim::apps::bench_strategies(sizes, o.bits ? o.bits : 7, pipeline_config(o), cost_model(o), o.seed, &winners);
  emit(o, report);
  std::cerr << "winner by size: " << winners << "\n";
  return 0;
}

int demo_dot(const Options& o) {
  const std::size_t len = o.sizes.empty() ? 256 : o.sizes.front();
  ppim::protocols::Rng rng(o.seed);
  std::vector<std::uint64_t> x(len), y(len);
  for (auto& v : x) v = rng.uniform(o.modulus);
  for (auto& v : y) v = rng.uniform(o.modulus);
  auto system = ppim::pim::create_system(o.dpus, {}, cost_model(o));
  auto cfg = pipeline_config(o);
  ppim::apps::PipelineOps ops(system, cfg);
  const auto secure = ppim::apps::app_secure_dot_product(x, y, o.parties, o.modulus, rng.next(), ops);
  const auto plain = ppim::kernels::dot_product<std::uint64_t>(ppim::kernels::ModulusContext(o.modulus), x, y);
  std::cout << "secure dot product (" << o.parties << " parties, q=" << o.modulus << ", n=" << len << "): " << secure
            << "\nplaintext oracle: " << plain << "\npipeline jobs: " << ops.jobs()
            << ", modeled time: " << ops.timeline().total() << " s\n";
  return secure == plain ? 0 : 1;
}

int demo_hesum(const Options& o) {
  const std::size_t count = o.sizes.empty() ? 100 : o.sizes.front();
  const auto params = ppim::protocols::shipped_bfv_params();
  ppim::protocols::Rng rng(o.seed);
  std::vector<std::uint64_t> values(count);
  std::uint64_t plain = 0;
  for (auto& v : values) {
    v = rng.uniform(params.t);
    plain = (plain + v) % params.t;
  }
  auto system = ppim::pim::create_system(o.dpus, {}, cost_model(o));
  ppim::apps::PipelineOps ops(system, pipeline_config(o));
  const auto sum = ppim::apps::app_encrypted_sum(values, params, rng.next(), ops);
  std::cout << "encrypted sum of " << count << " values mod " << params.t << ": " << sum << "\nplaintext oracle: " << plain
            << "\naddition budget: " << params.max_fresh_additions() << "\npipeline jobs: " << ops.jobs()
            << ", modeled time: " << ops.timeline().total() << " s\n";
  return sum == plain ? 0 : 1;
}

int selftest(const Options& o) {
  bool ok = true;
  for (const auto& r : ppim::apps::run_selftest(o.seed)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.seconds << " s): " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving computation on a simulated PIM system"};
  app.require_subcommand(1);
  Options o;

  auto* vecadd = app.add_subcommand("bench-vecadd", "data-movement breakdown of vector addition (CSV)");
  auto* compress = app.add_subcommand("bench-compress", "byte-oriented compression ratio (CSV)");
  auto* strategies = app.add_subcommand("compare-strategies", "total time per compression strategy (CSV)");
  auto* dot = app.add_subcommand("demo-dot", "secret-shared dot product through the pipeline");
  auto* hesum = app.add_subcommand("demo-hesum", "BFV encrypted sum through the pipeline");
  auto* self = app.add_subcommand("selftest", "oracle-equivalence suite; nonzero exit on failure");
  for (auto* cmd : {vecadd, compress, strategies, dot, hesum, self}) add_common(cmd, o);
  for (auto* cmd : {compress, strategies})
    cmd->add_option("--bits", o.bits, "values uniform in [0, 2^bits)")->check(CLI::Range(1, 32));
  dot->add_option("--parties", o.parties, "number of parties")->check(CLI::Range(2, 64));
  dot->add_option("--modulus", o.modulus, "prime modulus below 2^32");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (compress->parsed() && o.codec == "none") {
    std::cerr << "usage error: bench-compress needs --codec vbyte or dedup\n";
    return 2;
  }

  try {
    if (vecadd->parsed()) return bench_vecadd(o);
    if (compress->parsed()) return bench_compress(o);
    if (strategies->parsed()) return compare_strategies(o);
    if (dot->parsed()) return demo_dot(o);
    if (hesum->parsed()) return demo_hesum(o);
    if (self->parsed()) return selftest(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
