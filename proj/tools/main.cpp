// acctest: accumulation tests for ordered hypothesis testing.
//
//   acctest test --input pvals.csv --method hingeexp:C=2 --alpha 0.2
//   acctest simulate --seed 7 --prefix out/sim
//   acctest power --curve "f:0,0.5;1,0.3" --alpha 0.8 --mu 0.5
//   acctest dosage --input matrix.csv --output counts.csv
//   acctest validate
//   acctest replay out/sim.manifest.json

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acctest/errors.hpp"
#include "acctest/parallel.hpp"
#include "commands.hpp"

namespace cli = acctest::cli;

namespace {

// Tokens after the subcommand name, minus the worker count: outputs never
// depend on it, so replays use whatever the replaying machine prefers.
std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--threads" || a == "-j") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

int execute(const std::vector<std::string>& args, bool allow_replay);

int replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw acctest::ValidationError("cannot open manifest '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw acctest::ValidationError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  const auto m = cli::RunManifest::from_json(j);
  std::vector<std::string> args{m.subcommand};
  args.insert(args.end(), m.argv.begin(), m.argv.end());
  return execute(args, false);
}

int execute(const std::vector<std::string>& args, bool allow_replay) {
  CLI::App app{"Accumulation tests for FDR control on ordered hypotheses"};
  app.set_version_flag("--version", ACCTEST_VERSION);
  app.require_subcommand(1);

  unsigned threads = acctest::default_thread_count();
  std::string manifest_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-j,--threads", threads, "Worker threads (default: ACCTEST_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--manifest", manifest_path, "Where to write the run manifest");
  };

  cli::TestOptions test;
  auto* t = app.add_subcommand("test", "Run an accumulation test on ordered p-values");
  t->add_option("-i,--input", test.input, "CSV with column p (rank order) and optional is_null")->required();
  t->add_option("-m,--method", test.method, "forwardstop | seqstep:C=2 | seqstep+:C=2 | hingeexp:C=2 | piecewise:...")
      ->capture_default_str();
  t->add_option("-a,--alpha", test.alpha, "Target FDR level in (0,1)")->capture_default_str();
  t->add_option("--rule", test.rule, "Override the cutoff rule")->check(CLI::IsMember({"plain", "plus"}));
  t->add_option("--c", test.plus_c, "Constant of the plus rule");
  t->add_option("--shift-grid", test.shift_grid, "Map p = k/N to k/(N+1) before testing");
  t->add_option("--mfdp-c", test.mfdp_c, "c in FalsePos/(c + k) (default: C/alpha)");
  t->add_option("-o,--output", test.output, "Write the estimated-FDP path CSV here");
  add_common(t);

  cli::SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Ranked z-test simulation study");
  s->add_option("--seed", sim.seed, "Master seed")->required();
  s->add_option("--n", sim.n, "Hypotheses per trial")->capture_default_str();
  s->add_option("--n-nonnull", sim.n_nonnull, "Non-null hypotheses")->capture_default_str();
  s->add_option("--mu1", sim.mu1, "Separation of the prior ranking")->capture_default_str();
  s->add_option("--mu2", sim.mu2, "Signal strength of the p-values")->capture_default_str();
  s->add_option("--trials", sim.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--alpha", sim.alphas, "Target FDR levels (default 0.05..0.25 step 0.025)")->delimiter(',');
  s->add_option("--methods", sim.methods, "Methods (default: seqstep, seqstep+, forwardstop, hingeexp; C=2)")
      ->delimiter(' ');
  s->add_option("-o,--prefix", sim.prefix, "Output prefix for _summary.csv and _paths.csv")->capture_default_str();
  s->add_flag("!--no-paths", sim.paths, "Skip the averaged path table");
  add_common(s);

  cli::PowerOptions pow;
  auto* p = app.add_subcommand("power", "Asymptotic threshold and power for a signal curve");
  p->add_option("--curve", pow.curve, "Knots 'f:t0,f0;...;1,f1'")->required();
  p->add_option("--alpha", pow.alpha, "Target FDR level")->required();
  p->add_option("--mu", pow.mu, "E h(p) for non-null p-values, in (0,1)");
  p->add_option("--spec", pow.spec, "Accumulation function, to compute mu with --density");
  p->add_option("--density", pow.density, "Non-null density: uniform | z:mu=2 | beta:a=1,b=2 | piecewise:...");
  p->add_option("--delta", pow.delta, "Slope margin delta")->capture_default_str();
  add_common(p);

  cli::DosageOptionsCli dose;
  auto* d = app.add_subcommand("dosage", "Dosage-response permutation pipeline");
  d->add_option("-i,--input", dose.input, "Matrix CSV: gene_id, then trial columns labelled C*, L*, H*");
  d->add_option("--synthetic", dose.synthetic_genes, "Generate a synthetic matrix with this many genes");
  d->add_option("--signal", dose.synthetic_signal, "Genes with planted effects (synthetic only)");
  d->add_option("--seed", dose.seed, "Seed for the synthetic matrix");
  d->add_option("--alpha", dose.alphas, "Target FDR levels (default 0, 0.01, ..., 0.9)")->delimiter(',');
  d->add_option("--methods", dose.methods, "Accumulation methods")->delimiter(' ');
  d->add_flag("!--no-baselines", dose.baselines, "Skip BH and Storey");
  d->add_option("-o,--output", dose.output, "Discovery counts CSV (default: stdout)");
  d->add_option("--records", dose.records, "Per-gene records CSV");
  add_common(d);

  auto* v = app.add_subcommand("validate", "Run the built-in invariant suite");
  add_common(v);

  std::string replay_path;
  CLI::App* r = nullptr;
  if (allow_replay) {
    r = app.add_subcommand("replay", "Re-run a command from its manifest");
    r->add_option("manifest", replay_path, "Manifest JSON")->required();
  }

  std::vector<const char*> argv{"acctest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  if (r != nullptr && r->parsed()) return replay(replay_path);

  cli::RunManifest manifest;
  manifest.subcommand = app.get_subcommands().front()->get_name();
  manifest.argv = replayable_args(args);
  int code = cli::kExitOk;
  std::string default_manifest;
  if (t->parsed()) {
    code = cli::run_test(test, manifest, std::cout);
    if (!test.output.empty()) default_manifest = test.output + ".manifest.json";
  } else if (s->parsed()) {
    sim.threads = threads;
    code = cli::run_simulate(sim, manifest, std::cout);
    default_manifest = sim.prefix + ".manifest.json";
  } else if (p->parsed()) {
    code = cli::run_power(pow, manifest, std::cout);
  } else if (d->parsed()) {
    dose.threads = threads;
    code = cli::run_dosage(dose, manifest, std::cout);
    if (!dose.output.empty()) default_manifest = dose.output + ".manifest.json";
  } else if (v->parsed()) {
    return cli::run_validate(std::cout, threads);
  }
  const std::string where = manifest_path.empty() ? default_manifest : manifest_path;
  if (!where.empty()) manifest.write(where);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return execute(args, true);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const acctest::ValidationError& e) {
    std::cerr << "invalid data: " << e.what() << '\n';
    return cli::kExitData;
  } catch (const acctest::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return cli::kExitNumeric;
  } catch (const acctest::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return cli::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitNumeric;
  }
}
