#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace acctest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

// Bad command-line usage that CLI11 itself cannot detect.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// What a command read and wrote; serialized next to its outputs so the run
// can be replayed. Holds nothing that varies between identical runs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // tokens after the subcommand, as replayed
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  void write(const std::string& path) const;
};

struct TestOptions {
  std::string input;
  std::string method = "forwardstop";
  double alpha = 0.1;
  std::string rule;  // "", "plain" or "plus"
  std::optional<double> plus_c;
  std::optional<std::size_t> shift_grid;
  std::optional<double> mfdp_c;
  std::string output;
};

struct SimulateOptions {
  std::uint64_t seed = 0;
  std::size_t n = 1000;
  std::size_t n_nonnull = 100;
  double mu1 = 3.0;
  double mu2 = 3.0;
  std::size_t trials = 50;
  std::vector<double> alphas;
  std::vector<std::string> methods;
  std::string prefix = "sim";
  bool paths = true;
  unsigned threads = 1;
};

struct PowerOptions {
  std::string curve;
  double alpha = 0.0;
  std::optional<double> mu;
  std::string spec;
  std::string density;
  double delta = 1e-6;
};

struct DosageOptionsCli {
  std::string input;
  std::size_t synthetic_genes = 0;
  std::size_t synthetic_signal = 0;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  std::vector<std::string> methods;
  bool baselines = true;
  std::string output;
  std::string records;
  unsigned threads = 1;
};

int run_test(const TestOptions& o, RunManifest& m, std::ostream& out);
int run_simulate(const SimulateOptions& o, RunManifest& m, std::ostream& out);
int run_power(const PowerOptions& o, RunManifest& m, std::ostream& out);
int run_dosage(const DosageOptionsCli& o, RunManifest& m, std::ostream& out);

/// Built-in invariant suite; one line per check. Returns kExitOk when all pass.
int run_validate(std::ostream& out, unsigned threads);

}  // namespace acctest::cli
