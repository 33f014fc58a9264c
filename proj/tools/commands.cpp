#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acctest/accumulation.hpp"
#include "acctest/csv.hpp"
#include "acctest/density.hpp"
#include "acctest/dosage.hpp"
#include "acctest/errors.hpp"
#include "acctest/power_theory.hpp"
#include "acctest/seqtest.hpp"
#include "acctest/simlab.hpp"

namespace acctest::cli {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  return out;
}

double parse_cell(const std::string& text, std::size_t row, const std::string& column) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("row " + std::to_string(row) + ", column '" + column + "': not a number: '" + text +
                          "'");
  }
  return v;
}

bool parse_flag(const std::string& text, std::size_t row) {
  if (text == "1" || text == "true" || text == "TRUE" || text == "True") return true;
  if (text == "0" || text == "false" || text == "FALSE" || text == "False") return false;
  throw ValidationError("row " + std::to_string(row) + ", column 'is_null': expected 0/1 or true/false, got '" +
                        text + "'");
}

// Errors in method strings come from the command line, not from data.
Method parse_method(const std::string& text) {
  try {
    return Method::parse(text);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
}

std::vector<Method> parse_methods(const std::vector<std::string>& texts) {
  std::vector<Method> out;
  for (const auto& t : texts) out.push_back(parse_method(t));
  return out;
}

nlohmann::ordered_json method_names(const std::vector<Method>& methods) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& m : methods) j.push_back(m.to_string());
  return j;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "acctest";
  j["version"] = ACCTEST_VERSION;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["params"] = params;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void RunManifest::write(const std::string& path) const {
  auto out = open_output(path);
  out << to_json().dump(2) << '\n';
}

int run_test(const TestOptions& o, RunManifest& m, std::ostream& out) {
  auto in = open_input(o.input);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (buffer.str().find_first_not_of(" \t\r\n") == std::string::npos) {
    throw UsageError("input file '" + o.input + "' is empty; expected a CSV with a 'p' column");
  }
  const auto table = read_csv(buffer);
  const auto p_col = table.column("p");
  if (!p_col) throw ValidationError("input has no 'p' column");
  if (table.rows.empty()) throw UsageError("input file '" + o.input + "' has a header but no rows");
  const auto null_col = table.column("is_null");

  std::vector<double> p;
  NullMask mask;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    p.push_back(parse_cell(table.rows[r][*p_col], r + 1, "p"));
    if (null_col) mask.push_back(parse_flag(table.rows[r][*null_col], r + 1));
  }
  auto pvals = null_col ? OrderedPValues(p, mask) : OrderedPValues(p);
  if (o.shift_grid) pvals = shift_discrete_pvalues(pvals, *o.shift_grid);

  auto method = parse_method(o.method);
  if (o.rule == "plain") {
    method.rule = Rule::Plain;
  } else if (o.rule == "plus") {
    method.rule = Rule::PlusC;
  }
  if (o.plus_c) method.plus_c = *o.plus_c;
  if (method.rule == Rule::PlusC && !(method.plus_c > 0.0)) {
    if (!(method.spec.c() > 0.0)) throw UsageError("plus rule needs --c for " + method.spec.to_string());
    method.plus_c = method.spec.c();
  }
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");

  const auto result = accumulation_test(pvals, method, o.alpha);
  out << "method=" << method.to_string() << '\n';
  out << "alpha=" << fmt(o.alpha) << '\n';
  out << "n=" << pvals.size() << '\n';
  out << "k_hat=" << result.k_hat << '\n';
  if (pvals.has_mask()) {
    // Default c is the one in the finite-sample bound: C/alpha for bounded h,
    // and the C = 2 truncation otherwise.
    const double bound = method.spec.bounded() ? method.spec.upper_bound() : 2.0;
    const double c = o.mfdp_c.value_or(bound / o.alpha);
    out << "false_positives=" << false_positives(result.k_hat, pvals.null_mask()) << '\n';
    out << "fdp=" << fmt(fdp(result.k_hat, pvals)) << '\n';
    out << "mfdp_c=" << fmt(c) << '\n';
    out << "mfdp=" << fmt(mfdp(result.k_hat, pvals, c)) << '\n';
    const auto& nm = pvals.null_mask();
    if (std::find(nm.begin(), nm.end(), false) != nm.end()) {
      out << "power=" << fmt(power_of_cutoff(result.k_hat, pvals)) << '\n';
    } else {
      out << "power=undefined (no non-null hypotheses)\n";
    }
  }

  m.params["input"] = o.input;
  m.params["method"] = method.to_string();
  m.params["alpha"] = o.alpha;
  if (o.shift_grid) m.params["shift_grid"] = *o.shift_grid;
  m.inputs.push_back(o.input);
  if (!o.output.empty()) {
    auto f = open_output(o.output);
    f << "k,p," << (pvals.has_mask() ? "is_null," : "") << "fdp_hat\n";
    for (std::size_t k = 1; k <= pvals.size(); ++k) {
      f << k << ',' << fmt(pvals[k - 1]) << ',';
      if (pvals.has_mask()) f << (pvals.null_mask()[k - 1] ? 1 : 0) << ',';
      f << fmt(result.fdp_hat_path[k - 1]) << '\n';
    }
    m.outputs.push_back(o.output);
  }
  return kExitOk;
}

int run_simulate(const SimulateOptions& o, RunManifest& m, std::ostream& out) {
  SimConfig config;
  config.n = o.n;
  config.n_nonnull = o.n_nonnull;
  config.mu1 = o.mu1;
  config.mu2 = o.mu2;
  config.trials = o.trials;
  config.seed = o.seed;
  if (!o.alphas.empty()) config.alpha_grid = o.alphas;
  config.validate();
  const auto methods = o.methods.empty() ? default_methods() : parse_methods(o.methods);

  const auto result = simulate(config, methods, o.paths, o.threads);

  const std::string summary = o.prefix + "_summary.csv";
  {
    auto f = open_output(summary);
    write_summary_csv(f, result);
  }
  m.outputs.push_back(summary);
  if (o.paths) {
    const std::string paths = o.prefix + "_paths.csv";
    auto f = open_output(paths);
    write_path_csv(f, result);
    m.outputs.push_back(paths);
  }

  m.seed = o.seed;
  m.params["n"] = config.n;
  m.params["n_nonnull"] = config.n_nonnull;
  m.params["mu1"] = config.mu1;
  m.params["mu2"] = config.mu2;
  m.params["trials"] = config.trials;
  m.params["alpha_grid"] = config.alpha_grid;
  m.params["methods"] = method_names(methods);
  m.params["prefix"] = o.prefix;
  m.params["paths"] = o.paths;

  out << "trials=" << result.trials << " methods=" << result.methods.size()
      << " alphas=" << result.alpha_grid.size() << '\n';
  for (const auto& path : m.outputs) out << "wrote " << path << '\n';
  return kExitOk;
}

int run_power(const PowerOptions& o, RunManifest& m, std::ostream& out) {
  SignalCurve curve = [&] {
    try {
      return SignalCurve::parse(o.curve, o.delta);
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }();
  double mu = 0.0;
  if (o.mu) {
    mu = *o.mu;
  } else if (!o.spec.empty() && !o.density.empty()) {
    mu = nonnull_mean(AccumulationSpec::parse(o.spec), AlternativeDensity::parse(o.density));
    out << "mu=" << fmt(mu) << " (E h(p) for " << o.spec << " under " << o.density << ")\n";
  } else {
    throw UsageError("give --mu, or both --spec and --density");
  }

  m.params["curve"] = curve.to_string();
  m.params["alpha"] = o.alpha;
  m.params["mu"] = mu;
  m.params["delta"] = o.delta;

  const auto report = validate_signal_curve(curve, o.alpha);
  if (!report.structural()) {
    std::ostringstream msg;
    msg << "curve fails validation:";
    if (!report.nonincreasing) msg << " [f nonincreasing]";
    if (!report.count_nondecreasing) msg << " [t*f(t) nondecreasing]";
    msg << " first violation: " << report.message;
    throw ContractError(msg.str());
  }
  if (!report.slope_margin) {
    std::cerr << "warning: slope margin f' <= -delta fails (" << report.message
              << "); only the boundary cases T = 0 or T = 1 are defined\n";
  }
  const double t = asymptotic_threshold(curve, o.alpha, mu);
  out << "T=" << fmt(t) << '\n';
  if (!(curve(1.0) > 0.0)) throw ContractError("f(1) = 0: the limiting power T f(T)/f(1) is undefined");
  out << "power=" << fmt(asymptotic_power(curve, o.alpha, mu)) << '\n';
  return kExitOk;
}

int run_dosage(const DosageOptionsCli& o, RunManifest& m, std::ostream& out) {
  if (o.input.empty() == (o.synthetic_genes == 0)) {
    throw UsageError("give exactly one of --input or --synthetic");
  }
  const ExpressionMatrix matrix = [&] {
    if (!o.input.empty()) {
      auto in = open_input(o.input);
      m.inputs.push_back(o.input);
      return ExpressionMatrix::read_csv(in);
    }
    SyntheticDosage cfg;
    cfg.genes = o.synthetic_genes;
    cfg.signal_genes = o.synthetic_signal;
    cfg.seed = o.seed;
    m.seed = o.seed;
    return generate_dosage_matrix(cfg);
  }();

  DosageOptions opt;
  opt.methods = o.methods.empty() ? default_methods() : parse_methods(o.methods);
  if (o.alphas.empty()) {
    for (int i = 0; i <= 90; ++i) opt.alpha_grid.push_back(i / 100.0);
  } else {
    opt.alpha_grid = o.alphas;
  }
  opt.baselines = o.baselines;
  opt.threads = o.threads;
  const auto result = run_pipeline(matrix, opt);

  if (o.output.empty()) {
    write_dosage_csv(out, result.counts);
  } else {
    auto f = open_output(o.output);
    write_dosage_csv(f, result.counts);
    m.outputs.push_back(o.output);
  }
  if (!o.records.empty()) {
    auto f = open_output(o.records);
    f << "rank,gene_id,p_high,sign,p_init,p_final\n";
    for (std::size_t k = 0; k < result.records.size(); ++k) {
      const auto& r = result.records[k];
      f << k + 1 << ',' << csv_field(matrix.gene_ids()[r.original_index]) << ',' << fmt(r.p_high) << ','
        << (r.sign == Sign::Plus ? '+' : '-') << ',' << fmt(r.p_init) << ',' << fmt(r.p_final) << '\n';
    }
    m.outputs.push_back(o.records);
  }

  if (!o.input.empty()) m.params["input"] = o.input;
  if (o.synthetic_genes > 0) {
    m.params["synthetic_genes"] = o.synthetic_genes;
    m.params["synthetic_signal"] = o.synthetic_signal;
  }
  m.params["alpha_grid"] = opt.alpha_grid;
  m.params["methods"] = method_names(opt.methods);
  m.params["baselines"] = opt.baselines;
  m.params["partitions"] = result.partitions;
  return kExitOk;
}

}  // namespace acctest::cli
