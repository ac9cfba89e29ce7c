#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scanorder/errors.hpp"
#include "scanorder/experiment.hpp"
#include "scanorder/model_io.hpp"

namespace {

using nlohmann::json;
using scanorder::Error;
using scanorder::ExperimentConfig;

struct Options {
  std::string model;
  std::string model_file;
  std::optional<std::size_t> n, n1, n2, m;
  std::optional<double> weight_low, weight_high;
  std::optional<std::uint64_t> model_seed;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string config_file;
  std::vector<std::string> analyses;
  std::vector<std::string> samplers;
  bool non_lazy = false;
  bool coupling_lazy = false;
  std::optional<double> threshold;
  std::optional<std::uint64_t> t_max;
  std::string mixing_method;
  std::optional<std::size_t> cap;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> max_updates;
  std::string suite;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> n_max;
};

void add_options(CLI::App& app, Options& o) {
  app.add_option("--model", o.model, "built-in model kind: hardcore_knn, random_rbm, zero_rbm");
  app.add_option("--model-file", o.model_file, "JSON model file");
  app.add_option("--n", o.n, "hardcore_knn side size, or n1 = n2 for rbm kinds");
  app.add_option("--n1", o.n1, "first partition size");
  app.add_option("--n2", o.n2, "second partition size");
  app.add_option("--m", o.m, "number of random factors (random_rbm)");
  app.add_option("--weight-low", o.weight_low, "lower weight bound (random_rbm, default 0)");
  app.add_option("--weight-high", o.weight_high, "upper weight bound (random_rbm, default 0.2)");
  app.add_option("--model-seed", o.model_seed, "seed for random_rbm weights (default: --seed)");
  app.add_option("--out", o.out, std::string("output directory (default: $") + scanorder::kOutputDirEnv + " or .)");
  app.add_option("--seed", o.seed, "seed for randomized analyses");
  app.add_option("--config", o.config_file, "re-run from a manifest.json");
  app.add_option("--samplers", o.samplers, "random_update,alternating_scan")->delimiter(',');
  app.add_flag("--non-lazy", o.non_lazy, "use the non-lazy random-update kernel");
  app.add_flag("--coupling-lazy", o.coupling_lazy, "lazy random-update steps in the coupling");
  app.add_option("--threshold", o.threshold, "mixing threshold (default 1/(2e))");
  app.add_option("--t-max", o.t_max, "step limit for mixing times");
  app.add_option("--mixing-method", o.mixing_method, "iterate | doubling");
  app.add_option("--cap", o.cap, "state-space size limit");
  app.add_option("--replicates", o.replicates, "coupling replicates");
  app.add_option("--max-updates", o.max_updates, "coupling update limit per replicate");
  app.add_option("--suite", o.suite, "verify suite: relaxation | mixing | fill");
  app.add_option("--trials", o.trials, "number of random instances for verify");
  app.add_option("--n-max", o.n_max, "lumped: sweep n up to this value");
}

json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot open ") + what + " '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string(what) + " JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json builtin_model(const Options& o) {
  const auto n1 = o.n1 ? o.n1 : o.n;
  const auto n2 = o.n2 ? o.n2 : o.n;
  if (o.model == "hardcore_knn") {
    if (!o.n) throw Error("--model hardcore_knn needs --n");
    return {{"kind", "hardcore_knn"}, {"n", *o.n}};
  }
  if (o.model == "zero_rbm" || o.model == "random_rbm") {
    if (!n1 || !n2) throw Error("--model " + o.model + " needs --n or --n1/--n2");
    json doc{{"kind", o.model}, {"n1", *n1}, {"n2", *n2}};
    if (o.model == "random_rbm") {
      const auto seed = o.model_seed ? o.model_seed : o.seed;
      if (!seed) throw Error("--model random_rbm needs --model-seed or --seed");
      doc["seed"] = *seed;
      if (o.m) doc["m"] = *o.m;
      if (o.weight_low) doc["weight_low"] = *o.weight_low;
      if (o.weight_high) doc["weight_high"] = *o.weight_high;
    }
    return doc;
  }
  throw Error("unknown --model '" + o.model + "' (use --model-file for rbm, dbm and mrf)");
}

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig c;
  if (!o.config_file.empty()) {
    c = scanorder::config_from_json(read_json_file(o.config_file, "config"));
    if (!o.out.empty()) c.out_dir = o.out;
    return c;
  }
  c.analyses = o.analyses;
  if (!o.model.empty() && !o.model_file.empty()) throw Error("give either --model or --model-file, not both");
  if (!o.model_file.empty()) {
    c.model = read_json_file(o.model_file, "model");
  } else if (!o.model.empty()) {
    c.model = builtin_model(o);
  }
  if (!c.model.is_null()) scanorder::model_from_json(c.model);
  if (!o.samplers.empty()) c.samplers = o.samplers;
  c.lazy = !o.non_lazy;
  c.coupling_lazy = o.coupling_lazy;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.t_max) c.t_max = *o.t_max;
  if (!o.mixing_method.empty()) c.mixing_method = o.mixing_method;
  if (o.cap) c.cap = *o.cap;
  if (o.replicates) c.replicates = *o.replicates;
  if (o.max_updates) c.max_updates = *o.max_updates;
  c.seed = o.seed;
  if (!o.suite.empty()) c.suite = o.suite;
  if (o.trials) c.trials = *o.trials;
  if (o.n_max) c.lumped_n_max = *o.n_max;
  if (!o.out.empty()) {
    c.out_dir = o.out;
  } else if (const char* env = std::getenv(scanorder::kOutputDirEnv); env && *env) {
    c.out_dir = env;
  } else {
    c.out_dir = ".";
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated comparison of random-update and alternating-scan Gibbs samplers"};
  app.require_subcommand(0, 1);
  Options options;
  add_options(app, options);
  app.add_option("--analyses", options.analyses, "spectral,mixing,lumped,coupling,verify")->delimiter(',');

  for (const char* name : {"spectral", "mixing", "lumped", "coupling", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " analysis");
    add_options(*sub, options);
    sub->callback([&options, name] { options.analyses = {name}; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string stage = "configuration";
  try {
    ExperimentConfig config = resolve(options);
    stage = "run";
    const auto outcome = scanorder::run_experiment(config);
    for (const auto& f : outcome.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const scanorder::NumericalError& e) {
    std::cerr << "error (" << stage << "): " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << stage << "): " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error (" << stage << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error (" << stage << "): " << e.what() << '\n';
    return 2;
  }
}
