#include "scanorder/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "scanorder/coupling.hpp"
#include "scanorder/errors.hpp"
#include "scanorder/lumped.hpp"
#include "scanorder/model_io.hpp"
#include "scanorder/spectral.hpp"
#include "scanorder/suites.hpp"

namespace scanorder {

using nlohmann::json;

namespace {

const std::vector<std::string> kAnalysisOrder{"spectral", "mixing", "lumped", "coupling", "verify"};
const std::vector<std::uint64_t> kFillTimes{1, 2, 4, 8, 16, 32};

// Shortest text that round-trips to the same double.
std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}
std::string num(std::uint64_t x) { return std::to_string(x); }
std::string num(std::size_t x, int) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw NumericalError("internal: csv row width mismatch");
    rows_.push_back(std::move(row));
  }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string render() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Long-format collector: experiment,model_id,sampler,unit,metric,value.
class Results {
 public:
  void add(const std::string& experiment, const std::string& model_id, const std::string& sampler,
           const std::string& unit, const std::string& metric, const std::string& value) {
    table_.add({experiment, model_id, sampler, unit, metric, value});
  }
  const Table& table() const noexcept { return table_; }

 private:
  Table table_{{"experiment", "model_id", "sampler", "unit", "metric", "value"}};
};

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    const auto tmp = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp.string());
      out << content;
      if (!out) throw Error("failed writing " + tmp.string());
    }
    pending_tmp_ = tmp;
    std::filesystem::rename(tmp, path);
    pending_tmp_.clear();
    files_.push_back(path);
  }

  void discard() noexcept {
    std::error_code ec;
    if (!pending_tmp_.empty()) std::filesystem::remove(pending_tmp_, ec);
    for (const auto& f : files_) std::filesystem::remove(f, ec);
    files_.clear();
  }

  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path pending_tmp_;
  std::vector<std::filesystem::path> files_;
};

Kernel sampler_kernel(const BipartiteModel& model, const StateSpace& space, Sampler sampler, bool lazy) {
  if (sampler == Sampler::random_update) return random_update_kernel(model, space, lazy);
  return scan_kernels(model, space).alternating;
}

MixingReport mix(const ExperimentConfig& c, const Kernel& k, const Eigen::VectorXd& pi) {
  if (c.mixing_method == "doubling") return mixing_time_by_doubling(k, pi, c.threshold, c.t_max);
  return exact_mixing_time(k, pi, c.threshold, c.t_max);
}

std::vector<Sampler> samplers_of(const ExperimentConfig& c) {
  std::vector<Sampler> out;
  for (const auto& s : c.samplers) out.push_back(parse_sampler(s));
  return out;
}

const ModelSpec& require_model(const std::optional<ModelSpec>& spec, const std::string& analysis) {
  if (!spec) throw Error(analysis + " analysis needs a model (--model or --model-file)");
  return *spec;
}

void run_spectral(const ExperimentConfig& c, const ModelSpec& spec, OutputSet& out, Results& results) {
  Table table({"model_id", "sampler", "unit", "gap", "relaxation_time", "reversible"});
  const StateSpace space = enumerate_state_space(spec.model, c.cap);
  for (Sampler s : samplers_of(c)) {
    const Kernel k = sampler_kernel(spec.model, space, s, c.lazy);
    const SpectralReport r = relaxation_time(k, space);
    const std::string unit = to_string(k.unit);
    table.add({spec.id, to_string(s), unit, num(r.gap), num(r.relaxation_time), flag(r.reversible)});
    results.add("spectral", spec.id, to_string(s), unit, "gap", num(r.gap));
    results.add("spectral", spec.id, to_string(s), unit, "relaxation_time", num(r.relaxation_time));
    results.add("spectral", spec.id, to_string(s), unit, "reversible", flag(r.reversible));
  }
  out.write("spectral.csv", table.render());
}

void run_mixing(const ExperimentConfig& c, const ModelSpec& spec, OutputSet& out, Results& results) {
  Table summary({"model_id", "sampler", "unit", "mixing_time", "threshold", "truncated"});
  Table curve({"model_id", "sampler", "unit", "t", "worst_tv"});
  const StateSpace space = enumerate_state_space(spec.model, c.cap);
  for (Sampler s : samplers_of(c)) {
    const Kernel k = sampler_kernel(spec.model, space, s, c.lazy);
    const MixingReport r = mix(c, k, space.pi());
    const std::string unit = to_string(k.unit);
    summary.add({spec.id, to_string(s), unit, num(r.mixing_time), num(r.threshold), flag(r.truncated)});
    for (const auto& [t, tv] : r.tv_curve) curve.add({spec.id, to_string(s), unit, num(t), num(tv)});
    results.add("mixing", spec.id, to_string(s), unit, "mixing_time", num(r.mixing_time));
    results.add("mixing", spec.id, to_string(s), unit, "truncated", flag(r.truncated));
  }
  out.write("mixing.csv", summary.render());
  out.write("mixing_curve.csv", curve.render());
}

void run_lumped(const ExperimentConfig& c, const std::optional<ModelSpec>& spec, OutputSet& out,
                Results& results) {
  if (!spec || !spec->hardcore_n) throw Error("lumped analysis needs a hardcore_knn model");
  const std::size_t lo = *spec->hardcore_n;
  const std::size_t hi = std::max(lo, c.lumped_n_max);
  Table table({"model_id", "sampler", "unit", "gap", "relaxation_time", "mixing_time", "truncated"});
  for (std::size_t n = lo; n <= hi; ++n) {
    const LumpedSpace space(n);
    const std::string id = "hardcore_knn_lumped:" + std::to_string(n);
    for (Sampler s : samplers_of(c)) {
      const Kernel k = s == Sampler::random_update ? lumped_ru_kernel(n, c.lazy) : lumped_as_kernel(n);
      const SpectralReport r = relaxation_time(k, space.pi());
      const MixingReport m = mixing_time_by_doubling(k, space.pi(), c.threshold, c.t_max);
      const std::string unit = to_string(k.unit);
      table.add({id, to_string(s), unit, num(r.gap), num(r.relaxation_time), num(m.mixing_time), flag(m.truncated)});
      results.add("lumped", id, to_string(s), unit, "gap", num(r.gap));
      results.add("lumped", id, to_string(s), unit, "relaxation_time", num(r.relaxation_time));
      results.add("lumped", id, to_string(s), unit, "mixing_time", num(m.mixing_time));
    }
  }
  out.write("lumped.csv", table.render());
}

void run_coupling(const ExperimentConfig& c, const ModelSpec& spec, OutputSet& out, Results& results) {
  Table summary({"model_id", "sampler", "replicates", "mean", "median", "q90", "truncated_count",
                 "sandwich_violations"});
  Table samples({"model_id", "sampler", "replicate", "coalescence_updates", "truncated"});
  for (Sampler s : samplers_of(c)) {
    CouplingOptions options;
    options.sampler = s;
    options.seed = *c.seed;
    options.replicates = c.replicates;
    options.max_updates = c.max_updates;
    options.lazy = c.coupling_lazy;
    const CouplingReport r = grand_coupling_time(spec.model, options);
    summary.add({spec.id, to_string(s), num(r.replicates, 0), num(r.mean), num(r.median), num(r.q90),
                 num(r.truncated_count, 0), num(r.sandwich_violations)});
    for (std::size_t i = 0; i < r.runs.size(); ++i)
      samples.add({spec.id, to_string(s), num(i, 0), num(r.runs[i].coalescence_updates), flag(r.runs[i].truncated)});
    const char* unit = to_string(StepUnit::variable_update);
    results.add("coupling", spec.id, to_string(s), unit, "mean", num(r.mean));
    results.add("coupling", spec.id, to_string(s), unit, "median", num(r.median));
    results.add("coupling", spec.id, to_string(s), unit, "q90", num(r.q90));
    results.add("coupling", spec.id, to_string(s), unit, "truncated_count", num(r.truncated_count, 0));
  }
  out.write("coupling.csv", summary.render());
  out.write("coupling_samples.csv", samples.render());
}

void run_verify(const ExperimentConfig& c, const std::optional<ModelSpec>& spec, OutputSet& out,
                Results& results) {
  std::vector<NamedModel> models;
  if (spec) {
    models.push_back({spec->id, spec->model});
  } else {
    models = random_rbm_suite(*c.seed, c.trials);
  }

  if (c.suite == "relaxation") {
    Table table({"model_id", "state_count", "t_rel_as", "t_rel_ru", "holds", "contraction_lhs", "contraction_rhs",
                 "contraction_holds"});
    for (const auto& m : models) {
      const RelaxationComparison r = compare_relaxation_times(m.model, c.cap, c.lazy);
      const double rhs = r.random_update_norm * r.random_update_norm;
      table.add({m.id, num(r.state_count, 0), num(r.t_rel_as), num(r.t_rel_ru), flag(r.holds),
                 num(r.reversibilized_as_norm), num(rhs), flag(r.contraction_holds)});
      results.add("verify.relaxation", m.id, "alternating_scan", "epoch", "relaxation_time", num(r.t_rel_as));
      results.add("verify.relaxation", m.id, "random_update", "variable_update", "relaxation_time", num(r.t_rel_ru));
      results.add("verify.relaxation", m.id, "", "", "holds", flag(r.holds));
      results.add("verify.relaxation", m.id, "", "", "contraction_holds", flag(r.contraction_holds));
    }
    out.write("verify.csv", table.render());
  } else if (c.suite == "mixing") {
    Table table({"model_id", "state_count", "pi_min", "t_rel_ru", "t_rel_as", "t_mix_ru", "t_mix_as",
                 "relaxation_sandwich", "nonreversible_bound", "mixing_comparison", "truncated"});
    for (const auto& m : models) {
      const MixingBoundsReport r = verify_mixing_bounds(m.model, c.cap, c.threshold, c.lazy, c.t_max);
      table.add({m.id, num(r.state_count, 0), num(r.pi_min), num(r.t_rel_ru), num(r.t_rel_as), num(r.t_mix_ru),
                 num(r.t_mix_as), flag(r.relaxation_sandwich), flag(r.nonreversible_bound),
                 flag(r.mixing_comparison), flag(r.truncated)});
      results.add("verify.mixing", m.id, "", "", "all_hold", flag(r.all_hold()));
    }
    out.write("verify.csv", table.render());
  } else if (c.suite == "fill") {
    Table table({"model_id", "sampler", "unit", "reversibilized_gap", "min_slack", "holds"});
    for (const auto& m : models) {
      const StateSpace space = enumerate_state_space(m.model, c.cap);
      for (Sampler s : samplers_of(c)) {
        const Kernel k = sampler_kernel(m.model, space, s, c.lazy);
        const FillReport r = verify_fill_inequality(k, space.pi(), kFillTimes);
        table.add({m.id, to_string(s), to_string(k.unit), num(r.reversibilized_gap), num(r.min_slack), flag(r.holds)});
        results.add("verify.fill", m.id, to_string(s), to_string(k.unit), "min_slack", num(r.min_slack));
      }
    }
    out.write("verify.csv", table.render());
  } else {
    throw Error("unknown verify suite '" + c.suite + "'");
  }
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json doc{{"analyses", c.analyses},
           {"model", c.model},
           {"samplers", c.samplers},
           {"lazy", c.lazy},
           {"threshold", c.threshold},
           {"t_max", c.t_max},
           {"mixing_method", c.mixing_method},
           {"max_updates", c.max_updates},
           {"replicates", c.replicates},
           {"coupling_lazy", c.coupling_lazy},
           {"seed", c.seed ? json(*c.seed) : json(nullptr)},
           {"cap", c.cap},
           {"lumped_n_max", c.lumped_n_max},
           {"suite", c.suite},
           {"trials", c.trials},
           {"out_dir", c.out_dir}};
  return doc;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error("config must be a JSON object");
  ExperimentConfig c;
  try {
    c.analyses = doc.at("analyses").get<std::vector<std::string>>();
    c.model = doc.value("model", json(nullptr));
    c.samplers = doc.value("samplers", c.samplers);
    c.lazy = doc.value("lazy", c.lazy);
    c.threshold = doc.value("threshold", c.threshold);
    c.t_max = doc.value("t_max", c.t_max);
    c.mixing_method = doc.value("mixing_method", c.mixing_method);
    c.max_updates = doc.value("max_updates", c.max_updates);
    c.replicates = doc.value("replicates", c.replicates);
    c.coupling_lazy = doc.value("coupling_lazy", c.coupling_lazy);
    if (doc.contains("seed") && !doc["seed"].is_null()) c.seed = doc["seed"].get<std::uint64_t>();
    c.cap = doc.value("cap", c.cap);
    c.lumped_n_max = doc.value("lumped_n_max", c.lumped_n_max);
    c.suite = doc.value("suite", c.suite);
    c.trials = doc.value("trials", c.trials);
    c.out_dir = doc.value("out_dir", c.out_dir);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.analyses.empty()) throw Error("no analyses selected");
  std::set<std::string> seen;
  for (const auto& a : c.analyses) {
    if (std::find(kAnalysisOrder.begin(), kAnalysisOrder.end(), a) == kAnalysisOrder.end())
      throw Error("unknown analysis '" + a + "'");
    if (!seen.insert(a).second) throw Error("analysis '" + a + "' listed twice");
  }
  if (c.samplers.empty()) throw Error("no samplers selected");
  for (const auto& s : c.samplers) parse_sampler(s);
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw Error("threshold must lie in (0, 1)");
  if (c.t_max < 1) throw Error("t_max must be at least 1");
  if (c.mixing_method != "iterate" && c.mixing_method != "doubling")
    throw Error("mixing method must be 'iterate' or 'doubling'");
  if (c.cap < 1) throw Error("cap must be positive");
  if (c.replicates < 1) throw Error("replicates must be positive");
  const bool has_model = !c.model.is_null();
  if (seen.count("coupling") && !c.seed) throw Error("coupling analysis needs --seed");
  if (seen.count("verify")) {
    if (c.suite != "relaxation" && c.suite != "mixing" && c.suite != "fill")
      throw Error("unknown verify suite '" + c.suite + "'");
    if (!has_model && !c.seed) throw Error("verify suite over random instances needs --seed");
    if (!has_model && c.trials < 1) throw Error("trials must be positive");
  }
}

RunOutcome run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::filesystem::path dir = config.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(config.out_dir);
  std::filesystem::create_directories(dir);

  std::optional<ModelSpec> spec;
  if (!config.model.is_null()) spec = model_from_json(config.model);

  OutputSet out(dir);
  Results results;
  try {
    for (const auto& analysis : kAnalysisOrder) {
      if (std::find(config.analyses.begin(), config.analyses.end(), analysis) == config.analyses.end()) continue;
      try {
        if (analysis == "spectral") run_spectral(config, require_model(spec, analysis), out, results);
        if (analysis == "mixing") run_mixing(config, require_model(spec, analysis), out, results);
        if (analysis == "lumped") run_lumped(config, spec, out, results);
        if (analysis == "coupling") run_coupling(config, require_model(spec, analysis), out, results);
        if (analysis == "verify") run_verify(config, spec, out, results);
      } catch (const NumericalError& e) {
        throw NumericalError(analysis + ": " + e.what());
      } catch (const Error& e) {
        throw Error(analysis + ": " + e.what());
      }
    }
    out.write("results.csv", results.table().render());
    out.write("manifest.json", to_json(config).dump(2) + "\n");
  } catch (...) {
    out.discard();
    throw;
  }
  return RunOutcome{out.files()};
}

}  // namespace scanorder
