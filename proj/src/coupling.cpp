#include "scanorder/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scanorder/errors.hpp"
#include "scanorder/parallel.hpp"
#include "scanorder/rng.hpp"

namespace scanorder {

const char* to_string(Sampler sampler) noexcept {
  return sampler == Sampler::random_update ? "random_update" : "alternating_scan";
}

Sampler parse_sampler(const std::string& name) {
  if (name == "random_update" || name == "ru") return Sampler::random_update;
  if (name == "alternating_scan" || name == "as") return Sampler::alternating_scan;
  throw Error("unknown sampler '" + name + "'");
}

void monotonicity_precondition(const BipartiteModel& model) {
  std::ostringstream problems;
  if (model.domain_size() != 2) problems << " domain size " << model.domain_size() << " is not Boolean;";
  if (model.constraint() != HardConstraint::none) problems << " hard constraints are not attractive;";
  if (model.domain_size() == 2) {
    const auto& edges = model.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& f = edges[i].table;
      const double interaction = f[0] + f[3] - f[1] - f[2];
      if (interaction < 0.0)
        problems << " edge #" << i << " (" << edges[i].u << "," << edges[i].v << ") has negative weight "
                 << interaction << ";";
    }
  }
  const std::string text = problems.str();
  if (!text.empty()) throw Error("model is not monotone:" + text);
}

namespace {

// Log-odds of value 1 at each site as a linear function of neighbours.
struct LocalFields {
  struct Term {
    std::size_t neighbor;
    double if_zero;
    double if_one;
  };
  std::vector<double> bias;
  std::vector<std::vector<Term>> terms;

  explicit LocalFields(const BipartiteModel& model) : bias(model.size()), terms(model.size()) {
    for (std::size_t v = 0; v < model.size(); ++v) bias[v] = model.unaries()[v][1] - model.unaries()[v][0];
    for (const Edge& e : model.edges()) {
      terms[e.u].push_back({e.v, model.factor(e, 1, 0) - model.factor(e, 0, 0),
                            model.factor(e, 1, 1) - model.factor(e, 0, 1)});
      terms[e.v].push_back({e.u, model.factor(e, 0, 1) - model.factor(e, 0, 0),
                            model.factor(e, 1, 1) - model.factor(e, 1, 0)});
    }
  }

  double prob_one(std::size_t x, const Configuration& c) const {
    double field = bias[x];
    for (const Term& t : terms[x]) field += c[t.neighbor] != 0 ? t.if_one : t.if_zero;
    return 1.0 / (1.0 + std::exp(-field));
  }
};

class CoupledPair {
 public:
  CoupledPair(const LocalFields& fields, Configuration upper, Configuration lower)
      : fields_(fields), upper_(std::move(upper)), lower_(std::move(lower)) {
    for (std::size_t i = 0; i < upper_.size(); ++i) {
      differing_ += upper_[i] != lower_[i];
      ordered_ = ordered_ && upper_[i] >= lower_[i];
    }
  }

  bool coalesced() const noexcept { return differing_ == 0; }

  // Returns false if the update broke the upper >= lower ordering.
  bool update(std::size_t x, double u) {
    const bool was_diff = upper_[x] != lower_[x];
    upper_[x] = u < fields_.prob_one(x, upper_) ? 1 : 0;
    lower_[x] = u < fields_.prob_one(x, lower_) ? 1 : 0;
    const bool is_diff = upper_[x] != lower_[x];
    differing_ = differing_ - (was_diff ? 1 : 0) + (is_diff ? 1 : 0);
    return !ordered_ || upper_[x] >= lower_[x];
  }

 private:
  const LocalFields& fields_;
  Configuration upper_;
  Configuration lower_;
  std::size_t differing_ = 0;
  bool ordered_ = true;
};

enum Slot : std::uint64_t { kSiteDraw = 0, kUniformDraw = 1, kLazyDraw = 2 };

double draw(std::uint64_t seed, std::uint64_t replicate, std::uint64_t t, Slot slot) {
  return to_unit_interval(counter_hash({seed, replicate, t, slot}));
}

}  // namespace

CoupledRun coupled_run(const BipartiteModel& model, Sampler sampler, Configuration upper,
                       Configuration lower, std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t max_updates, bool lazy, std::uint64_t suffix_check_updates) {
  monotonicity_precondition(model);
  model.require_valid(upper);
  model.require_valid(lower);
  const LocalFields fields(model);
  CoupledPair pair(fields, std::move(upper), std::move(lower));
  CoupledRun run;
  if (pair.coalesced()) return run;

  const std::size_t n = model.size();
  std::vector<std::size_t> scan = model.first_partition();
  scan.insert(scan.end(), model.second_partition().begin(), model.second_partition().end());

  // Performs update number t (0-based); returns whether the chains moved.
  auto step = [&](std::uint64_t t) {
    std::size_t x = 0;
    if (sampler == Sampler::random_update) {
      if (lazy && draw(seed, replicate, t, kLazyDraw) < 0.5) return;
      x = static_cast<std::size_t>(to_index(counter_hash({seed, replicate, t, kSiteDraw}), n));
    } else {
      x = scan[t % n];
    }
    if (!pair.update(x, draw(seed, replicate, t, kUniformDraw))) ++run.sandwich_violations;
  };

  std::uint64_t t = 0;
  bool met = false;
  if (sampler == Sampler::random_update) {
    while (t < max_updates) {
      step(t++);
      if (pair.coalesced()) {
        met = true;
        break;
      }
    }
  } else {
    while (t + n <= max_updates) {
      for (std::size_t i = 0; i < n; ++i) step(t++);
      if (pair.coalesced()) {
        met = true;
        break;
      }
    }
  }
  if (!met) {
    run.truncated = true;
    run.coalescence_updates = max_updates;
    return run;
  }
  run.coalescence_updates = t;
  for (std::uint64_t i = 0; i < suffix_check_updates; ++i) {
    step(t++);
    if (!pair.coalesced()) ++run.separations;
  }
  return run;
}

namespace {

double quantile(const std::vector<std::uint64_t>& sorted, double q) {
  if (sorted.empty()) return NAN;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) * (1.0 - frac) + static_cast<double>(sorted[hi]) * frac;
}

}  // namespace

CouplingReport grand_coupling_time(const BipartiteModel& model, const CouplingOptions& options) {
  monotonicity_precondition(model);
  if (options.replicates == 0) throw Error("replicates must be positive");
  CouplingReport report;
  report.sampler = options.sampler;
  report.replicates = options.replicates;
  report.runs.resize(options.replicates);

  const Configuration top(model.size(), 1);
  const Configuration bottom(model.size(), 0);
  parallel_for(options.replicates, [&](std::size_t r) {
    report.runs[r] = coupled_run(model, options.sampler, top, bottom, options.seed, r, options.max_updates,
                                 options.lazy, options.suffix_check_updates);
  });

  for (const CoupledRun& run : report.runs) {
    report.sandwich_violations += run.sandwich_violations;
    report.separations += run.separations;
    if (run.truncated) {
      ++report.truncated_count;
    } else {
      report.samples.push_back(run.coalescence_updates);
    }
  }
  std::vector<std::uint64_t> sorted = report.samples;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty()) {
    report.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  } else {
    report.mean = NAN;
  }
  report.median = quantile(sorted, 0.5);
  report.q90 = quantile(sorted, 0.9);
  return report;
}

}  // namespace scanorder
