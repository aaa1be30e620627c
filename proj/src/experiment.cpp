#include "sparsedrift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "sparsedrift/csv.hpp"
#include "sparsedrift/errors.hpp"
#include "sparsedrift/random.hpp"

namespace sparsedrift {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double to_double(const std::string& key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
  return value;
}

std::uint64_t to_unsigned(const std::string& key, std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

bool to_bool(const std::string& key, std::string_view text) {
  const auto v = lower(text);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(text) + "'");
}

template <class T>
std::vector<T> to_list(const std::string& key, std::string_view text, T (*convert)(const std::string&, std::string_view)) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(convert(key, item));
  return out;
}

std::vector<std::uint64_t> to_seeds(const std::string& key, std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(to_unsigned(key, item));
      continue;
    }
    const auto first = to_unsigned(key, trim(std::string_view(item).substr(0, dots)));
    const auto last = to_unsigned(key, trim(std::string_view(item).substr(dots + 2)));
    if (last < first) throw ConfigError(key + ": empty range '" + item + "'");
    for (auto s = first; s <= last; ++s) seeds.push_back(s);
  }
  return seeds;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class T>
Setter number(T DetectorConfig::*group, double T::*field) {
  return [group, field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.ensemble.detectors.*group.*field = to_double(k, v);
  };
}

template <class T>
Setter count(T DetectorConfig::*group, std::size_t T::*field) {
  return [group, field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.ensemble.detectors.*group.*field = to_unsigned(k, v);
  };
}

const std::map<std::string, Setter>& detector_setters() {
  using DC = DetectorConfig;
  static const std::map<std::string, Setter> setters = {
      {"page_hinkley.delta", number(&DC::page_hinkley, &PageHinkley::Config::delta)},
      {"page_hinkley.threshold", number(&DC::page_hinkley, &PageHinkley::Config::threshold)},
      {"page_hinkley.alpha", number(&DC::page_hinkley, &PageHinkley::Config::alpha)},
      {"ddm.warm_up", count(&DC::ddm, &Ddm::Config::warm_up)},
      {"ddm.warning_level", number(&DC::ddm, &Ddm::Config::warning_level)},
      {"ddm.drift_level", number(&DC::ddm, &Ddm::Config::drift_level)},
      {"eddm.warm_up_errors", count(&DC::eddm, &Eddm::Config::warm_up_errors)},
      {"eddm.warning_ratio", number(&DC::eddm, &Eddm::Config::warning_ratio)},
      {"eddm.drift_ratio", number(&DC::eddm, &Eddm::Config::drift_ratio)},
      {"hddm_a.drift_confidence", number(&DC::hddm_a, &HddmA::Config::drift_confidence)},
      {"hddm_a.warning_confidence", number(&DC::hddm_a, &HddmA::Config::warning_confidence)},
      {"hddm_w.lambda", number(&DC::hddm_w, &HddmW::Config::lambda)},
      {"hddm_w.drift_confidence", number(&DC::hddm_w, &HddmW::Config::drift_confidence)},
      {"hddm_w.warning_confidence", number(&DC::hddm_w, &HddmW::Config::warning_confidence)},
      {"adwin.delta", number(&DC::adwin, &Adwin::Config::delta)},
      {"adwin.max_buckets", count(&DC::adwin, &Adwin::Config::max_buckets)},
      {"adwin.min_sub_window", count(&DC::adwin, &Adwin::Config::min_sub_window)},
      {"adwin.min_window", count(&DC::adwin, &Adwin::Config::min_window)},
      {"adwin.clock", count(&DC::adwin, &Adwin::Config::clock)},
      {"kswin.window", count(&DC::kswin, &Kswin::Config::window)},
      {"kswin.recent", count(&DC::kswin, &Kswin::Config::recent)},
      {"kswin.alpha", number(&DC::kswin, &Kswin::Config::alpha)},
      {"kswin.seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ensemble.detectors.kswin.seed = to_unsigned(k, v);
       }},
      {"kswin.compare_all_older", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ensemble.detectors.kswin.compare_all_older = to_bool(k, v);
       }},
  };
  return setters;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

std::vector<Eigen::Index> to_indices(const std::string& key, std::string_view text) {
  std::vector<Eigen::Index> out;
  for (const auto& item : split_list(text)) out.push_back(static_cast<Eigen::Index>(to_unsigned(key, item)));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  if (levels.empty()) throw ConfigError("sparsity.levels: at least one level is required");
  for (double l : levels)
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("sparsity.levels: each level must be in [0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("missingness.alpha must be in (0,1)");
  if (!imputer && candidates.empty()) throw ConfigError("imputer.candidates: empty candidate list");
  if (!imputer && min_complete_rows < 1) throw ConfigError("imputer.min_complete_rows must be >= 1");
  if (detectors.empty() && !run_ensemble) throw ConfigError("detectors: nothing to run");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(c1 >= c2 && c2 >= 0.0)) throw ConfigError("risk costs: need c1 >= c2 >= 0");
  if (run_ensemble) ensemble.validate();
  for (auto kind : kAllDetectors) make_detector(kind, ensemble.detectors);
  if (source == DataSource::csv) {
    if (csv_path.empty()) throw ConfigError("csv.path is required for source = csv");
    if (!std::filesystem::exists(csv_path)) throw ConfigError("csv.path: " + csv_path.string() + " does not exist");
    if (!drift_file.empty() && !std::filesystem::exists(drift_file))
      throw ConfigError("csv.drift_file: " + drift_file.string() + " does not exist");
  } else {
    if (stream.instances < 2) throw ConfigError("stream.instances must be >= 2");
    if (stream.features < 1) throw ConfigError("stream.features must be >= 1");
    try {
      drift.validate(stream.instances);
    } catch (const SpecError& e) {
      throw ConfigError(std::string("drift: ") + e.what());
    }
    const Eigen::Index d = stream.features;
    if (mechanism == Mechanism::mar && d < 2) throw ConfigError("sparsity: MAR needs at least two features");
    for (auto t : targets)
      if (t >= d) throw ConfigError("sparsity.targets: feature index out of range");
    if (driver && *driver >= d) throw ConfigError("sparsity.driver: feature index out of range");
  }
  if (driver && std::find(targets.begin(), targets.end(), *driver) != targets.end())
    throw ConfigError("sparsity.driver must not be a target");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = lower(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!c.entries.emplace(key, value).second) throw ConfigError("config: duplicate key '" + key + "'");
  }

  std::optional<std::vector<DetectorKind>> members;
  bool preset_given = false;
  for (const auto& [key, value] : c.entries) {
    if (key == "name") {
      c.name = value;
    } else if (key == "source") {
      const auto v = lower(value);
      if (v == "generate") c.source = DataSource::generate;
      else if (v == "csv") c.source = DataSource::csv;
      else throw ConfigError("source: expected generate or csv");
    } else if (key == "csv.path") {
      c.csv_path = resolve(base_dir, value);
    } else if (key == "csv.drift_file") {
      c.drift_file = resolve(base_dir, value);
    } else if (key == "stream.instances") {
      c.stream.instances = to_unsigned(key, value);
    } else if (key == "stream.features") {
      c.stream.features = static_cast<Eigen::Index>(to_unsigned(key, value));
    } else if (key == "stream.separation") {
      c.stream.separation = to_double(key, value);
    } else if (key == "stream.correlation") {
      c.stream.correlation = to_double(key, value);
    } else if (key == "stream.offset") {
      c.stream.offset = to_double(key, value);
    } else if (key == "stream.stddev") {
      c.stream.stddev = to_double(key, value);
    } else if (key == "drift.kind") {
      c.drift.kind = parse_drift_kind(value);
    } else if (key == "drift.positions") {
      c.drift.positions = to_list<std::uint64_t>(key, value, to_unsigned);
    } else if (key == "drift.widths") {
      c.drift.widths = to_list<std::uint64_t>(key, value, to_unsigned);
    } else if (key == "shuffle") {
      c.shuffle = to_bool(key, value);
    } else if (key == "sparsity.mechanism") {
      c.mechanism = parse_mechanism(value);
    } else if (key == "sparsity.levels") {
      c.levels = to_list<double>(key, value, to_double);
    } else if (key == "sparsity.targets") {
      c.targets = to_indices(key, value);
    } else if (key == "sparsity.driver") {
      c.driver = static_cast<Eigen::Index>(to_unsigned(key, value));
    } else if (key == "missingness.alpha") {
      c.alpha = to_double(key, value);
    } else if (key == "missingness.allow_mcar") {
      c.allow_mcar = to_bool(key, value);
    } else if (key == "imputer") {
      if (lower(value) == "auto") c.imputer.reset();
      else c.imputer = parse_imputation_method(value);
    } else if (key == "imputer.candidates") {
      c.candidates.clear();
      for (const auto& item : split_list(value)) c.candidates.push_back(parse_imputation_method(item));
    } else if (key == "imputer.min_complete_rows") {
      c.min_complete_rows = to_unsigned(key, value);
    } else if (key == "detectors") {
      c.detectors.clear();
      c.run_ensemble = false;
      for (const auto& item : split_list(value)) {
        const auto v = lower(item);
        if (v == "ensemble") c.run_ensemble = true;
        else if (v == "all") c.detectors.assign(std::begin(kAllDetectors), std::end(kAllDetectors));
        else c.detectors.push_back(parse_detector_kind(v));
      }
    } else if (key == "ensemble.preset") {
      c.preset = parse_ensemble_preset(value);
      preset_given = true;
    } else if (key == "ensemble.members") {
      members.emplace();
      for (const auto& item : split_list(value)) members->push_back(parse_detector_kind(lower(item)));
    } else if (key == "ensemble.window") {
      c.ensemble.window = to_unsigned(key, value);
    } else if (key == "ensemble.threshold") {
      c.ensemble.threshold = to_double(key, value);
    } else if (key == "metrics.adi_floor") {
      c.adi_floor = to_unsigned(key, value);
    } else if (key == "risk.c1") {
      c.c1 = to_double(key, value);
    } else if (key == "risk.c2") {
      c.c2 = to_double(key, value);
    } else if (key == "seeds") {
      c.seeds = to_seeds(key, value);
    } else if (key == "jobs") {
      c.jobs = to_unsigned(key, value);
    } else if (key == "out") {
      c.out = resolve(base_dir, value);
    } else if (auto it = detector_setters().find(key); it != detector_setters().end()) {
      it->second(c, key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (members) {
    if (preset_given && c.preset != EnsemblePreset::custom)
      throw ConfigError("ensemble.members requires ensemble.preset = custom");
    c.preset = EnsemblePreset::custom;
    c.ensemble.members = *members;
  } else if (c.preset == EnsemblePreset::custom) {
    throw ConfigError("ensemble.preset = custom requires ensemble.members");
  } else {
    c.ensemble.members = EnsembleConfig::preset(c.preset).members;
  }
  if (c.mechanism == Mechanism::mar && !c.driver && c.source == DataSource::generate)
    c.driver = c.stream.features - 1;
  c.validate();
  return c;
}

void apply_environment(ExperimentConfig& config) {
  if (const char* out = std::getenv("SPARSEDRIFT_OUT"); out && *out) config.out = out;
  if (const char* jobs = std::getenv("SPARSEDRIFT_JOBS"); jobs && *jobs)
    config.jobs = to_unsigned("SPARSEDRIFT_JOBS", jobs);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  auto config = parse_config(text.str(), path.parent_path().empty() ? "." : path.parent_path());
  apply_environment(config);
  return config;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [key, value] : config.entries) {
    if (key == "out" || key == "jobs") continue;
    feed(key);
    feed("=");
    feed(value);
    feed("\n");
  }
  return h;
}

std::string CellResult::id() const { return "seed-" + std::to_string(seed) + "_level-" + format_double(level); }

bool ReportBundle::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

LabeledStream base_stream(const ExperimentConfig& config, std::uint64_t seed) {
  LabeledStream s;
  if (config.source == DataSource::csv) {
    s = read_stream_csv(config.csv_path).stream;
    if (!config.drift_file.empty()) {
      s.drift = read_drift_json(config.drift_file);
      s.drift.validate(s.size());
    }
  } else {
    s = make_classification_stream(config.stream, mix_seed(seed, 0));
    if (!config.drift.positions.empty()) s = make_drift_stream(s, config.drift, mix_seed(seed, 1));
  }
  if (config.shuffle) s = shuffle_instances(s, mix_seed(seed, 4));
  return s;
}

namespace {

ImputationMethod tabulated_default(const MaskedMatrix& x, const MissingnessVerdict& verdict) {
  const FeatureVerdict* sparsest = nullptr;
  for (const auto& f : verdict.features)
    if (f.mechanism && (!sparsest || f.sparsity > sparsest->sparsity)) sparsest = &f;
  if (!sparsest) throw ImputationError("no incomplete feature to impute");
  if (x.cols() > 1) return default_method_for(DistributionFamily::multivariate_normal, *sparsest->mechanism, sparsest->sparsity);
  const auto column = x.observed_column(sparsest->feature);
  return default_method_for(identify_distribution(column).family(), *sparsest->mechanism, sparsest->sparsity);
}

}  // namespace

CellResult run_cell(const ExperimentConfig& config, const LabeledStream& base, std::uint64_t seed, double level) {
  CellResult r;
  r.seed = seed;
  r.level = level;
  try {
    LabeledStream s = base;
    MaskedMatrix x = s.features;
    if (level > 0.0) {
      SparsityPlan plan;
      plan.mechanism = config.mechanism;
      plan.rate = level;
      plan.seed = mix_seed(seed, 2);
      if (config.mechanism == Mechanism::mar) plan.driver = config.driver ? config.driver : Eigen::Index{x.cols() - 1};
      plan.targets = config.targets;
      if (plan.targets.empty())
        for (Eigen::Index j = 0; j < x.cols(); ++j)
          if (!plan.driver || j != *plan.driver) plan.targets.push_back(j);
      x = inject_sparsity(x, plan);
    }
    r.verdict = classify_missingness(x, config.alpha, config.allow_mcar);

    if (x.missing_count() > 0) {
      ImputationMethod method;
      if (config.imputer) {
        method = *config.imputer;
      } else {
        SelectionReport selection;
        try {
          selection = select_best_imputer(x, r.verdict, config.candidates, mix_seed(seed, 3), config.min_complete_rows);
        } catch (const SelectionError&) {
          selection = {};
          selection.winner = tabulated_default(x, r.verdict);
          selection.used_default = true;
        }
        method = selection.winner;
        r.selection = selection;
      }
      auto outcome = impute(x, method);
      r.imputer = method;
      r.fallback_cells = outcome.fallback_cells;
      r.bias = imputation_bias_report(x, outcome.data);
      x = std::move(outcome.data);
    }
    s.features = std::move(x);

    for (auto kind : config.detectors) {
      GaussianNaiveBayes learner;
      auto detector = make_detector(kind, config.ensemble.detectors);
      DetectorRun run{to_string(kind), prequential_run(s, learner, detector.get()), {}, {}};
      run.metrics = evaluate(run.trace, config.adi_floor);
      r.runs.push_back(std::move(run));
    }
    if (config.run_ensemble) {
      GaussianNaiveBayes learner;
      EnsembleDetector detector(config.ensemble);
      DetectorRun run{"ensemble", prequential_run(s, learner, &detector), {}, {}};
      run.metrics = evaluate(run.trace, config.adi_floor);
      run.risk = risk_report(run.trace, config.ensemble.members.size(), config.adi_floor, config.c1, config.c2,
                             config.ensemble.threshold);
      r.runs.push_back(std::move(run));
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.runs.clear();
  }
  return r;
}

ReportBundle run_experiment(const ExperimentConfig& config) {
  config.validate();
  ReportBundle bundle;
  bundle.config_hash = config_hash(config);

  std::optional<LabeledStream> shared;
  if (config.source == DataSource::csv && !config.shuffle) shared = base_stream(config, 0);

  struct Task {
    std::uint64_t seed;
    double level;
  };
  std::vector<Task> tasks;
  for (auto seed : config.seeds)
    for (double level : config.levels) tasks.push_back({seed, level});
  bundle.cells.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto [seed, level] = tasks[t];
      try {
        const LabeledStream base = shared ? *shared : base_stream(config, seed);
        bundle.cells[t] = run_cell(config, base, seed, level);
      } catch (const std::exception& e) {
        CellResult failed;
        failed.seed = seed;
        failed.level = level;
        failed.error = e.what();
        bundle.cells[t] = std::move(failed);
      }
    }
  };
  const std::size_t workers = std::min(config.jobs, tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  bundle.aggregate = aggregate_cells(bundle.cells);
  return bundle;
}

namespace {

struct Samples {
  std::vector<double> values;

  Json summary() const {
    Json j;
    const double n = static_cast<double>(values.size());
    if (values.empty()) {
      j["mean"] = nullptr;
      j["std"] = nullptr;
    } else {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      j["mean"] = mean;
      j["std"] = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    j["n"] = values.size();
    return j;
  }
};

const char* const kMetrics[] = {"accuracy", "add", "tpr", "tpd", "drift_count", "detections"};

std::optional<double> metric(const MetricsReport& m, std::string_view name) {
  if (name == "accuracy") return m.accuracy;
  if (name == "add") return m.detection.add;
  if (name == "tpr") return m.detection.tpr;
  if (name == "tpd") return m.detection.tpd;
  if (name == "drift_count") return static_cast<double>(m.detection.drift_count);
  return static_cast<double>(m.detection.detections);
}

Json summarize(const std::vector<const CellResult*>& cells) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, Samples>> table;
  for (const auto* cell : cells) {
    for (const auto& run : cell->runs) {
      if (!table.count(run.detector)) order.push_back(run.detector);
      auto& row = table[run.detector];
      for (const char* name : kMetrics)
        if (auto v = metric(run.metrics, name)) row[name].values.push_back(*v);
    }
  }
  Json j = Json::object();
  for (const auto& detector : order) {
    Json row;
    for (const char* name : kMetrics) row[name] = table[detector][name].summary();
    j[detector] = row;
  }
  return j;
}

}  // namespace

Json aggregate_cells(const std::vector<CellResult>& cells) {
  std::vector<const CellResult*> ok;
  std::vector<double> levels;
  for (const auto& c : cells) {
    if (!c.ok) continue;
    ok.push_back(&c);
    if (std::find(levels.begin(), levels.end(), c.level) == levels.end()) levels.push_back(c.level);
  }
  std::sort(levels.begin(), levels.end());
  Json j;
  j["cells"] = cells.size();
  j["failed_cells"] = cells.size() - ok.size();
  j["overall"] = summarize(ok);
  Json by_level = Json::object();
  for (double level : levels) {
    std::vector<const CellResult*> subset;
    for (const auto* c : ok)
      if (c->level == level) subset.push_back(c);
    by_level[format_double(level)] = summarize(subset);
  }
  j["levels"] = by_level;
  return j;
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string hex(std::uint64_t h) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

void write_cell(const CellResult& cell, const ExperimentConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json(dir / "verdict.json", to_json(cell.verdict));
  if (cell.selection) write_json(dir / "selection.json", to_json(*cell.selection));
  if (cell.imputer) write_json(dir / "bias.json", to_json(cell.bias));

  Json metrics;
  metrics["seed"] = cell.seed;
  metrics["level"] = cell.level;
  metrics["imputer"] = cell.imputer ? Json(cell.imputer->name()) : Json(nullptr);
  metrics["fallback_cells"] = cell.fallback_cells;
  Json detectors = Json::object();
  for (const auto& run : cell.runs) detectors[run.detector] = to_json(run.metrics);
  metrics["detectors"] = detectors;
  write_json(dir / "metrics.json", metrics);

  std::ofstream events(dir / "events.csv", std::ios::binary);
  events << "index,detector,signal\n";
  for (const auto& run : cell.runs) {
    write_event_csv(events, run.trace, run.detector, false);
    std::ofstream trace(dir / ("trace_" + run.detector + ".csv"), std::ios::binary);
    write_trace_csv(trace, run.trace);
    if (run.risk) {
      write_json(dir / "risk.json", to_json(*run.risk));
      std::ofstream ensemble(dir / "ensemble_events.csv", std::ios::binary);
      write_ensemble_event_csv(ensemble, run.trace, config.ensemble.threshold);
    }
  }
}

}  // namespace

void write_bundle(const ReportBundle& bundle, const ExperimentConfig& config) {
  const auto& out = config.out;
  std::filesystem::create_directories(out / "cells");
  Json cells = Json::array();
  for (const auto& cell : bundle.cells) {
    Json entry;
    entry["id"] = cell.id();
    entry["seed"] = cell.seed;
    entry["level"] = cell.level;
    entry["status"] = cell.ok ? "ok" : "failed";
    if (!cell.ok) entry["error"] = cell.error;
    cells.push_back(entry);
    if (cell.ok) write_cell(cell, config, out / "cells" / cell.id());
  }
  write_json(out / "aggregate.json", bundle.aggregate);

  Json manifest;
  manifest["name"] = config.name;
  manifest["config_hash"] = hex(bundle.config_hash);
  manifest["seeds"] = config.seeds;
  manifest["levels"] = config.levels;
  manifest["cells"] = cells;
  manifest["created"] = utc_timestamp();
  write_json(out / "manifest.json", manifest);
}

std::vector<SweepRow> sweep_vote_window(const ExperimentConfig& config, const std::vector<std::size_t>& windows) {
  if (windows.empty()) throw ConfigError("sweep: no window values");
  std::vector<SweepRow> rows;
  for (std::size_t w : windows) {
    ExperimentConfig c = config;
    c.detectors.clear();
    c.run_ensemble = true;
    c.ensemble.window = w;
    const auto bundle = run_experiment(c);
    SweepRow row;
    row.window = w;
    double tpd = 0.0;
    double add = 0.0;
    std::size_t n_tpd = 0;
    std::size_t n_add = 0;
    for (const auto& cell : bundle.cells) {
      if (!cell.ok) {
        ++row.failed_cells;
        continue;
      }
      const auto& m = cell.runs.back().metrics.detection;
      if (m.tpd) tpd += *m.tpd, ++n_tpd;
      if (m.add) add += *m.add, ++n_add;
    }
    if (n_tpd) row.mean_tpd = tpd / static_cast<double>(n_tpd);
    if (n_add) row.mean_add = add / static_cast<double>(n_add);
    row.objective = row.mean_tpd ? std::fabs(*row.mean_tpd - 1.0) : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  const auto inf = std::numeric_limits<double>::infinity();
  auto better = [inf](const SweepRow& a, const SweepRow& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    const double da = a.mean_add.value_or(inf);
    const double db = b.mean_add.value_or(inf);
    if (da != db) return da < db;
    return a.window < b.window;
  };
  std::min_element(rows.begin(), rows.end(), better)->best = true;
  return rows;
}

}  // namespace sparsedrift
