#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sparsedrift/csv.hpp"
#include "sparsedrift/errors.hpp"
#include "sparsedrift/experiment.hpp"
#include "sparsedrift/random.hpp"

namespace sd = sparsedrift;

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kCellExit = 4;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> jobs;
  std::string preset;
};

sd::ExperimentConfig experiment_config(const Common& common) {
  sd::ExperimentConfig config = common.config.empty() ? sd::parse_config("") : sd::load_config(common.config);
  if (common.config.empty()) sd::apply_environment(config);
  if (common.seed) {
    config.seeds = {*common.seed};
    config.entries["seeds"] = std::to_string(*common.seed);
  }
  if (!common.out.empty()) config.out = common.out;
  if (common.jobs) config.jobs = *common.jobs;
  if (!common.preset.empty()) {
    const auto preset = sd::parse_ensemble_preset(common.preset);
    config.preset = preset;
    config.ensemble.members = sd::EnsembleConfig::preset(preset).members;
    config.entries["ensemble.preset"] = common.preset;
    config.entries.erase("ensemble.members");
  }
  return config;
}

void emit(const sd::Json& json, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << json.dump(2) << '\n';
  } else {
    sd::write_json(out, json);
  }
}

std::filesystem::path drift_sidecar(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".drift.json");
  return p;
}

int run_gen(const Common& common) {
  const auto config = experiment_config(common);
  if (config.source != sd::DataSource::generate) throw sd::ConfigError("gen needs source = generate");
  config.validate();
  const auto stream = sd::base_stream(config, config.seeds.front());
  const std::filesystem::path out = common.out.empty() ? "stream.csv" : common.out;
  sd::write_stream_csv(out, stream);
  if (!stream.drift.positions.empty()) sd::write_drift_json(drift_sidecar(out), stream.drift);
  return 0;
}

struct SparsifyArgs {
  std::string in, out, mechanism = "mcar", targets;
  double rate = 0.1;
  std::optional<long> driver;
  std::uint64_t seed = 1;
};

std::vector<Eigen::Index> parse_targets(const std::string& text, Eigen::Index cols, std::optional<long> driver) {
  std::vector<Eigen::Index> targets;
  if (text.empty()) {
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!driver || j != *driver) targets.push_back(j);
    return targets;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) targets.push_back(std::stol(item));
  return targets;
}

int run_sparsify(const SparsifyArgs& a) {
  auto data = sd::read_stream_csv(a.in);
  sd::SparsityPlan plan;
  plan.mechanism = sd::parse_mechanism(a.mechanism);
  plan.rate = a.rate;
  plan.seed = a.seed;
  if (a.driver) plan.driver = *a.driver;
  plan.targets = parse_targets(a.targets, data.stream.features.cols(), a.driver);
  data.stream.features = sd::inject_sparsity(data.stream.features, plan);
  sd::write_stream_csv(a.out, data.stream, data.header);
  return 0;
}

int run_analyze(const std::string& in, double alpha, bool allow_mcar, const std::string& out) {
  const auto data = sd::read_stream_csv(in);
  const auto& x = data.stream.features;
  sd::Json j;
  j["verdict"] = sd::to_json(sd::classify_missingness(x, alpha, allow_mcar));
  sd::Json fits = sd::Json::array();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    sd::Json f;
    f["feature"] = data.header[static_cast<std::size_t>(c)];
    const auto column = x.observed_column(c);
    f["fit"] = column.empty() ? sd::Json(nullptr) : sd::to_json(sd::identify_distribution(column));
    fits.push_back(f);
  }
  j["distributions"] = fits;
  emit(j, out);
  return 0;
}

int run_impute(const std::string& in, const std::string& out, const std::string& method_text,
               const std::string& candidates_text, std::uint64_t seed, double alpha, const std::string& report) {
  auto data = sd::read_stream_csv(in);
  const auto& x = data.stream.features;
  sd::ImputationMethod method;
  sd::Json j;
  if (method_text == "auto") {
    const auto verdict = sd::classify_missingness(x, alpha);
    std::vector<sd::ImputationMethod> candidates = sd::ExperimentConfig{}.candidates;
    if (!candidates_text.empty()) {
      candidates.clear();
      std::stringstream ss(candidates_text);
      std::string item;
      while (std::getline(ss, item, ',')) candidates.push_back(sd::parse_imputation_method(item));
    }
    const auto selection = sd::select_best_imputer(x, verdict, candidates, seed);
    method = selection.winner;
    j["verdict"] = sd::to_json(verdict);
    j["selection"] = sd::to_json(selection);
  } else {
    method = sd::parse_imputation_method(method_text);
  }
  auto outcome = sd::impute(x, method);
  j["method"] = method.name();
  j["fallback_cells"] = outcome.fallback_cells;
  j["bias"] = sd::to_json(sd::imputation_bias_report(x, outcome.data));
  data.stream.features = std::move(outcome.data);
  sd::write_stream_csv(out, data.stream, data.header);
  if (!report.empty()) emit(j, report);
  return 0;
}

int run_detect(const Common& common, const std::string& in, const std::string& detectors_text, std::size_t window) {
  const auto data = sd::read_stream_csv(in);
  auto config = experiment_config(common);
  if (window) config.ensemble.window = window;
  std::vector<std::string> names;
  std::stringstream ss(detectors_text);
  std::string item;
  while (std::getline(ss, item, ',')) names.push_back(item);
  const std::filesystem::path out = common.out.empty() ? "detect" : common.out;
  std::filesystem::create_directories(out);
  std::ofstream events(out / "events.csv", std::ios::binary);
  events << "index,detector,signal\n";
  for (const auto& name : names) {
    std::unique_ptr<sd::DriftDetector> detector;
    if (name == "ensemble") detector = std::make_unique<sd::EnsembleDetector>(config.ensemble);
    else detector = sd::make_detector(sd::parse_detector_kind(name), config.ensemble.detectors);
    sd::GaussianNaiveBayes learner;
    const auto trace = sd::prequential_run(data.stream, learner, detector.get());
    sd::write_event_csv(events, trace, name, false);
    std::ofstream t(out / ("trace_" + name + ".csv"), std::ios::binary);
    sd::write_trace_csv(t, trace);
  }
  return 0;
}

int run_eval(const std::vector<std::string>& traces, const std::string& drift_file, std::size_t adi_floor,
             const std::string& out) {
  sd::DriftSpec drift;
  if (!drift_file.empty()) drift = sd::read_drift_json(drift_file);
  sd::Json j = sd::Json::object();
  for (const auto& path : traces) {
    std::ifstream in(path);
    if (!in) throw sd::SchemaError("cannot open trace " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("index,prediction,truth,loss", 0) != 0) throw sd::SchemaError(path + ": not a trace file");
    sd::RunTrace trace;
    trace.drift = drift;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) f.push_back(cell);
      if (f.size() < 7) throw sd::ParseError(path + ": short row " + std::to_string(row), row);
      trace.losses.push_back(std::stod(f[3]));
      trace.signals.push_back(f[5] == "drift" ? sd::Signal::drift : f[5] == "warning" ? sd::Signal::warning
                                                                                      : sd::Signal::in_control);
    }
    if (trace.losses.empty()) throw sd::SchemaError(path + ": empty trace");
    j[std::filesystem::path(path).stem().string()] = sd::to_json(sd::evaluate(trace, adi_floor));
  }
  emit(j, out);
  return 0;
}

sd::Json sweep_json(const std::vector<sd::SweepRow>& rows) {
  sd::Json table = sd::Json::array();
  for (const auto& r : rows) {
    sd::Json j;
    j["window"] = r.window;
    j["mean_tpd"] = r.mean_tpd ? sd::Json(*r.mean_tpd) : sd::Json(nullptr);
    j["mean_add"] = r.mean_add ? sd::Json(*r.mean_add) : sd::Json(nullptr);
    j["objective"] = std::isfinite(r.objective) ? sd::Json(r.objective) : sd::Json(nullptr);
    j["failed_cells"] = r.failed_cells;
    j["best"] = r.best;
    table.push_back(j);
  }
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept-drift detection on sparse streams"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", common.config, "Experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Run a single seed");
    sub->add_option("--out", common.out, "Output path");
    if (with_jobs) sub->add_option("--jobs", common.jobs, "Worker threads");
    sub->add_option("--preset", common.preset, "Ensemble preset")->check(CLI::IsMember({"abrupt", "gradual"}));
  };

  auto* gen = app.add_subcommand("gen", "Generate a labelled stream CSV (+ drift sidecar)");
  add_common(gen, false);

  SparsifyArgs sp;
  auto* sparsify = app.add_subcommand("sparsify", "Inject missing values into a CSV stream");
  sparsify->add_option("--in", sp.in)->required()->check(CLI::ExistingFile);
  sparsify->add_option("--out", sp.out)->required();
  sparsify->add_option("--mechanism", sp.mechanism)->check(CLI::IsMember({"mcar", "mar", "mnar", "MCAR", "MAR", "MNAR"}));
  sparsify->add_option("--rate", sp.rate);
  sparsify->add_option("--targets", sp.targets, "Comma-separated feature indices");
  sparsify->add_option("--driver", sp.driver, "MAR driver feature index");
  sparsify->add_option("--seed", sp.seed);

  std::string in, out_file, method = "auto", candidates, report, detectors = "ensemble", drift_file;
  std::vector<std::string> traces;
  double alpha = 0.05;
  bool allow_mcar = false;
  std::uint64_t seed = 1;
  std::size_t window = 0;
  std::size_t adi_floor = 250;
  std::vector<std::size_t> windows;

  auto* analyze = app.add_subcommand("analyze", "Classify missingness and fit distributions");
  analyze->add_option("--in", in)->required()->check(CLI::ExistingFile);
  analyze->add_option("--alpha", alpha);
  analyze->add_flag("--allow-mcar", allow_mcar);
  analyze->add_option("--out", out_file, "JSON report (default stdout)");

  auto* imp = app.add_subcommand("impute", "Fill missing cells");
  imp->add_option("--in", in)->required()->check(CLI::ExistingFile);
  imp->add_option("--out", out_file)->required();
  imp->add_option("--method", method, "auto, mean, median, mode, zero, knn:K");
  imp->add_option("--candidates", candidates, "Candidates for auto selection");
  imp->add_option("--seed", seed);
  imp->add_option("--alpha", alpha);
  imp->add_option("--report", report, "Selection/bias JSON report");

  auto* detect = app.add_subcommand("detect", "Prequential run of detectors over a complete CSV stream");
  detect->add_option("--in", in)->required()->check(CLI::ExistingFile);
  detect->add_option("--detectors", detectors, "Comma-separated detectors and/or 'ensemble'");
  detect->add_option("--window", window, "Ensemble vote window");
  add_common(detect, false);

  auto* eval = app.add_subcommand("eval", "Metrics from trace CSVs");
  eval->add_option("--trace", traces)->required()->check(CLI::ExistingFile);
  eval->add_option("--drift", drift_file, "Drift sidecar JSON")->check(CLI::ExistingFile);
  eval->add_option("--adi-floor", adi_floor);
  eval->add_option("--out", out_file, "JSON report (default stdout)");

  auto* run = app.add_subcommand("run", "Full pipeline over the experiment matrix");
  add_common(run, true);

  auto* sweep = app.add_subcommand("sweep", "Ensemble metrics per vote window");
  add_common(sweep, true);
  sweep->add_option("--windows", windows, "Vote windows")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*gen) return run_gen(common);
    if (*sparsify) return run_sparsify(sp);
    if (*analyze) return run_analyze(in, alpha, allow_mcar, out_file);
    if (*imp) return run_impute(in, out_file, method, candidates, seed, alpha, report);
    if (*detect) return run_detect(common, in, detectors, window);
    if (*eval) return run_eval(traces, drift_file, adi_floor, out_file);
    if (*run) {
      const auto config = experiment_config(common);
      const auto bundle = sd::run_experiment(config);
      sd::write_bundle(bundle, config);
      std::size_t failed = 0;
      for (const auto& cell : bundle.cells)
        if (!cell.ok) {
          ++failed;
          std::cerr << "cell " << cell.id() << " failed: " << cell.error << '\n';
        }
      std::cout << bundle.cells.size() - failed << "/" << bundle.cells.size() << " cells ok, reports in "
                << config.out.string() << '\n';
      return failed ? kCellExit : 0;
    }
    if (*sweep) {
      const auto config = experiment_config(common);
      const auto rows = sd::sweep_vote_window(config, windows.empty() ? sd::kDefaultSweepWindows : windows);
      std::filesystem::create_directories(config.out);
      sd::write_json(config.out / "sweep.json", sweep_json(rows));
      std::ofstream csv(config.out / "sweep.csv", std::ios::binary);
      csv << "window,mean_tpd,mean_add,objective,best\n";
      bool failed = false;
      for (const auto& r : rows) {
        csv << r.window << ',' << (r.mean_tpd ? sd::format_double(*r.mean_tpd) : "NA") << ','
            << (r.mean_add ? sd::format_double(*r.mean_add) : "NA") << ','
            << (std::isfinite(r.objective) ? sd::format_double(r.objective) : "NA") << ',' << int(r.best) << '\n';
        std::cout << "W=" << r.window << " tpd=" << (r.mean_tpd ? sd::format_double(*r.mean_tpd) : "NA")
                  << " add=" << (r.mean_add ? sd::format_double(*r.mean_add) : "NA") << (r.best ? "  <- best" : "")
                  << '\n';
        failed = failed || r.failed_cells;
      }
      return failed ? kCellExit : 0;
    }
  } catch (const sd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const sd::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const sd::SchemaError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const sd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCellExit;
  }
  return 0;
}
