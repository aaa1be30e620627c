#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsedrift/ensemble.hpp"
#include "sparsedrift/evaluation.hpp"
#include "sparsedrift/imputation.hpp"
#include "sparsedrift/missingness.hpp"
#include "sparsedrift/reports.hpp"
#include "sparsedrift/streamgen.hpp"

namespace sparsedrift {

enum class DataSource { generate, csv };

/// One experiment: a matrix of seeds x sparsity levels. See README for the
/// key = value file format.
struct ExperimentConfig {
  std::string name = "experiment";
  DataSource source = DataSource::generate;
  std::filesystem::path csv_path;
  std::filesystem::path drift_file;
  ClassificationStreamSpec stream;
  DriftSpec drift;
  bool shuffle = false;

  Mechanism mechanism = Mechanism::mcar;
  std::vector<double> levels{0.0};
  /// Empty = every feature except the MAR driver.
  std::vector<Eigen::Index> targets;
  std::optional<Eigen::Index> driver;

  double alpha = 0.05;
  bool allow_mcar = false;

  /// Empty = select among `candidates` on the data.
  std::optional<ImputationMethod> imputer;
  std::vector<ImputationMethod> candidates{ImputationMethod::mean(), ImputationMethod::median(),
                                           ImputationMethod::mode(), ImputationMethod::zero(),
                                           ImputationMethod::knn(5),  ImputationMethod::knn(50),
                                           ImputationMethod::knn(100)};
  std::size_t min_complete_rows = 50;

  std::vector<DetectorKind> detectors{std::begin(kAllDetectors), std::end(kAllDetectors)};
  bool run_ensemble = true;
  EnsemblePreset preset = EnsemblePreset::gradual;
  /// Members, window, threshold and the per-detector parameters shared by all runs.
  EnsembleConfig ensemble = EnsembleConfig::gradual();

  std::size_t adi_floor = 250;
  double c1 = 1.0;
  double c2 = 0.0;

  std::vector<std::uint64_t> seeds{1};
  std::size_t jobs = 1;
  std::filesystem::path out = "results";

  /// Parsed key/value pairs, used for the config hash.
  std::map<std::string, std::string> entries;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Parse key = value lines; `base_dir` resolves relative paths.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
/// Parse a file, then apply SPARSEDRIFT_OUT / SPARSEDRIFT_JOBS from the environment.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_environment(ExperimentConfig& config);

/// 64-bit FNV-1a over the sorted entries, excluding `out` and `jobs`.
std::uint64_t config_hash(const ExperimentConfig& config);

struct DetectorRun {
  std::string detector;
  RunTrace trace;
  MetricsReport metrics;
  std::optional<RiskReport> risk;
};

struct CellResult {
  std::uint64_t seed = 0;
  double level = 0.0;
  bool ok = false;
  std::string error;
  MissingnessVerdict verdict;
  std::optional<SelectionReport> selection;
  std::optional<ImputationMethod> imputer;
  std::size_t fallback_cells = 0;
  ImputationBiasReport bias;
  std::vector<DetectorRun> runs;

  std::string id() const;
};

/// The stream every cell starts from before sparsity injection.
LabeledStream base_stream(const ExperimentConfig& config, std::uint64_t seed);

/// Full pipeline for one (seed, level) cell. Stage errors are caught and
/// recorded in the result.
CellResult run_cell(const ExperimentConfig& config, const LabeledStream& base, std::uint64_t seed,
                    double level);

struct ReportBundle {
  std::vector<CellResult> cells;
  Json aggregate;
  std::uint64_t config_hash = 0;

  bool all_ok() const;
};

/// Runs every cell on a pool of `config.jobs` workers; cells are ordered by
/// seed, then level.
ReportBundle run_experiment(const ExperimentConfig& config);

/// Per detector and metric: mean, sample std and count over successful cells,
/// overall and per sparsity level.
Json aggregate_cells(const std::vector<CellResult>& cells);

/// Cell reports, aggregate.json and manifest.json under `config.out`.
void write_bundle(const ReportBundle& bundle, const ExperimentConfig& config);

struct SweepRow {
  std::size_t window = 0;
  std::optional<double> mean_tpd;
  std::optional<double> mean_add;
  double objective = 0.0;
  bool best = false;
  std::size_t failed_cells = 0;
};

/// Ensemble-only experiment per vote window. The best row minimises
/// |mean TPD - 1|, ties broken by lower mean ADD, then by smaller window.
std::vector<SweepRow> sweep_vote_window(const ExperimentConfig& config, const std::vector<std::size_t>& windows);

inline const std::vector<std::size_t> kDefaultSweepWindows{250, 500, 1000, 2000, 4000};

}  // namespace sparsedrift
