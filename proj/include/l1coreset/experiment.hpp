#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "l1coreset/data.hpp"
#include "l1coreset/losses.hpp"
#include "l1coreset/solve.hpp"
#include "l1coreset/weights.hpp"

namespace l1coreset::bench {

/// Sampling methods understood by the harness. "sketch" is reserved and
/// rejected with NotImplemented.
enum class Method { Lewis, L2s, Uniform };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct ExperimentConfig {
  // "synthetic:n=10000,d=10,skew=3,flip=0.1,seed=1", "libsvm:PATH" or "csv:PATH".
  std::string dataset = "synthetic:n=10000,d=10,skew=3,seed=1";
  std::string loss = "logistic";
  Regularizer reg;
  std::vector<Method> methods = {Method::Lewis, Method::L2s, Method::Uniform};
  std::vector<Index> sizes = {500, 1000, 2000, 4000, 8000};
  int trials = 100;
  std::uint64_t seed = 0;
  bool uniform_mix = true;
  std::size_t mu_budget = 1000;
  std::size_t histogram_bins = 30;
  LewisConfig lewis;
  SolveConfig solver;
  int threads = 0;  // 0: one per hardware thread
  std::string out_dir = "bench_out";

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

LabeledMatrix load_dataset(const std::string& spec);

enum class TrialStatus { Ok, Unconverged, Failed };

struct Cell {
  Index m = 0;
  double p25 = 0.0, p50 = 0.0, p75 = 0.0;
  std::vector<double> relative_loss;  // NaN for failed trials
  std::vector<int> iterations;
  std::vector<TrialStatus> status;

  std::size_t failures() const;
  std::size_t unconverged() const;
  bool operator==(const Cell&) const;
};

struct MethodResult {
  Method method = Method::Uniform;
  std::vector<Cell> cells;
  bool operator==(const MethodResult&) const = default;
};

struct HistogramEntry {
  std::string p_method;  // compared against lewis
  Histogram histogram;
};

struct ExperimentReport {
  nlohmann::json config;
  Index n = 0, d = 0;
  double beta_star_objective = 0.0;
  bool beta_star_converged = false;
  int beta_star_iterations = 0;
  double mu_hat = 0.0;
  std::string rng_algorithm;
  std::vector<MethodResult> methods;
  std::vector<HistogramEntry> histograms;
  // Wall-clock seconds per method; kept out of report.json so that file is
  // byte-deterministic. Written to timing.json instead.
  std::map<std::string, double> weight_seconds;

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
};

/// Nearest-rank percentile of already sorted values: the ceil(q/100 * N)-th.
double nearest_rank(const std::vector<double>& sorted, double q);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Json, Svg };
ReportFormat format_from_string(std::string_view name);

/// Writes report.csv / report.json / relative_loss.svg and hist_*.svg under
/// `dir`. Returns the paths written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir);

std::string report_csv(const ExperimentReport& report);

}  // namespace l1coreset::bench
