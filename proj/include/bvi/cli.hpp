#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvi/errors.hpp"
#include "bvi/problems.hpp"

namespace bvi::cli {

/// Invalid experiment configuration. `path` is a JSON pointer to the
/// offending value.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string path, const std::string& message)
      : InvalidArgument(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class MethodId { MirrorDescent, MirrorDescentDual, Apm, RestartedApm };

struct MethodSpec {
  MethodId id = MethodId::MirrorDescent;
  std::optional<double> mu;
  std::optional<double> M;
  std::size_t N = 0;  ///< mirror descent iterations
  double L0 = 1.0;
  std::optional<std::size_t> iterations;  ///< APM iteration limit
  std::optional<double> sum_threshold;    ///< APM sum threshold
  std::optional<double> eps;
  std::optional<double> R0_sq;
  std::optional<double> omega;
  std::optional<double> fixed_L;
  std::optional<Vector> x0;
};

struct OutputSpec {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::optional<std::filesystem::path> svg;
};

struct DiagnosticsSpec {
  std::size_t samples = 1000;
  bool vertices = true;
  bool include_trace = true;
  bool known_solution = true;
  std::size_t gap_stride = 1;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string problem_id;
  ProblemParams problem;
  MethodSpec method;
  OutputSpec outputs;
  DiagnosticsSpec diagnostics;
};

/// Validates against the config schema; throws ConfigError with the JSON
/// pointer of the first offending value.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string method_name(MethodId id);

/// Rendered outputs of one run, not yet written anywhere.
struct ExperimentOutput {
  std::string csv;
  std::string summary;
  std::optional<std::string> svg;
  std::size_t rows = 0;
};

/// Builds the problem, runs the method and renders CSV, summary JSON and the
/// optional SVG. Timing columns are filled only when BVI_RECORD_TIMING=1, so
/// outputs are otherwise byte-reproducible.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Output path with BVI_OUTPUT_DIR applied to relative paths.
std::filesystem::path resolve_output(const std::filesystem::path& p);

/// `solve`: exit 0 on success, 2 on config errors, 3 on numerical failure.
/// Files are written only after the run succeeds.
int run_solve(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-scale (y) line plot. Nonpositive or missing values are skipped.
std::string render_svg(const std::vector<Series>& series, const std::string& x_label);

/// Reads `columns` (plotted against `iter`) from each CSV.
std::vector<Series> read_csv_series(const std::vector<std::filesystem::path>& csvs,
                                    const std::vector<std::string>& columns);

/// `plot`: exit 0 on success, 2 on missing files or columns.
int run_plot(const std::vector<std::filesystem::path>& csvs, const std::vector<std::string>& columns,
             const std::filesystem::path& svg_path, std::ostream& out, std::ostream& err);

struct CheckOptions {
  ProblemParams params;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::optional<double> constant;
};

/// `check`: runs one property checker against a zoo problem and prints a
/// JSON report. Exit 0 when the check ran, 2 on bad arguments.
int run_check(const std::string& problem_id, const std::string& property, const CheckOptions& opts,
              std::ostream& out, std::ostream& err);

}  // namespace bvi::cli
