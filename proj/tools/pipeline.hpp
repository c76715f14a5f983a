#pragma once

// Orchestration behind the qclab command line: input loading, the staged
// forward/inverse pipeline, and the files written for a run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qclab/qclab.hpp"

namespace qclab::cli {

enum class Command { analyze, zeros, diffract, poisson, reconstruct, apset };

const char* to_string(Command c) noexcept;

struct RunConfig {
  Command command = Command::analyze;
  std::filesystem::path input;
  std::optional<Window> window;
  std::optional<double> height;
  double cutoff = 10.0;
  std::optional<double> grid_step;  // Bohr route: fixed grid instead of the search
  std::optional<double> bohr_t;
  double epsilon = 0.1;             // almost-period tolerance
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;

  double bohr_threshold = 0.1;
  double sigma = 1.0;
  double tail_tol = 1e-10;
  double t3_budget = 1e3;
  ZeroOptions zeros{};
  AlgebraOptions algebra{};
};

// Applies QCLAB_MAX_TERMS to the algebra capacity; invalid values throw
// std::invalid_argument.
void apply_environment(RunConfig& cfg);

// A failure inside one pipeline stage; `stage` names it, e.g. "diffraction/logderiv".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)), kind_(kind) {}
  const std::string& stage() const noexcept { return stage_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string stage_;
  ErrorKind kind_;
};

using InputValue = std::variant<ExpSum, ZeroSet, PointMeasure>;

struct LoadedInput {
  InputKind kind = InputKind::exp_sum;
  InputValue value;
  std::vector<std::string> warnings;
  std::optional<Window> zero_window;  // zero sets: the window used
  std::string window_source;          // "flag", "sidecar", "hull"
};

// Detects the format from the header. Zero-set windows come from `window`,
// then from a `<path>.json` sidecar, then from the padded hull of the points.
LoadedInput parse_inputs(const std::filesystem::path& path,
                         std::optional<InputKind> expected = {},
                         std::optional<Window> window = {},
                         const AlgebraOptions& opts = {});

struct PlotRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
};

struct Report {
  nlohmann::ordered_json json;
  std::optional<ZeroSet> zeros;
  std::optional<PointMeasure> measure;
  std::optional<ExpSum> rebuilt;
  std::vector<PlotRow> plot;
};

Report run_pipeline(const RunConfig& cfg);

// Writes report.json plus the CSV files present in the report; returns the
// paths written. Throws Error(io) on failure.
std::vector<std::filesystem::path> emit_outputs(const Report& report,
                                                const std::filesystem::path& dir);

// Structured error document for a failed stage.
nlohmann::ordered_json error_document(const StageError& e);

}  // namespace qclab::cli
