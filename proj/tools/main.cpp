#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pipeline.hpp"

namespace {

using qclab::cli::Command;
using qclab::cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStage = 2;

qclab::Window parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--window", "expected A,B");
  try {
    std::size_t used = 0;
    const std::string lhs = text.substr(0, comma);
    const std::string rhs = text.substr(comma + 1);
    const double a = std::stod(lhs, &used);
    if (used != lhs.size()) throw std::invalid_argument(lhs);
    const double b = std::stod(rhs, &used);
    if (used != rhs.size()) throw std::invalid_argument(rhs);
    if (!(b > a)) throw CLI::ValidationError("--window", "need A < B");
    return {a, b};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--window", "expected two numbers A,B, got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qclab: zeros of exponential sums, their diffraction measures and the way back"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string input;
  std::string window;
  std::string out_dir = ".";
  std::optional<double> height, grid, t;

  struct Spec {
    const char* name;
    Command command;
    const char* help;
  };
  const Spec specs[] = {
      {"analyze", Command::analyze, "full forward and inverse pipeline"},
      {"zeros", Command::zeros, "real zeros of an exponential sum"},
      {"diffract", Command::diffract, "diffraction atoms by the log-derivative and Bohr routes"},
      {"poisson", Command::poisson, "Poisson summation residual with a Gaussian test function"},
      {"reconstruct", Command::reconstruct, "rebuild the exponential sum from atoms"},
      {"apset", Command::apset, "density, counting constants, almost periods"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--input", input, "input CSV (omega,re,im | point,multiplicity | gamma,re,im)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--window", window, "window A,B for zero search or zero-set input");
    sub->add_option("--height", height, "height s for the log-derivative expansion");
    sub->add_option("--cutoff", cfg.cutoff, "frequency cutoff for atoms")->capture_default_str();
    sub->add_option("--grid", grid, "Bohr grid step (default: adaptive search)");
    sub->add_option("--T", t, "Bohr averaging length");
    sub->add_option("--eps", cfg.epsilon, "almost-period tolerance")->capture_default_str();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for randomized sampling")->capture_default_str();
    sub->callback([&cfg, c = s.command] { cfg.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.input = input;
    cfg.output_dir = out_dir;
    cfg.height = height;
    cfg.grid_step = grid;
    cfg.bohr_t = t;
    if (!window.empty()) cfg.window = parse_window(window);
    qclab::cli::apply_environment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "qclab: " << e.what() << '\n';
    return kExitUsage;
  }

  qclab::cli::Report report;
  try {
    report = qclab::cli::run_pipeline(cfg);
  } catch (const qclab::cli::StageError& e) {
    std::cerr << qclab::cli::error_document(e).dump(2) << '\n';
    return kExitStage;
  } catch (const qclab::Error& e) {
    std::cerr << "qclab: " << e.what() << '\n';
    return e.kind() == qclab::ErrorKind::io ? kExitUsage : kExitStage;
  }

  try {
    for (const auto& p : qclab::cli::emit_outputs(report, cfg.output_dir)) std::cout << p.string() << '\n';
  } catch (const qclab::Error& e) {
    std::cerr << "qclab: " << e.what() << '\n';
    return kExitUsage;
  }
  for (const auto& w : report.json["input"]["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
  return kExitOk;
}
