#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spinlab::cli {

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  double at(int i) const { return steps < 2 ? start : start + (stop - start) * i / (steps - 1.0); }
};

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, double> params;        // numeric parameters
  std::map<std::string, std::string> options;  // enumerated parameters (initial, coupling)
  std::optional<SweepAxis> sweep;
  std::vector<std::string> formats = {"csv"};  // csv | json | svg
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

struct ResultTable {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string version;
  std::map<std::string, std::string> meta;  // resolved parameters, as text
  std::vector<std::string> columns;         // sweep axes first, then outputs alphabetically
  std::vector<std::vector<double>> rows;
};

// Parse command-line style tokens: <experiment> [--param k=v ...]
// [--sweep name:start:stop:steps] [--out dir] [--format csv,json,svg]
// [--seed n] [--config file].  Unknown parameter keys are rejected.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// Flat key=value text with '#' comments; reserved keys: experiment, sweep,
// format, seed, out.  Everything else is an experiment parameter.
ExperimentConfig parse_config_file(const std::string& path);

ResultTable execute(const ExperimentConfig& cfg);

// Write the table in each requested format; returns the file paths.
std::vector<std::string> render(const ResultTable& table, const std::vector<std::string>& formats,
                                const std::string& output_dir);

// Inverse of the CSV writer (used by the round-trip tests).
ResultTable parse_csv(const std::string& path);

// Serialisers used by render; exposed for tests.
std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);
std::string to_svg(const ResultTable& table);
ResultTable csv_from_string(const std::string& text);

int run_main(int argc, char** argv);

}  // namespace spinlab::cli
