#pragma once
// CSV + JSON emission and config loading for the CLI. CSV is locale-free:
// '.' decimal, 17 significant digits (round-trip exact), LF endings, binary
// streams — reruns with the same inputs must be byte-identical.

#include <string>
#include <vector>

#include "qctx/optimizer.hpp"

namespace qctx {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest-round-trip decimal with up to 17 significant digits.
std::string format_double(double v);

// Writes header + rows; throws io_error on any stream failure.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string read_file(const std::string& path);

// JSON (de)serialization of OptimizerConfig with the canonical field names:
// starts, seed, penalty_schedule, max_iters, objective_tol, feasibility_tol.
// Parsing starts from `base` so a partial document overrides only the fields
// it names; unknown keys are rejected.
std::string config_to_json(const OptimizerConfig& cfg);
OptimizerConfig config_from_json(const std::string& text, const OptimizerConfig& base = {});

struct RunManifest {
    std::string command;         // e.g. "curve --inequality kcbs --bound lower ..."
    OptimizerConfig config;
    std::uint64_t seed = 0;
    std::string version;
    double duration_seconds = 0.0;
    std::string output_path;
    long rows = 0;
};

// Serializes the manifest next to its CSV as <output_path>.manifest.json.
void write_manifest(const RunManifest& m);

}  // namespace qctx
