#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "latgeo/bounds.hpp"
#include "latgeo/frame.hpp"
#include "latgeo/generator.hpp"
#include "latgeo/metrics.hpp"
#include "latgeo/optimize.hpp"
#include "latgeo/samples.hpp"

namespace latgeo {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input data.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that reads back to the same double; locale independent.
std::string format_number(double x);

/// Strict parse of a whole field as a double; false on any trailing junk.
bool parse_number(std::string_view text, double& out);

enum class DataFormat { csv, json };

/// From the file extension (.json, else csv).
DataFormat guess_format(const std::filesystem::path& path);

// Frames are stored as {dim, count, side, directions} and re-validated on load.
Json frame_to_json(const SimplexFrame& frame);
SimplexFrame frame_from_json(const Json& j);
void write_frame(const std::filesystem::path& path, const SimplexFrame& frame);
SimplexFrame read_frame(const std::filesystem::path& path);

/// Points from CSV (comma separated, optional header, optional "label"
/// column) or JSON (an array of rows, or {"points": [...], "labels": [...]}).
SampleSet parse_samples_csv(std::string_view text, Provenance provenance);
SampleSet parse_samples_json(std::string_view text, Provenance provenance);
SampleSet read_samples(const std::filesystem::path& path, Provenance provenance);

/// Mode centres: same formats, JSON may also use the key "modes".
ModeSet read_modes(const std::filesystem::path& path);

/// CSV with header x0..x{D-1} and a trailing label column when labels exist.
std::string samples_to_csv(const SampleSet& samples);
void write_samples(const std::filesystem::path& path, const SampleSet& samples);

/// {seed, n, epsilon, L} next to a generated batch.
Json generation_sidecar(const GeneratorStar& gstar, std::size_t n, std::uint64_t seed);

/// {"schema": "1", metric, value, ci, seed (when set), params}.
Json report_to_json(const MetricReport& report);

Json bound_to_json(const BoundReport& bound);
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& bound);

Json estimate_to_json(const MeasureEstimate& e);
Json sandwich_to_json(const SandwichReport& r);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace latgeo
