#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dms/analysis.hpp"
#include "dms/distribution.hpp"
#include "dms/model.hpp"
#include "dms/propagator.hpp"

// File formats shared by every command: distribution CSV (columns q, p and
// optionally count; header mandatory), JSON payloads, and the run manifest
// written next to every output.  Decimals are printed with 17 significant
// digits so a rewrite of a parsed file is byte-identical.

namespace dms::io {

inline constexpr const char* kToolVersion = "dms 0.1.0";

std::string format_double(double x);  // %.17g

// ---- distribution CSV ----
void write_distribution_csv(std::ostream& os, const DegreeDistribution& d,
                            const std::map<std::int64_t, std::int64_t>* counts = nullptr);
void write_distribution_csv(const std::filesystem::path& path, const DegreeDistribution& d,
                            const std::map<std::int64_t, std::int64_t>* counts = nullptr);

// Header-driven: columns may appear in any order; unknown columns rejected.
// Throws schema_error naming row and column on malformed input.
DegreeDistribution read_distribution_csv(std::istream& is,
                                         std::map<std::int64_t, double>* counts_out = nullptr);
DegreeDistribution read_distribution_csv(const std::filesystem::path& path,
                                         std::map<std::int64_t, double>* counts_out = nullptr);

// ---- other CSV payloads ----
void write_convergence_csv(std::ostream& os, const ConvergenceSeries& series);
void write_first_passage_csv(std::ostream& os, const FirstPassageTable& table, std::int64_t q);
void write_edges_csv(std::ostream& os,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

// ---- JSON payloads ----
std::string distribution_json(const DegreeDistribution& d, const ModelParams* params);
std::string comparison_report_json(const ComparisonReport& rep);

// ---- run manifest ----
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::optional<std::uint64_t> seed;
    std::string started_at;
    std::string finished_at;
    std::string version = kToolVersion;
    std::vector<std::string> outputs;
    std::string extra_json;  // per-command payload, already serialized
};

std::string manifest_path(const std::filesystem::path& output);

// Atomic: writes to a temp file in the target directory, then renames.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

std::string iso8601_now();

}  // namespace dms::io
