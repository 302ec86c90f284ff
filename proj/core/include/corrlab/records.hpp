#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corrlab/experiment_config.hpp"

namespace corrlab {

inline constexpr int kSchemaVersion = 1;

struct Metric {
    std::string name;
    double value;
    std::string unit;  // units or scale annotation
};

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Check {
    std::string name;
    bool passed;
    double measured;
    double threshold;
    double margin;  // positive when passing
    std::string detail;
};

struct ResultRecord {
    ExperimentKind kind = ExperimentKind::ratios_sweep;
    std::string config_hash;
    std::vector<Metric> metrics;
    std::vector<Series> series;
    std::vector<Check> checks;
    std::vector<std::string> warnings;

    bool all_passed() const;
    const Check* find_check(const std::string& name) const;
    const Metric* find_metric(const std::string& name) const;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string code_version;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, bool> checks;
};

std::string code_version();
std::string utc_timestamp();

std::string format_double(double v);  // 17 significant digits
std::string series_csv(const Series& s);
std::string summary_json(const ResultRecord& record);  // includes its own checksum
std::string manifest_json(const RunManifest& manifest);

// writes config.json, summary.json, series_*.csv and manifest.json into a
// staging directory and renames it onto dir
void write_run(const std::filesystem::path& dir, const ExperimentConfig& cfg,
               const ResultRecord& record, const RunManifest& manifest);

struct LoadedRecord {
    std::filesystem::path dir;
    ResultRecord record;
    bool integrity_ok = false;
    std::string problem;
};

LoadedRecord load_record(const std::filesystem::path& dir);

}  // namespace corrlab
