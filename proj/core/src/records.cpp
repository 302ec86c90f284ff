#include "corrlab/records.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef CORRLAB_VERSION
#define CORRLAB_VERSION "unknown"
#endif

namespace corrlab {

using nlohmann::json;
namespace fs = std::filesystem;

bool ResultRecord::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const Check* ResultRecord::find_check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const Metric* ResultRecord::find_metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

std::string code_version() { return CORRLAB_VERSION; }

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// nlohmann prints shortest round-trip floats; results files use 17 digits
void emit(const json& j, int depth, std::string& out) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + json(it.key()).dump() + ": ";
                emit(it.value(), depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                emit(j[i], depth + 1, out);
            }
            out += "\n" + close + "]";
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default: out += j.dump();
    }
}

std::string emit(const json& j) {
    std::string s;
    emit(j, 0, s);
    return s + "\n";
}

json summary_body(const ResultRecord& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = to_string(r.kind);
    j["config_hash"] = r.config_hash;
    j["metrics"] = json::array();
    for (const auto& m : r.metrics) j["metrics"].push_back({{"name", m.name}, {"value", m.value}, {"unit", m.unit}});
    j["checks"] = json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"measured", c.measured},
                               {"threshold", c.threshold},
                               {"margin", c.margin},
                               {"detail", c.detail}});
    j["series"] = json::array();
    for (const auto& s : r.series)
        j["series"].push_back({{"name", s.name},
                               {"file", "series_" + s.name + ".csv"},
                               {"columns", s.columns},
                               {"rows", s.rows.size()},
                               {"checksum", fnv1a_hex(series_csv(s))}});
    j["warnings"] = r.warnings;
    return j;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + p.string());
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

std::string series_csv(const Series& s) {
    std::string out;
    for (size_t i = 0; i < s.columns.size(); ++i) out += (i ? "," : "") + s.columns[i];
    out += "\n";
    for (const auto& row : s.rows) {
        for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

std::string summary_json(const ResultRecord& record) {
    json j = summary_body(record);
    j["checksum"] = fnv1a_hex(emit(j));
    return emit(j);
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["code_version"] = m.code_version;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["checks"] = m.checks;
    bool all = true;
    for (const auto& [k, v] : m.checks) all = all && v;
    j["all_passed"] = all;
    return emit(j);
}

void write_run(const fs::path& dir, const ExperimentConfig& cfg, const ResultRecord& record,
               const RunManifest& manifest) {
    fs::path target = fs::absolute(dir);
    fs::path parent = target.parent_path();
    fs::create_directories(parent);
    const std::string tag = std::to_string(::getpid());
    fs::path stage = parent / ("." + target.filename().string() + ".partial-" + tag);
    fs::remove_all(stage);
    fs::create_directories(stage);
    try {
        write_file(stage / "config.json", config_to_json(cfg));
        for (const auto& s : record.series) write_file(stage / ("series_" + s.name + ".csv"), series_csv(s));
        write_file(stage / "summary.json", summary_json(record));
        write_file(stage / "manifest.json", manifest_json(manifest));
    } catch (...) {
        fs::remove_all(stage);
        throw;
    }
    if (fs::exists(target)) {
        fs::path old = parent / ("." + target.filename().string() + ".old-" + tag);
        fs::remove_all(old);
        fs::rename(target, old);
        fs::rename(stage, target);
        fs::remove_all(old);
    } else {
        fs::rename(stage, target);
    }
}

LoadedRecord load_record(const fs::path& dir) {
    LoadedRecord out;
    out.dir = dir;
    json j;
    try {
        j = json::parse(read_file(dir / "summary.json"));
    } catch (const std::exception& e) {
        out.problem = std::string("unreadable summary: ") + e.what();
        return out;
    }
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
            out.problem = "unknown schema version";
            return out;
        }
        std::string stored = j.at("checksum").get<std::string>();
        json body = j;
        body.erase("checksum");
        if (fnv1a_hex(emit(body)) != stored) out.problem = "checksum mismatch in summary.json";

        auto& r = out.record;
        r.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
        r.config_hash = j.at("config_hash").get<std::string>();
        for (const auto& m : j.at("metrics"))
            r.metrics.push_back({m.at("name").get<std::string>(),
                                 m.at("value").is_null() ? NAN : m.at("value").get<double>(),
                                 m.at("unit").get<std::string>()});
        for (const auto& c : j.at("checks")) {
            auto num = [&](const char* k) { return c.at(k).is_null() ? NAN : c.at(k).get<double>(); };
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), num("measured"),
                                num("threshold"), num("margin"), c.at("detail").get<std::string>()});
        }
        for (const auto& w : j.at("warnings")) r.warnings.push_back(w.get<std::string>());
        for (const auto& s : j.at("series")) {
            Series ser;
            ser.name = s.at("name").get<std::string>();
            ser.columns = s.at("columns").get<std::vector<std::string>>();
            r.series.push_back(ser);
            std::string file = s.at("file").get<std::string>();
            std::string text;
            try {
                text = read_file(dir / file);
            } catch (const std::exception&) {
                if (out.problem.empty()) out.problem = "missing series file " + file;
                continue;
            }
            if (fnv1a_hex(text) != s.at("checksum").get<std::string>() && out.problem.empty())
                out.problem = "checksum mismatch in " + file;
            std::istringstream lines(text);
            std::string line;
            std::getline(lines, line);  // header
            while (std::getline(lines, line)) {
                std::vector<double> row;
                std::istringstream cells(line);
                std::string cell;
                while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
                r.series.back().rows.push_back(std::move(row));
            }
        }
    } catch (const std::exception& e) {
        if (out.problem.empty()) out.problem = std::string("malformed summary: ") + e.what();
        return out;
    }
    out.integrity_ok = out.problem.empty();
    return out;
}

}  // namespace corrlab
