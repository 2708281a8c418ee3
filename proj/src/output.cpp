#include "nvcool/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    if (!f.flush()) throw Error("cannot write " + path.string());
}

}  // namespace

std::string csv_text(const ExperimentResult& r, const Table& t, const std::string& cfg_hash) {
    std::string out = "# experiment: " + r.experiment + "\n";
    out += "# table: " + t.name + "\n";
    out += "# config_hash: " + cfg_hash + "\n";
    out += "# params_hash: " + params_hash(r.params) + "\n";
    for (const auto& [k, v] : r.summary) out += "# summary " + k + " = " + fmt(v) + "\n";
    for (const auto& w : r.warnings) out += "# warning: " + w + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
        out += "\n";
    }
    return out;
}

std::string envelope_json(const ExperimentResult& r, const RunConfig& cfg, double wall_time_s) {
    using nlohmann::json;
    json j;
    j["experiment"] = r.experiment;
    j["code_version"] = kVersion;
    j["wall_time_s"] = wall_time_s;
    j["config"] = {{"text", serialize_config(cfg)}, {"hash", config_hash(cfg)}};
    json ov = json::object();
    for (const auto& [k, v] : cfg.overrides) ov[k] = v;
    j["overrides"] = ov;
    json params = json::object();
    for (const auto& e : param_registry())
        params[e.key] = {{"value", get_param(r.params, e.key)}, {"unit", unit_label(e.unit)}};
    j["params"] = params;
    j["params_hash"] = params_hash(r.params);
    j["heating"] = cfg.spec.heating;
    j["warnings"] = r.warnings;
    json summary = json::object();
    for (const auto& [k, v] : r.summary) summary[k] = number(v);
    j["summary"] = summary;
    json tables = json::array();
    for (const Table& t : r.tables) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json jr = json::array();
            for (double v : row) jr.push_back(number(v));
            rows.push_back(std::move(jr));
        }
        tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
    }
    j["tables"] = std::move(tables);
    return j.dump(1) + "\n";
}

std::vector<std::string> emit(const ExperimentResult& r, const RunConfig& cfg, double wall_time_s) {
    namespace fs = std::filesystem;
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::string stem = cfg.stem.empty() ? r.experiment : cfg.stem;
    std::vector<std::string> paths;
    if (cfg.format != "json") {
        std::string hash = config_hash(cfg);
        for (const Table& t : r.tables) {
            fs::path p = dir / (r.tables.size() == 1 ? stem + ".csv" : stem + "_" + t.name + ".csv");
            write_file(p, csv_text(r, t, hash));
            paths.push_back(p.string());
        }
    }
    if (cfg.format != "csv") {
        fs::path p = dir / (stem + ".json");
        write_file(p, envelope_json(r, cfg, wall_time_s));
        paths.push_back(p.string());
    }
    return paths;
}

}  // namespace nvcool
