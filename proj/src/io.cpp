#include "qctx/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qctx/version.hpp"

namespace qctx {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_csv: cannot open " + path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw io_error("write_csv: write failure on " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_to_json(const OptimizerConfig& cfg) {
    nlohmann::json j;
    j["starts"] = cfg.starts;
    j["seed"] = cfg.seed;
    j["penalty_schedule"] = cfg.penalty_schedule;
    j["max_iters"] = cfg.max_iters;
    j["objective_tol"] = cfg.objective_tol;
    j["feasibility_tol"] = cfg.feasibility_tol;
    return j.dump(2);
}

OptimizerConfig config_from_json(const std::string& text, const OptimizerConfig& base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    OptimizerConfig cfg = base;
    for (auto& [key, val] : j.items()) {
        try {
            if (key == "starts") cfg.starts = val.get<int>();
            else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
            else if (key == "penalty_schedule") cfg.penalty_schedule = val.get<std::vector<double>>();
            else if (key == "max_iters") cfg.max_iters = val.get<int>();
            else if (key == "objective_tol") cfg.objective_tol = val.get<double>();
            else if (key == "feasibility_tol") cfg.feasibility_tol = val.get<double>();
            else throw std::invalid_argument("config: unknown field '" + key + "'");
        } catch (const nlohmann::json::exception& ex) {
            throw std::invalid_argument("config: field '" + key + "': " + ex.what());
        }
    }
    cfg.validate();
    return cfg;
}

void write_manifest(const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config"] = nlohmann::json::parse(config_to_json(m.config));
    j["seed"] = m.seed;
    j["version"] = m.version.empty() ? std::string(k_version) : m.version;
    j["duration_seconds"] = m.duration_seconds;
    j["output"] = m.output_path;
    j["rows"] = m.rows;
    std::string path = m.output_path + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_manifest: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write_manifest: write failure on " + path);
}

}  // namespace qctx
