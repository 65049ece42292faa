#include "nambu/report.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>

namespace nambu {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ReportBuilder::ReportBuilder(const std::string& command) {
    j_["schema_version"] = "1.0";
    j_["command"] = command;
    j_["inputs"] = nlohmann::ordered_json::object();
    j_["parameters"] = nlohmann::ordered_json::object();
    j_["stages"] = nlohmann::ordered_json::array();
}

void ReportBuilder::add_input(const std::string& name, const std::string& content) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64, fnv1a64(content));
    j_["inputs"][name] = {{"text", content}, {"fnv1a64", hash}};
}

void ReportBuilder::add_parameter(const std::string& name, const nlohmann::ordered_json& value) {
    j_["parameters"][name] = value;
}

void ReportBuilder::add_stage(const std::string& name, bool verdict, const std::string& detail,
                              const nlohmann::ordered_json& witness,
                              const nlohmann::ordered_json& stats) {
    nlohmann::ordered_json s;
    s["name"] = name;
    s["verdict"] = verdict;
    if (!detail.empty()) s["detail"] = detail;
    if (!witness.is_null()) s["witness"] = witness;
    if (!stats.is_null()) s["stats"] = stats;
    j_["stages"].push_back(std::move(s));
}

void ReportBuilder::set_field(const std::string& key, const nlohmann::ordered_json& value) {
    j_[key] = value;
}

void ReportBuilder::record_timing(const std::string& stage, double seconds) {
    timings_[stage] = seconds;
}

nlohmann::ordered_json ReportBuilder::finish() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j_["timestamp"] = {{"generated_at", buf}, {"timings_s", timings_}};
    return j_;
}

}  // namespace nambu
