// Structured report document emitted by the CLI.  Reports are deterministic
// for identical inputs and flags apart from the single "timestamp" field
// (which also carries wall-clock stage timings).
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace nambu {

std::uint64_t fnv1a64(std::string_view s);

class ReportBuilder {
public:
    explicit ReportBuilder(const std::string& command);

    // Records an input object together with its content hash.
    void add_input(const std::string& name, const std::string& content);
    void add_parameter(const std::string& name, const nlohmann::ordered_json& value);
    void add_stage(const std::string& name, bool verdict, const std::string& detail = "",
                   const nlohmann::ordered_json& witness = nullptr,
                   const nlohmann::ordered_json& stats = nullptr);
    void set_field(const std::string& key, const nlohmann::ordered_json& value);
    void record_timing(const std::string& stage, double seconds);

    // Appends the timestamp field and returns the finished document.
    nlohmann::ordered_json finish();

private:
    nlohmann::ordered_json j_;
    nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
};

}  // namespace nambu
