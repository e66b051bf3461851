#pragma once

// Flat `key = value` config files for workloads and platforms.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "lfperf/workload.hpp"

namespace lfperf {

/// Raised for malformed or unknown config entries. Carries the offending
/// line (0 when the problem is file-level) and key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string file, int line, std::string key, const std::string& what);

    const std::string& file() const { return file_; }
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    std::string file_;
    int line_;
    std::string key_;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Parsed file: key -> (value, line). Duplicate keys are rejected.
struct FlatConfig {
    std::string source;
    std::map<std::string, ConfigEntry> entries;
};

FlatConfig parse_flat_config(const std::string& text, const std::string& source = "<string>");
FlatConfig load_flat_config(const std::filesystem::path& path);

WorkloadSpec workload_from_config(const FlatConfig& cfg);
PlatformSpec platform_from_config(const FlatConfig& cfg);

WorkloadSpec load_workload(const std::filesystem::path& path);
PlatformSpec load_platform(const std::filesystem::path& path);

/// Inverse of platform_from_config; output parses back to an equal spec.
std::string platform_to_config(const PlatformSpec& p);
std::string workload_to_config(const WorkloadSpec& w);

}  // namespace lfperf
