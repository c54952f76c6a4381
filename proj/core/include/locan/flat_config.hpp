#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace locan {

/// Flat `key = value` configuration file: one pair per line, `#` comments,
/// no nesting. Keys are unique; later duplicates win.
class FlatConfig {
public:
    static FlatConfig load(const std::filesystem::path& path);
    static FlatConfig from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    /// Typed getters return the default when the key is absent and throw
    /// std::invalid_argument naming the key on a malformed value.
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::vector<std::string> keys() const;
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::vector<std::pair<std::string, std::string>> entries_;

    const std::string* raw(const std::string& key) const;
};

} // namespace locan
