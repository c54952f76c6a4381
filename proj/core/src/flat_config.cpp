#include "locan/flat_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace locan {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

} // namespace

FlatConfig FlatConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str(), path.string());
}

FlatConfig FlatConfig::from_string(const std::string& text, const std::string& origin) {
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        auto it = std::find_if(cfg.entries_.begin(), cfg.entries_.end(),
                               [&](const auto& e) { return e.first == key; });
        if (it != cfg.entries_.end()) {
            it->second = value;
        } else {
            cfg.entries_.emplace_back(key, value);
        }
    }
    return cfg;
}

const std::string* FlatConfig::raw(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return &v;
    }
    return nullptr;
}

bool FlatConfig::has(const std::string& key) const { return raw(key) != nullptr; }

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
    const std::string* v = raw(key);
    return v ? *v : fallback;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + *v + "'");
    }
    return value;
}

std::int64_t FlatConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
        throw std::invalid_argument("config key '" + key + "': bad integer '" + *v + "'");
    }
    return value;
}

std::uint64_t FlatConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
        throw std::invalid_argument("config key '" + key + "': bad unsigned integer '" + *v + "'");
    }
    return value;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw std::invalid_argument("config key '" + key + "': bad boolean '" + *v + "'");
}

std::vector<std::string> FlatConfig::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

} // namespace locan
