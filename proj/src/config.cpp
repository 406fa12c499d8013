#include "mml/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <sstream>

#include "mml/error.hpp"
#include "mml/format.hpp"
#include "mml/hash.hpp"
#include "mml/io.hpp"

#include <json.hpp>

namespace mml {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                        c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ":" << line << ": " << what;
    fail(ErrorKind::config_error, msg.str());
}

[[noreturn]] void value_error(const std::string& key, const std::string& value,
                              const std::string& wanted) {
    fail(ErrorKind::config_error,
         "key '" + key + "': cannot read '" + value + "' as " + wanted);
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) value_error(key, text, "a number");
    errno = 0;
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (errno != 0 || end != v.c_str() + v.size()) value_error(key, v, "a number");
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) value_error(key, text, "an integer");
    errno = 0;
    char* end = nullptr;
    const long long out = std::strtoll(v.c_str(), &end, 10);
    if (errno != 0 || end != v.c_str() + v.size()) value_error(key, v, "an integer");
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        parts.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    return parse(read_text(path), path);
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    cfg.origin_ = origin;

    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();

        // Strip comments before looking at structure; values never contain
        // '#' or ';', so an unconditional cut is safe.
        const std::size_t cut = raw.find_first_of("#;");
        std::string stripped = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                parse_error(origin, line, "section header is missing ']'");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (!valid_name(section))
                parse_error(origin, line, "bad section name '" + section + "'");
            continue;
        }

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            parse_error(origin, line, "expected 'key = value' or '[section]'");
        const std::string key = trim(stripped.substr(0, eq));
        if (!valid_name(key)) parse_error(origin, line, "bad key name '" + key + "'");
        const std::string value = trim(stripped.substr(eq + 1));

        const std::string full = section.empty() ? key : section + "." + key;
        if (!cfg.entries_.emplace(full, value).second)
            parse_error(origin, line, "duplicate key '" + full + "'");
    }
    return cfg;
}

bool ExperimentConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    entries_.insert_or_assign(key, value);
}

std::vector<std::string> ExperimentConfig::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [key, value] : entries_) out.push_back(key);
    return out;
}

const std::string& ExperimentConfig::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        fail(ErrorKind::config_error, origin_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key) const { return require(key); }

double ExperimentConfig::get_real(const std::string& key) const {
    return parse_real(key, require(key));
}

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
    return parse_int(key, require(key));
}

bool ExperimentConfig::get_bool(const std::string& key) const {
    const std::string v = require(key);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    value_error(key, v, "a boolean");
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<double> ExperimentConfig::get_real_list(const std::string& key) const {
    if (!has(key)) return {};
    std::vector<double> out;
    for (const std::string& part : split_list(require(key)))
        out.push_back(parse_real(key, part));
    return out;
}

std::vector<std::int64_t> ExperimentConfig::get_int_list(const std::string& key) const {
    if (!has(key)) return {};
    std::vector<std::int64_t> out;
    for (const std::string& part : split_list(require(key)))
        out.push_back(parse_int(key, part));
    return out;
}

std::uint64_t ExperimentConfig::hash() const {
    // std::map iterates in key order, so the digest ignores file layout.
    std::string canonical;
    for (const auto& [key, value] : entries_) {
        canonical += key;
        canonical += '=';
        canonical += value;
        canonical += '\n';
    }
    return fnv1a64(canonical);
}

void RunManifest::add_stage(const std::string& name, double seconds) {
    stages.emplace_back(name, seconds);
}

void RunManifest::add_output(const std::string& path) { outputs.push_back(path); }

std::string RunManifest::json() const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));

    nlohmann::ordered_json doc;
    doc["config_hash"] = hex;
    doc["artifact_version"] = artifact_version;
    doc["stages"] = nlohmann::ordered_json::array();
    for (const auto& [name, seconds] : stages)
        doc["stages"].push_back({{"name", name}, {"wall_seconds", seconds}});
    doc["outputs"] = outputs;
    return doc.dump(2) + "\n";
}

}  // namespace mml
