#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mml {

/// Experiment description parsed from a single structured text file:
///   [section]
///   key = value        # trailing comments with '#' or ';'
/// Keys are addressed as "section.key" (bare "key" before any section header).
/// Values stay strings until a typed getter interprets them; every diagnostic
/// carries the file name and line number.
class ExperimentConfig {
public:
    static ExperimentConfig parse_file(const std::string& path);
    /// `origin` names the text in diagnostics (a file name, or e.g. "<test>").
    static ExperimentConfig parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    /// Every key that was read, in canonical (sorted) order.
    std::vector<std::string> keys() const;

    /// Inserts or replaces one entry; command-line overrides route through
    /// here so the digest always reflects what actually ran.
    void set(const std::string& key, const std::string& value);

    // Required getters: config_error when the key is missing or malformed.
    std::string get_string(const std::string& key) const;
    double get_real(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    // Defaulted getters: the fallback when the key is absent.
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Comma-separated lists; empty when the key is absent and no value is
    // required. A present key must parse in full.
    std::vector<double> get_real_list(const std::string& key) const;
    std::vector<std::int64_t> get_int_list(const std::string& key) const;

    /// Digest of the parsed content. Entries are hashed in canonical key
    /// order, so reordering sections or keys in the file leaves it unchanged.
    std::uint64_t hash() const;

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::string> entries_;

    const std::string& require(const std::string& key) const;
};

/// Record of one tool invocation: what configuration ran, which artifact
/// version produced it, how long each stage took, and what files came out.
struct RunManifest {
    std::uint64_t config_hash = 0;
    std::string artifact_version;
    std::vector<std::pair<std::string, double>> stages;  // name, wall seconds
    std::vector<std::string> outputs;

    void add_stage(const std::string& name, double seconds);
    void add_output(const std::string& path);
    std::string json() const;
};

}  // namespace mml
