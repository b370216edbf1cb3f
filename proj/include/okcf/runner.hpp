#pragma once

#include <map>
#include <string>
#include <vector>

#include "okcf/embed.hpp"

namespace okcf {

inline constexpr const char* kToolVersion = "0.1.0";

/// Flat key=value configuration with one include level. '#' starts a
/// comment; keys from the including file override the included file.
class ExperimentConfig {
public:
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text,
                                        const std::string& base_dir = ".");

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key,
                       const std::string& fallback) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    mpq_class get_rational(const std::string& key,
                           const mpq_class& fallback) const;
    void set(const std::string& key, const std::string& value);

    int ring_d() const; // validates d in {1,3,7,11}
    mpfr_prec_t precision() const;
    std::uint64_t seed() const;
    int digits() const;

    /// FNV-1a over the sorted key=value lines.
    std::uint64_t hash() const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

/// Parses an OKInt from "a,b" coefficient notation.
OKInt parse_okint(const std::string& text, const RingSpec& ring);

/// Orbit sweep per the configured target class; records sorted by (k, j).
std::vector<OrbitRecord> run_sweep(const ExperimentConfig& cfg,
                                   std::vector<std::string>* warnings);

void cmd_expand(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_orbit(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_exponent(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_dirichlet(const ExperimentConfig& cfg, const std::string& out_path);
void cmd_embed_check(const ExperimentConfig& cfg,
                     const std::string& out_path);
void cmd_floor_check(const ExperimentConfig& cfg,
                     const std::string& out_path);

/// Dispatch used by the binary; maps errors to exit codes
/// (0 ok, 2 config, 3 precision, 4 budget, 1 other).
int run_cli(const std::vector<std::string>& args);

} // namespace okcf
