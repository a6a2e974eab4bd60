#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pairedk/kernels.hpp"

namespace pairedk {

enum class ClassConstraint { None, Hinf, HinfBar, Invertible, Inner, Outer };

/// Random rational symbols: roots in an inside and an outside annulus, at
/// least min_separation apart, gains of modulus 0.5..2.
struct SamplerProfile {
    int degree_bound = 4;  // at most this many zeros and this many poles
    double inside_lo = 0.2, inside_hi = 0.8;
    double outside_lo = 1.25, outside_hi = 5.0;
    bool allow_circle_zeros = false;
    ClassConstraint constraint = ClassConstraint::None;
    double min_separation = 0.1;
    int max_zpow = 2;
};

/// Narrower annuli (0.2..0.6 and 1.6..5) whose Fourier tails vanish below
/// machine precision inside a 64-mode window.
SamplerProfile oracle_friendly(SamplerProfile p = {});

Rational sample_symbol(const SamplerProfile& profile, std::uint64_t seed);
Rational sample_symbol(const SamplerProfile& profile, std::mt19937_64& rng);

struct RunConfig {
    int oracle_N = 64;
    int parallelism = 1;
};

struct TrialFailure {
    std::uint64_t seed = 0;
    nlohmann::json inputs;
    nlohmann::json detail;
};

struct PropertyReport {
    std::string property;
    std::string anchor;
    int trials = 0;
    int passes = 0;
    std::vector<TrialFailure> failures;
    nlohmann::json tolerances;
    nlohmann::json stats;  // property-specific aggregates (largest residual, trial counts)
    double wall_time = 0.0;
};

/// Deterministic payload; wall_time is reported separately by callers.
nlohmann::json to_json(const PropertyReport& r);

/// splitmix64 mix of the master seed and the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

const std::vector<std::string>& property_ids();
std::string_view property_anchor(std::string_view id);

struct TrialOutcome {
    bool pass = true;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json detail = nlohmann::json::object();
    double metric = 0.0;  // property-specific residual, aggregated as a maximum
    int flags = 0;        // property-specific counter (e.g. nontrivial kernels seen)
};

/// One trial from its own seed (UnknownProperty for unregistered ids).
TrialOutcome run_trial(std::string_view id, std::uint64_t seed, const RunConfig& config);

PropertyReport run_property(std::string_view id, int trials, std::uint64_t master_seed, const RunConfig& config);

struct SuiteReport {
    std::vector<PropertyReport> reports;
    bool all_pass = true;
};

SuiteReport run_suite(const std::vector<std::string>& ids, int trials, std::uint64_t master_seed, const RunConfig& config);
nlohmann::json to_json(const SuiteReport& r);

}  // namespace pairedk
