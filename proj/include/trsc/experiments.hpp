#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "trsc/common.hpp"

namespace trsc {

/// Raised for unknown experiments and invalid parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Unset fields fall back to each experiment's own defaults.
struct ExperimentConfig
{
    std::optional<long long> N;
    std::vector<long long> Ns;
    std::optional<double> p;
    std::optional<double> gamma;
    std::optional<complex> lambda;
    std::uint64_t seed = 7;
    std::string weight = "unit"; // unit | dirichlet | path to a weight CSV
    std::filesystem::path out = "trsc_out";
    std::optional<long long> catalog_size;
};

/// Overlays the keys present in j onto base: N, Ns, p, gamma, lambda
/// ([re, im] or "re,im"), seed, weight, out, catalog_size.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// "re,im" or "re".
complex parse_lambda(std::string_view text);

struct ExperimentResult
{
    std::string name;
    bool pass = false;
    std::string summary;
    nlohmann::json metrics;
};

inline constexpr std::array<std::string_view, 10> kExperimentNames{
    "hardy",     "factorization", "kernel-bounds", "counterexample", "schur-scaling",
    "hankel-truncation", "ricard", "e-lambda",     "quasinilpotency", "iterated-limits"};

/// Runs one experiment, writes its CSV/JSON files and manifest.json under
/// config.out, and reports pass/fail against the experiment's threshold.
ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& config);

namespace thresholds {
inline constexpr double kHardyWindow = 0.1;          // lower side within [c - 0.1, c], c = p/(p-1)
inline constexpr double kHardyUpperSlack = 1e-6;
inline constexpr double kFactorizationDeviation = 1e-12;
inline constexpr int kFactorizationTrials = 50;
inline constexpr double kExactUlps = 4.0;            // floating-point reading of "exact"
inline constexpr double kFejerL1Tolerance = 1e-6;
inline constexpr double kRieszL1Slack = 1e-3;
inline constexpr double kPointwiseStability = 0.10;
inline constexpr double kCounterexampleR2 = 0.98;
inline constexpr double kHilbertDrift = 0.02;
inline constexpr double kSchurExponent = 2.3;
inline constexpr double kHankelGrowth = 0.05;
inline constexpr double kDifferenceIdentity = 1e-12;
inline constexpr double kIteratedLimitTolerance = 1e-2;
} // namespace thresholds

} // namespace trsc
