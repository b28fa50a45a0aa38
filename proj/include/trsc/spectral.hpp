#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trsc/matrices.hpp"
#include "trsc/norms.hpp"

namespace trsc {

struct PowerRootRow
{
    int n;
    double lower_root; // ||A^n||^{1/n}, lower side of the bracket
    double upper_root; // equal to lower_root at p = 2
};

struct PowerNormSequence
{
    double p = 2.0;
    std::vector<PowerRootRow> rows;
    // true when the running scale left [1e-300, 1e300], i.e. unscaled powers
    // would have over- or underflowed
    bool rescaled = false;
};

/// ||A^n||_p^{1/n} for n = 1..n_max. Powers are formed by repeated
/// multiplication and renormalised by their largest entry at every step,
/// with the logarithm of the scale tracked separately.
PowerNormSequence power_norm_sequence(const FiniteSection& A, double p, int n_max);

/// (I - T/lambda)^{-1} for the Volterra section T of g, by forward
/// substitution on the unit lower triangular system.
FiniteSection resolvent_section(const CoefficientSequence& g, complex lambda, std::size_t N,
                                const WeightSequence& omega, double p);

struct ResolventRow
{
    std::size_t N;
    NormEstimate lower;
    NormEstimate upper;
    double max_entry;
    bool ill_conditioned; // some entry exceeded 1e12
};

struct ResolventProbe
{
    complex lambda;
    std::vector<ResolventRow> rows;

    /// max over consecutive sizes of upper(N_{i+1}) / upper(N_i) - 1.
    double max_growth() const;
};

ResolventProbe resolvent_probe(const CoefficientSequence& g, complex lambda, double p,
                               std::span<const std::size_t> N_list, const WeightSequence& omega);

inline constexpr double kResolventGrowthLimit = 0.05;

struct QuasinilpotencyReport
{
    double p = 2.0;
    std::size_t power_section_size = 0;
    PowerNormSequence powers;
    std::vector<ResolventProbe> resolvents;
    double weight_ratio_diagnostic = 0.0;

    // summary
    bool roots_decreasing = false;   // strictly, for 4 <= n <= n_max (zero roots allowed)
    double root_decay_slope = 0.0;   // slope of log root vs log n over n >= 4
    double max_resolvent_growth = 0.0;
    std::string verdict;
};

inline constexpr const char* kVerdictConsistent = "consistent with quasi-nilpotent";
inline constexpr const char* kVerdictInconclusive = "inconclusive";

/// Powers are probed on the largest size in N_list; resolvents on every size
/// and every lambda in the grid.
QuasinilpotencyReport quasinilpotency_report(const CoefficientSequence& g, const WeightSequence& omega,
                                             double p, std::span<const std::size_t> N_list, int n_max,
                                             std::span<const complex> lambda_grid);

void write_json(std::ostream& os, const QuasinilpotencyReport& report);
// CSV columns: n,lower_root,upper_root
void write_csv(std::ostream& os, const PowerNormSequence& powers);
// CSV columns: lambda_re,lambda_im,N,lower,upper,max_entry,ill_conditioned
void write_csv(std::ostream& os, std::span<const ResolventProbe> probes);

} // namespace trsc
