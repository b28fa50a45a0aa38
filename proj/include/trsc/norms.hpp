#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "trsc/matrices.hpp"

namespace trsc {

enum class NormKind { Exact2, LowerBound, UpperBound };

std::string_view to_string(NormKind kind) noexcept;

/// Estimate of an operator norm on l^p. LowerBound values are attained by an
/// explicit test vector; UpperBound values carry a Schur-test certificate.
struct NormEstimate
{
    double value = 0.0;
    NormKind kind = NormKind::LowerBound;
    int iterations = 0;
    double residual = 0.0;
};

struct NormBracket
{
    NormEstimate lower;
    NormEstimate upper;
};

inline constexpr std::uint64_t kDefaultSeed = 0x7253'4353'2024ULL;

struct IterationOptions
{
    double tolerance = 1e-9;
    int max_iterations = 10000;
    std::uint64_t seed = kDefaultSeed; // start-vector perturbation
};

/// Largest singular value from the Krylov space of A^H A (Lanczos with
/// full reorthogonalization, restarted every 200 steps), started from a
/// perturbed ones vector. The value returned is ||A u|| for the final unit
/// vector u, so it never exceeds the true norm. Kind is Exact2 once the
/// Ritz error bound min(res, res^2/gap) falls below the relative tolerance,
/// LowerBound otherwise; iterations counts products with A^H A and residual
/// is ||A^H A u - s^2 u|| / s^2.
NormEstimate spectral_norm(const FiniteSection& A, const IterationOptions& options = {});
NormEstimate spectral_norm(const RealMatrix& A, Structure structure, const IterationOptions& options = {});
NormEstimate spectral_norm(const ComplexMatrix& A, Structure structure, const IterationOptions& options = {});

/// Bracket for ||A||_{l^p -> l^p}, p > 1.
///
/// Nonnegative A: Boyd's nonlinear power iteration gives the lower side and
/// the Schur test with the Boyd vector certifies the upper side; iteration
/// stops once the relative gap drops below the tolerance.
/// Signed or complex A: the lower side is the best of 64 random starts and a
/// few structured vectors under the sign-aware p-norm power method; the upper
/// side is the certified bound for |A|.
NormBracket lp_norm(const FiniteSection& A, double p, const IterationOptions& options = {});
NormBracket lp_norm(const RealMatrix& A, Structure structure, double p, const IterationOptions& options = {});
NormBracket lp_norm(const ComplexMatrix& A, Structure structure, double p, const IterationOptions& options = {});

inline constexpr int kSchurCatalogVersion = 1;
inline constexpr int kRandomStarts = 64;

/// Lower-triangular test operators: Pi(hilbert_transform), cesaro, then
/// catalog_size seeded members cycling through random +-1 triangles, lower
/// Toeplitz sections of random Blaschke products and random rank-one
/// triangles.
std::vector<FiniteSection> schur_test_catalog(std::size_t N, std::size_t catalog_size, std::uint64_t seed);

/// max over the catalog of ||S . A||_p / ||A||_p. Both norms use the same
/// estimator (spectral at p = 2, the lower side of lp_norm otherwise).
NormEstimate schur_norm_lower(const FiniteSection& S, double p, std::size_t catalog_size, std::uint64_t seed);

struct GrowthRow
{
    std::size_t N;
    double p;
    NormEstimate estimate;
    std::uint64_t seed;
};

/// One Exact2/LowerBound row per size at p = 2, a lower and an upper row per
/// size otherwise. Sizes must be strictly increasing.
std::vector<GrowthRow> norm_growth_curve(const SectionBuilder& builder, std::span<const std::size_t> N_list,
                                         double p, const IterationOptions& options = {});

// CSV columns: N,p,kind,value,iterations,residual,seed
void write_csv(std::ostream& os, std::span<const GrowthRow> rows);

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

} // namespace trsc
