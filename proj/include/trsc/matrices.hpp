#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trsc/kernels.hpp"
#include "trsc/series.hpp"

namespace trsc {

enum class Structure { LowerTriangular, General };

using ComplexMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::MatrixXd;

/// Dense N x N section of an infinite matrix. Entry (n, k) sits in row n
/// (output coefficient) and column k (input coefficient).
///
/// A LowerTriangular section holds exact zeros strictly above the diagonal;
/// the constructor rejects anything else, and any non-finite entry.
class FiniteSection
{
public:
    FiniteSection(ComplexMatrix entries, Structure structure);

    static FiniteSection identity(std::size_t N);

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    Structure structure() const noexcept { return structure_; }
    bool is_lower_triangular() const noexcept { return structure_ == Structure::LowerTriangular; }

    complex operator()(std::size_t n, std::size_t k) const
    {
        return entries_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    }

    const ComplexMatrix& entries() const noexcept { return entries_; }

    bool is_real() const noexcept;
    bool is_nonnegative() const noexcept; // real with every entry >= 0

    RealMatrix real_part() const { return entries_.real(); }
    RealMatrix abs() const { return entries_.cwiseAbs(); }

private:
    ComplexMatrix entries_;
    Structure structure_;
};

/// Positive weights omega_0 .. omega_{N}.
class WeightSequence
{
public:
    explicit WeightSequence(std::vector<double> values);

    static WeightSequence unit(std::size_t length);
    static WeightSequence dirichlet(std::size_t length); // omega_n = n + 1

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t n) const { return values_[n]; }
    std::span<const double> values() const noexcept { return values_; }

    /// max_n |omega_n / omega_{n+1} - 1|; reported, never enforced.
    double ratio_diagnostic() const noexcept;

private:
    std::vector<double> values_;
};

WeightSequence read_weights_csv(std::istream& is);

namespace kinds {
struct Cesaro {};
struct Fejer {};
struct FejerPower { double gamma; };
struct LowerOnes {};
struct HilbertTransform {};
struct Hankel { std::vector<complex> alpha; };       // zero padded past its end
struct ToeplitzLower { std::vector<complex> a; };    // zero padded past its end
struct RicardE {};
struct ELambda { complex lambda; };
struct KernelMultiplier { KernelSpec spec; };
} // namespace kinds

using SectionKind = std::variant<kinds::Cesaro, kinds::Fejer, kinds::FejerPower, kinds::LowerOnes,
                                 kinds::HilbertTransform, kinds::Hankel, kinds::ToeplitzLower,
                                 kinds::RicardE, kinds::ELambda, kinds::KernelMultiplier>;

FiniteSection build_structured(const SectionKind& kind, std::size_t N);

struct SectionParams
{
    double gamma = 1.0;
    complex lambda{1.0, 0.0};
    std::vector<complex> sequence; // Hankel alpha or Toeplitz a
    KernelSpec kernel = KernelSpec::fejer();
};

/// Name based construction: cesaro, fejer, fejer_power, lower_ones,
/// hilbert_transform, hankel, toeplitz_lower, ricard_E, e_lambda,
/// kernel_multiplier. Unknown names throw std::invalid_argument.
FiniteSection build_structured(std::string_view kind, std::size_t N, const SectionParams& params);

FiniteSection hadamard(const FiniteSection& A, const FiniteSection& B);
FiniteSection triangular_truncation(const FiniteSection& A);
FiniteSection transpose(const FiniteSection& A);
FiniteSection add(const FiniteSection& A, const FiniteSection& B);
FiniteSection subtract(const FiniteSection& A, const FiniteSection& B);

/// Lower Toeplitz section with g_{n-k} at (n, k).
FiniteSection multiplication_matrix(const CoefficientSequence& g, std::size_t N);

/// Generalized Cesaro operator C_g on the weighted space:
/// (1 - k/(n+1)) g_{n+1-k} (omega_n/omega_k)^{1/p} for k <= n. g_0 is unused.
FiniteSection cesaro_operator_matrix(const CoefficientSequence& g, std::size_t N,
                                     const WeightSequence& omega, double p);

/// Generalized Volterra operator T_g = z C_g:
/// ((n-k)/n) g_{n-k} (omega_n/omega_k)^{1/p} for k < n, zero diagonal.
FiniteSection volterra_operator_matrix(const CoefficientSequence& g, std::size_t N,
                                       const WeightSequence& omega, double p);

/// diag(d) A diag(d)^{-1} with d_n = omega_n^{1/p}.
FiniteSection weight_conjugate(const FiniteSection& A, const WeightSequence& omega, double p);

using SectionBuilder = std::function<FiniteSection(std::size_t)>;

struct IteratedLimits
{
    complex ell1;     // lim_k lim_n, proxy sigma(N-1, K0)
    complex ell2;     // inner limit taken to the diagonal edge, proxy sigma(N-1, N-1-K0)
    bool stabilized;  // both proxies move by <= 1e-2 over the window
};

inline constexpr std::size_t kIteratedLimitColumn = 4;
inline constexpr std::size_t kIteratedLimitWindow = 16;

IteratedLimits iterated_limit_diagnostic(const SectionBuilder& builder, std::size_t N);

struct TriangularSplit
{
    FiniteSection lower;  // X: (k+1)/(k+lambda n+1) on k <= n
    FiniteSection upper;  // Y: (n+1)/(lambda k+n+1) on k < n; E_lambda = X + Y^T
};

TriangularSplit e_lambda_split(complex lambda, std::size_t N);

/// max over 0 <= k <= n < N of the residual of
/// (k+1)/(k+ln+1) - k/(k+ln+l) = ((k+1)/(k+ln+l)) ((l-1)/(k+ln+1)) + (1/l)/(k/l+n+1).
double difference_identity_residual(complex lambda, std::size_t N);

double max_abs_difference(const FiniteSection& A, const FiniteSection& B);

} // namespace trsc
