#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trsc/series.hpp"

namespace trsc {

struct FejerFamily
{
};

struct RieszFamily
{
    double gamma;
};

// theta sampled on a uniform grid over [-1, 1]; linear interpolation between
// samples, zero outside.
struct TabulatedFamily
{
    std::vector<double> samples;
};

/// Generating function theta of a summability kernel, continuous and
/// supported in [-1, 1].
class KernelSpec
{
public:
    using Family = std::variant<FejerFamily, RieszFamily, TabulatedFamily>;

    static KernelSpec fejer();
    static KernelSpec riesz(double gamma);
    static KernelSpec tabulated(std::vector<double> samples);

    const Family& family() const noexcept { return family_; }

    double theta(double x) const;

    /// theta(-x) == theta(x) holds exactly for the analytic families and for
    /// tabulated samples that are symmetric.
    bool is_even() const noexcept;

    std::string name() const;

private:
    explicit KernelSpec(Family family) : family_(std::move(family)) {}

    Family family_;
};

/// theta(k/(n+1)) for k = 0..n.
CoefficientSequence kernel_coefficients(const KernelSpec& spec, std::size_t n);

/// k_n(t) = sum_{|k|<=n} theta(k/(n+1)) e^{ikt}. Throws std::domain_error
/// if the imaginary residue exceeds 1e-10 (non-even tabulated theta).
double kernel_eval(const KernelSpec& spec, std::size_t n, double t);

/// (1/2pi) int_{-pi}^{pi} |k_n(t)| dt, composite trapezoid on 64(n+1) nodes.
double kernel_l1_norm(const KernelSpec& spec, std::size_t n);

/// (1/2pi) int_{-1}^{1} (1-|u|)^gamma e^{-ixu} du by Gauss-Jacobi quadrature.
double phi_gamma_fourier(double gamma, double x);

/// int_R |phi_gamma_fourier(gamma, x)| dx: adaptive quadrature on [0, x_max]
/// plus a power-law tail fitted on [x_max/2, x_max].
double phi_gamma_fourier_l1_norm(double gamma, double x_max = 1024.0);

/// Decay exponent a = min(1, gamma) + 1 of the Riesz generating function's
/// Fourier transform.
double riesz_decay_exponent(double gamma);

struct BoundRow
{
    std::size_t n;
    double t;
    double kernel_value;
    double bound;
    double ratio;
};

struct BoundReport
{
    std::vector<BoundRow> rows;
    double constant = 0.0; // grid maximum of ratio
};

/// |k_n(t)| / min{n+1, (n+1)^{-(a-1)} |t|^{-a}} over the (n, t) grid. The
/// tail exponent a-1 is clamped to 1.
BoundReport pointwise_bound_report(const KernelSpec& spec, double a,
                                   std::span<const std::size_t> n_list,
                                   std::span<const double> t_grid);

/// Log-spaced |t| grid on [t_min, pi].
std::vector<double> log_t_grid(double t_min, std::size_t count);

// CSV columns: n,t,kernel_value,bound,ratio
void write_csv(std::ostream& os, const BoundReport& report);

} // namespace trsc
