#include "trsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace trsc {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Cosine series c_0 + sum_{k>=1} c_k cos(kt), evaluated by Clenshaw.
class CosineSeries
{
public:
    CosineSeries(const KernelSpec& spec, std::size_t n) : c_(n + 1)
    {
        const double denom = static_cast<double>(n + 1);
        c_[0] = spec.theta(0.0);
        for (std::size_t k = 1; k <= n; ++k)
            c_[k] = 2.0 * spec.theta(static_cast<double>(k) / denom);
    }

    double operator()(double t) const noexcept
    {
        const double c = std::cos(t);
        double b1 = 0.0;
        double b2 = 0.0;
        for (std::size_t k = c_.size() - 1; k >= 1; --k) {
            const double b0 = c_[k] + 2.0 * c * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        return c_[0] + b1 * c - b2;
    }

private:
    std::vector<double> c_;
};

complex general_kernel_sum(const KernelSpec& spec, std::size_t n, double t)
{
    const double denom = static_cast<double>(n + 1);
    const auto m = static_cast<long long>(n);
    complex acc{};
    for (long long k = -m; k <= m; ++k) {
        const double th = spec.theta(static_cast<double>(k) / denom);
        acc += th * complex(std::cos(static_cast<double>(k) * t), std::sin(static_cast<double>(k) * t));
    }
    return acc;
}

double simpson_step(auto& f, double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
         + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double eps, int max_depth = 40)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

// Gauss-Jacobi rule for int_0^1 (1-u)^gamma f(u) du, built by Golub-Welsch.
struct JacobiRule
{
    double gamma = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    JacobiRule(double g, std::size_t n) : gamma(g), nodes(n), weights(n)
    {
        // monic Jacobi recurrence on [-1, 1] with alpha = gamma, beta = 0
        const double al = g;
        Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
        Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
        for (std::size_t k = 0; k < n; ++k) {
            const double s = 2.0 * static_cast<double>(k) + al;
            diag(static_cast<Eigen::Index>(k)) = k == 0 ? -al / (al + 2.0) : -al * al / (s * (s + 2.0));
            if (k + 1 < n) {
                const double kk = static_cast<double>(k + 1);
                const double t = 2.0 * kk + al;
                sub(static_cast<Eigen::Index>(k)) =
                    std::sqrt(4.0 * kk * (kk + al) * kk * (kk + al) / (t * t * (t + 1.0) * (t - 1.0)));
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("Gauss-Jacobi eigenproblem failed");
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            nodes[i] = 0.5 * (solver.eigenvalues()(ii) + 1.0);
            const double v = solver.eigenvectors()(0, ii);
            weights[i] = v * v / (g + 1.0);
        }
    }

    // (1/pi) int_0^1 (1-u)^gamma cos(x u) du
    double phi_hat(double x) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * std::cos(x * nodes[i]);
        return acc / kPi;
    }
};

// Enough nodes to resolve cos(x u) on [0, 1] to rounding level.
std::size_t jacobi_order(double x_max)
{
    const auto base = static_cast<std::size_t>(std::ceil(0.5 * std::abs(x_max))) + 48;
    return 32 * ((base + 31) / 32);
}

const JacobiRule& cached_rule(double gamma, std::size_t n)
{
    thread_local std::vector<JacobiRule> cache;
    for (const auto& r : cache)
        if (r.gamma == gamma && r.nodes.size() == n)
            return r;
    if (cache.size() >= 8)
        cache.erase(cache.begin());
    cache.emplace_back(gamma, n);
    return cache.back();
}

} // namespace

KernelSpec KernelSpec::fejer()
{
    return KernelSpec(FejerFamily{});
}

KernelSpec KernelSpec::riesz(double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("Riesz kernel needs gamma > 0");
    return KernelSpec(RieszFamily{gamma});
}

KernelSpec KernelSpec::tabulated(std::vector<double> samples)
{
    if (samples.size() < 3)
        throw std::invalid_argument("tabulated theta needs at least three samples");
    for (double s : samples)
        if (!std::isfinite(s))
            throw std::invalid_argument("tabulated theta has a non-finite sample");
    if (samples.front() != 0.0 || samples.back() != 0.0)
        throw std::invalid_argument("tabulated theta must vanish at +-1");
    return KernelSpec(TabulatedFamily{std::move(samples)});
}

double KernelSpec::theta(double x) const
{
    const double ax = std::abs(x);
    if (ax >= 1.0)
        return 0.0;
    return std::visit(
        Overloaded{
            [&](const FejerFamily&) { return 1.0 - ax; },
            [&](const RieszFamily& r) { return std::pow(1.0 - ax, r.gamma); },
            [&](const TabulatedFamily& tab) {
                const double pos = (x + 1.0) * 0.5 * static_cast<double>(tab.samples.size() - 1);
                const auto i = std::min(static_cast<std::size_t>(pos), tab.samples.size() - 2);
                const double frac = pos - static_cast<double>(i);
                return (1.0 - frac) * tab.samples[i] + frac * tab.samples[i + 1];
            },
        },
        family_);
}

bool KernelSpec::is_even() const noexcept
{
    if (const auto* tab = std::get_if<TabulatedFamily>(&family_)) {
        const auto& s = tab->samples;
        for (std::size_t i = 0, j = s.size() - 1; i < j; ++i, --j)
            if (s[i] != s[j])
                return false;
    }
    return true;
}

std::string KernelSpec::name() const
{
    return std::visit(Overloaded{
                          [](const FejerFamily&) { return std::string("fejer"); },
                          [](const RieszFamily& r) { return "riesz(" + format_double(r.gamma) + ")"; },
                          [](const TabulatedFamily& t) {
                              return "tabulated(" + std::to_string(t.samples.size()) + ")";
                          },
                      },
                      family_);
}

CoefficientSequence kernel_coefficients(const KernelSpec& spec, std::size_t n)
{
    std::vector<complex> c(n + 1);
    const double denom = static_cast<double>(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        c[k] = spec.theta(static_cast<double>(k) / denom);
    return CoefficientSequence(std::move(c));
}

double kernel_eval(const KernelSpec& spec, std::size_t n, double t)
{
    if (spec.is_even())
        return CosineSeries(spec, n)(t);
    const complex value = general_kernel_sum(spec, n, t);
    if (std::abs(value.imag()) > 1e-10)
        throw std::domain_error("kernel_eval: imaginary residue " + format_double(value.imag())
                                + " (theta is not even)");
    return value.real();
}

double kernel_l1_norm(const KernelSpec& spec, std::size_t n)
{
    const std::size_t nodes = 64 * (n + 1);
    const double h = 2.0 * kPi / static_cast<double>(nodes);
    double sum = 0.0;
    if (spec.is_even()) {
        const CosineSeries series(spec, n);
        for (std::size_t j = 0; j < nodes; ++j)
            sum += std::abs(series(-kPi + h * static_cast<double>(j)));
    } else {
        for (std::size_t j = 0; j < nodes; ++j)
            sum += std::abs(general_kernel_sum(spec, n, -kPi + h * static_cast<double>(j)));
    }
    return sum / static_cast<double>(nodes);
}

double phi_gamma_fourier(double gamma, double x)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("phi_gamma_fourier needs gamma > 0");
    if (!std::isfinite(x))
        throw std::invalid_argument("phi_gamma_fourier needs finite x");
    // (1/2pi) int_{-1}^{1} = (1/pi) int_0^1 by evenness
    return cached_rule(gamma, jacobi_order(x)).phi_hat(std::abs(x));
}

double riesz_decay_exponent(double gamma)
{
    return std::min(1.0, gamma) + 1.0;
}

double phi_gamma_fourier_l1_norm(double gamma, double x_max)
{
    if (!(x_max > kPi))
        throw std::invalid_argument("phi_gamma_fourier_l1_norm: x_max too small");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("phi_gamma_fourier_l1_norm needs gamma > 0");
    const JacobiRule rule(gamma, jacobi_order(x_max));
    auto abs_hat = [&](double x) { return std::abs(rule.phi_hat(x)); };

    const auto panels = static_cast<std::size_t>(std::ceil(x_max / kPi));
    const double width = x_max / static_cast<double>(panels);
    double body = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
        const double a = width * static_cast<double>(j);
        body += adaptive_simpson(abs_hat, a, a + width, 1e-11, 20);
    }

    const double a = riesz_decay_exponent(gamma);
    constexpr std::size_t samples = 256;
    double envelope = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = 0.5 * x_max * (1.0 + (static_cast<double>(s) + 0.5) / samples);
        envelope += abs_hat(x) * std::pow(x, a);
    }
    envelope /= samples;
    const double tail = envelope * std::pow(x_max, 1.0 - a) / (a - 1.0);
    return 2.0 * (body + tail);
}

BoundReport pointwise_bound_report(const KernelSpec& spec, double a,
                                   std::span<const std::size_t> n_list,
                                   std::span<const double> t_grid)
{
    if (!(a > 1.0))
        throw std::invalid_argument("pointwise_bound_report needs decay exponent a > 1");
    const double a_eff = 1.0 + std::min(a - 1.0, 1.0);

    BoundReport report;
    report.rows.reserve(n_list.size() * t_grid.size());
    for (std::size_t n : n_list) {
        const double np1 = static_cast<double>(n + 1);
        const bool even = spec.is_even();
        const CosineSeries series(spec, even ? n : 0);
        for (double t : t_grid) {
            const double value = even ? series(t) : kernel_eval(spec, n, t);
            const double tail = std::pow(np1, -(a_eff - 1.0)) * std::pow(std::abs(t), -a_eff);
            const double bound = std::min(np1, tail);
            const double ratio = std::abs(value) / bound;
            report.rows.push_back({n, t, value, bound, ratio});
            report.constant = std::max(report.constant, ratio);
        }
    }
    return report;
}

std::vector<double> log_t_grid(double t_min, std::size_t count)
{
    if (!(t_min > 0.0 && t_min < kPi) || count < 2)
        throw std::invalid_argument("log_t_grid: need 0 < t_min < pi and count >= 2");
    std::vector<double> grid(count);
    const double lo = std::log(t_min);
    const double hi = std::log(kPi);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    grid.back() = kPi;
    return grid;
}

void write_csv(std::ostream& os, const BoundReport& report)
{
    os << "n,t,kernel_value,bound,ratio\n";
    for (const auto& r : report.rows)
        os << r.n << ',' << format_double(r.t) << ',' << format_double(r.kernel_value) << ','
           << format_double(r.bound) << ',' << format_double(r.ratio) << '\n';
}

} // namespace trsc
