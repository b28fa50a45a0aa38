#include "trsc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "trsc/parallel.hpp"

namespace trsc {

namespace {

using Index = Eigen::Index;

constexpr Index kLanczosBasis = 200;

// A, optionally restricted to its lower triangle.
template <class Matrix>
class Operator
{
public:
    using Scalar = typename Matrix::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Operator(const Matrix& A, Structure structure)
        : A_(A), lower_(structure == Structure::LowerTriangular)
    {
        if (A.rows() != A.cols() || A.rows() == 0)
            throw std::invalid_argument("norm estimation needs a non-empty square matrix");
    }

    Index size() const noexcept { return A_.rows(); }
    const Matrix& matrix() const noexcept { return A_; }
    bool lower() const noexcept { return lower_; }

    Vector apply(const Vector& x) const
    {
        if (lower_)
            return A_.template triangularView<Eigen::Lower>() * x;
        return A_ * x;
    }

    Vector apply_adjoint(const Vector& y) const
    {
        if (lower_)
            return A_.adjoint().template triangularView<Eigen::Upper>() * y;
        return A_.adjoint() * y;
    }

private:
    const Matrix& A_;
    bool lower_;
};

template <class Vector>
double p_norm(const Vector& v, double p)
{
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0)
        return 0.0;
    return m * std::pow((v.cwiseAbs().array() / m).pow(p).sum(), 1.0 / p);
}

Eigen::VectorXd perturbed_ones(Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = 1.0 + 1e-3 * unit(rng);
    return v;
}

// Largest eigenpair of A^H A by restarted Lanczos with full
// reorthogonalization, started from the power-iteration start vector. The
// value reported is ||A u|| for the final unit Ritz vector u.
template <class Matrix>
NormEstimate power_iteration(const Operator<Matrix>& op, const IterationOptions& options)
{
    using Scalar = typename Matrix::Scalar;
    using Vector = typename Operator<Matrix>::Vector;
    if (op.matrix().cwiseAbs().maxCoeff() == 0.0)
        return {0.0, NormKind::Exact2, 0, 0.0};

    const Index n = op.size();
    const Index basis_limit = std::min<Index>(n, kLanczosBasis);
    Vector start = perturbed_ones(n, options.seed).template cast<Scalar>();
    start.normalize();

    NormEstimate est{0.0, NormKind::LowerBound, 0, std::numeric_limits<double>::infinity()};
    int steps = 0;
    bool converged = false;
    while (!converged && steps < options.max_iterations) {
        std::vector<Vector> Q{start};
        std::vector<double> alpha, beta;
        Eigen::VectorXd ritz_coeffs = Eigen::VectorXd::Ones(1);
        for (Index j = 0; j < basis_limit && steps < options.max_iterations; ++j) {
            Vector w = op.apply_adjoint(op.apply(Q.back()));
            ++steps;
            alpha.push_back(std::real(Q.back().dot(w)));
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : Q)
                    w -= q.dot(w) * q;
            const double b = w.norm();

            const auto k = static_cast<Index>(alpha.size());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(Eigen::Map<const Eigen::VectorXd>(alpha.data(), k),
                                       Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1),
                                       Eigen::ComputeEigenvectors);
            const double theta = tri.eigenvalues()(k - 1);
            ritz_coeffs = tri.eigenvectors().col(k - 1);
            // |lambda_max - theta| <= min(res, res^2 / gap)
            const double res = b * std::abs(ritz_coeffs(k - 1));
            double bound = res;
            if (k > 1) {
                const double gap = theta - tri.eigenvalues()(k - 2);
                if (gap > 0.0)
                    bound = std::min(bound, res * res / gap);
            }
            if (b <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(theta, 1e-300) ||
                bound <= options.tolerance * theta) {
                converged = true;
                break;
            }
            beta.push_back(b);
            Q.push_back(w / b);
        }
        Vector u = Vector::Zero(n);
        for (Index i = 0; i < ritz_coeffs.size(); ++i)
            u += ritz_coeffs(i) * Q[static_cast<std::size_t>(i)];
        u.normalize();
        const Vector Au = op.apply(u);
        const double s = Au.norm();
        const Vector w = op.apply_adjoint(Au);
        const double rho = s * s;
        est.value = std::max(est.value, s);
        est.residual = rho > 0.0 ? (w - rho * u).norm() / rho : 0.0;
        start = u;
    }
    est.iterations = steps;
    if (converged)
        est.kind = NormKind::Exact2;
    return est;
}

struct BoydResult
{
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    Eigen::VectorXd vector;
    int iterations = 0;
    bool converged = false;
};

// Nonnegative B only. Every iterate x > 0 gives ||Bx||_p/||x||_p as a lower
// bound and, with s = Bx and z = B^T s^{p-1},
//   ||B||_p^p <= max_k z_k / x_k^{p-1}
// by Hoelder (Schur test), so both sides stay certified at every step.
BoydResult boyd_iteration(const Operator<RealMatrix>& op, double p, const IterationOptions& options)
{
    const double q = p / (p - 1.0);
    const Index n = op.size();
    BoydResult out;
    Eigen::VectorXd x = perturbed_ones(n, options.seed);
    x /= p_norm(x, p);
    out.vector = x;
    int stalled = 0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        out.iterations = it;
        const Eigen::VectorXd y = op.apply(x);
        const double lower = p_norm(y, p);
        const Eigen::VectorXd z = op.apply_adjoint(y.array().pow(p - 1.0).matrix());

        double log_ratio = -std::numeric_limits<double>::infinity();
        for (Index k = 0; k < n; ++k)
            if (z(k) > 0.0)
                log_ratio = std::max(log_ratio, std::log(z(k)) - (p - 1.0) * std::log(x(k)));
        const double upper = std::exp(log_ratio / p);

        bool improved = false;
        if (lower > out.lower) {
            improved = out.lower == 0.0 || lower - out.lower > 1e-3 * options.tolerance * lower;
            out.lower = lower;
            out.vector = x;
        }
        if (upper < out.upper) {
            improved = improved || upper < out.upper * (1.0 - 1e-3 * options.tolerance);
            out.upper = upper;
        }
        if (out.upper - out.lower <= options.tolerance * out.lower) {
            out.converged = true;
            break;
        }
        stalled = improved ? 0 : stalled + 1;
        if (stalled >= 100 || lower == 0.0)
            break;

        x = z.array().pow(q - 1.0).matrix();
        const double floor = 1e-150 * x.maxCoeff();
        x = x.cwiseMax(floor);
        x /= p_norm(x, p);
    }
    if (out.lower == 0.0 && out.upper == 0.0)
        out.converged = true;
    return out;
}

template <class Scalar>
Scalar unit_sign(Scalar v)
{
    const double a = std::abs(v);
    return a == 0.0 ? Scalar(0) : v / a;
}

// |v|^{r-1} sgn(v) / ||v||_r^{r-1}: the norming functional of v in l^r.
template <class Vector>
Vector dual_vector(const Vector& v, double r)
{
    const double nrm = p_norm(v, r);
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i)) / nrm;
        out(i) = unit_sign(v(i)) * std::pow(a, r - 1.0);
    }
    return out;
}

// Sign-aware p-norm power method; returns the best ||Ax||_p seen.
template <class Matrix>
double p_power_method(const Operator<Matrix>& op, double p,
                      typename Operator<Matrix>::Vector x, int max_iterations, double tol)
{
    const double q = p / (p - 1.0);
    const double x_norm = p_norm(x, p);
    if (x_norm == 0.0)
        return 0.0;
    x /= x_norm;
    double best = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        const auto y = op.apply(x);
        const double gamma = p_norm(y, p);
        if (gamma <= best * (1.0 + tol) && it > 0) {
            best = std::max(best, gamma);
            break;
        }
        best = std::max(best, gamma);
        if (gamma == 0.0)
            break;
        const auto z = op.apply_adjoint(dual_vector(y, p));
        const double z_norm = p_norm(z, q);
        if (z_norm == 0.0 || z_norm <= std::real(z.dot(x)) * (1.0 + tol))
            break;
        x = dual_vector(z, q);
    }
    return best;
}

template <class Matrix>
NormBracket signed_bracket(const Operator<Matrix>& op, double p, const IterationOptions& options)
{
    using Scalar = typename Matrix::Scalar;
    using Vector = typename Operator<Matrix>::Vector;
    const Index n = op.size();

    const RealMatrix abs_matrix = op.matrix().cwiseAbs();
    const Operator<RealMatrix> abs_op(abs_matrix, op.lower() ? Structure::LowerTriangular : Structure::General);
    const BoydResult envelope = boyd_iteration(abs_op, p, options);

    double best = 0.0;
    for (Index k = 0; k < n; ++k)
        best = std::max(best, p_norm(op.matrix().col(k), p));

    constexpr int kStartIterations = 100;
    std::vector<Vector> starts;
    starts.push_back(Vector::Ones(n));
    Vector alternating(n);
    for (Index i = 0; i < n; ++i)
        alternating(i) = Scalar(i % 2 == 0 ? 1.0 : -1.0);
    starts.push_back(alternating);
    starts.push_back(envelope.vector.cast<Scalar>());

    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 0; s < kRandomStarts; ++s) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) {
            if constexpr (std::is_same_v<Scalar, complex>)
                v(i) = complex(unit(rng), unit(rng));
            else
                v(i) = unit(rng);
        }
        starts.push_back(std::move(v));
    }
    for (const auto& start : starts)
        best = std::max(best, p_power_method(op, p, start, kStartIterations, options.tolerance));

    NormBracket out;
    out.lower = {best, NormKind::LowerBound, static_cast<int>(starts.size()), 0.0};
    out.upper = {envelope.upper, NormKind::UpperBound, envelope.iterations,
                 best > 0.0 ? (envelope.upper - best) / best : 0.0};
    return out;
}

template <class Matrix>
NormBracket lp_bracket(const Matrix& A, Structure structure, double p, const IterationOptions& options)
{
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("lp_norm needs 1 < p < infinity");
    const Operator<Matrix> op(A, structure);
    if constexpr (std::is_same_v<typename Matrix::Scalar, double>) {
        if ((A.array() >= 0.0).all()) {
            const BoydResult r = boyd_iteration(op, p, options);
            const double gap = r.lower > 0.0 ? (r.upper - r.lower) / r.lower : 0.0;
            return {{r.lower, NormKind::LowerBound, r.iterations, gap},
                    {r.upper, NormKind::UpperBound, r.iterations, gap}};
        }
    }
    return signed_bracket(op, p, options);
}

double estimate_for_schur(const FiniteSection& A, double p)
{
    if (p == 2.0)
        return spectral_norm(A).value;
    return lp_norm(A, p).lower.value;
}

} // namespace

std::string_view to_string(NormKind kind) noexcept
{
    switch (kind) {
    case NormKind::Exact2:
        return "Exact2";
    case NormKind::LowerBound:
        return "LowerBound";
    case NormKind::UpperBound:
        return "UpperBound";
    }
    return "?";
}

namespace {

// A^H A overflows or underflows far from unit scale; rescale a copy there.
template <class Matrix>
NormEstimate scaled_power_iteration(const Matrix& A, Structure structure, const IterationOptions& options)
{
    const double m = A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
    if (!std::isfinite(m))
        throw std::domain_error("spectral_norm needs finite entries");
    if (m == 0.0 || (m < 1e100 && m > 1e-100))
        return power_iteration(Operator<Matrix>(A, structure), options);
    const Matrix scaled = A / m;
    NormEstimate est = power_iteration(Operator<Matrix>(scaled, structure), options);
    est.value *= m;
    return est;
}

} // namespace

NormEstimate spectral_norm(const RealMatrix& A, Structure structure, const IterationOptions& options)
{
    return scaled_power_iteration(A, structure, options);
}

NormEstimate spectral_norm(const ComplexMatrix& A, Structure structure, const IterationOptions& options)
{
    return scaled_power_iteration(A, structure, options);
}

NormEstimate spectral_norm(const FiniteSection& A, const IterationOptions& options)
{
    if (A.is_real())
        return spectral_norm(A.real_part(), A.structure(), options);
    return spectral_norm(A.entries(), A.structure(), options);
}

NormBracket lp_norm(const RealMatrix& A, Structure structure, double p, const IterationOptions& options)
{
    return lp_bracket(A, structure, p, options);
}

NormBracket lp_norm(const ComplexMatrix& A, Structure structure, double p, const IterationOptions& options)
{
    return lp_bracket(A, structure, p, options);
}

NormBracket lp_norm(const FiniteSection& A, double p, const IterationOptions& options)
{
    if (A.is_real())
        return lp_norm(A.real_part(), A.structure(), p, options);
    return lp_norm(A.entries(), A.structure(), p, options);
}

std::vector<FiniteSection> schur_test_catalog(std::size_t N, std::size_t catalog_size, std::uint64_t seed)
{
    std::vector<FiniteSection> catalog;
    catalog.reserve(catalog_size + 2);
    catalog.push_back(triangular_truncation(build_structured(kinds::HilbertTransform{}, N)));
    catalog.push_back(build_structured(kinds::Cesaro{}, N));

    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(kSchurCatalogVersion) * 0x100000001b3ULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> zero_location(0.0, 0.9);
    std::uniform_int_distribution<int> zero_count(1, 3);
    std::bernoulli_distribution coin(0.5);
    const auto n = static_cast<Index>(N);

    for (std::size_t i = 0; i < catalog_size; ++i) {
        switch (i % 3) {
        case 0: {
            ComplexMatrix m = ComplexMatrix::Zero(n, n);
            for (Index r = 0; r < n; ++r)
                for (Index c = 0; c <= r; ++c)
                    m(r, c) = coin(rng) ? 1.0 : -1.0;
            catalog.emplace_back(std::move(m), Structure::LowerTriangular);
            break;
        }
        case 1: {
            std::vector<double> zeros(static_cast<std::size_t>(zero_count(rng)));
            for (auto& z : zeros)
                z = zero_location(rng);
            catalog.push_back(multiplication_matrix(blaschke_symbol(zeros, N), N));
            break;
        }
        default: {
            Eigen::VectorXd u(n), v(n);
            for (Index r = 0; r < n; ++r) {
                u(r) = unit(rng);
                v(r) = unit(rng);
            }
            ComplexMatrix m = (u * v.transpose()).cast<complex>();
            m.triangularView<Eigen::StrictlyUpper>().setZero();
            catalog.emplace_back(std::move(m), Structure::LowerTriangular);
            break;
        }
        }
    }
    return catalog;
}

NormEstimate schur_norm_lower(const FiniteSection& S, double p, std::size_t catalog_size, std::uint64_t seed)
{
    if (!S.is_lower_triangular())
        throw std::invalid_argument("schur_norm_lower needs a lower triangular multiplier");
    if (!(p > 1.0))
        throw std::invalid_argument("schur_norm_lower needs p > 1");
    const auto catalog = schur_test_catalog(S.size(), catalog_size, seed);
    std::vector<double> ratios(catalog.size(), 0.0);
    parallel_for(catalog.size(), [&](std::size_t i) {
        const double base = estimate_for_schur(catalog[i], p);
        if (base > 0.0)
            ratios[i] = estimate_for_schur(hadamard(S, catalog[i]), p) / base;
    });
    return {*std::max_element(ratios.begin(), ratios.end()), NormKind::LowerBound,
            static_cast<int>(catalog.size()), 0.0};
}

std::vector<GrowthRow> norm_growth_curve(const SectionBuilder& builder, std::span<const std::size_t> N_list,
                                         double p, const IterationOptions& options)
{
    if (!(p > 1.0))
        throw std::invalid_argument("norm_growth_curve needs p > 1");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("norm_growth_curve needs strictly increasing sizes");

    std::vector<std::vector<GrowthRow>> per_size(N_list.size());
    parallel_for(N_list.size(), [&](std::size_t i) {
        const std::size_t N = N_list[i];
        const FiniteSection A = builder(N);
        if (p == 2.0) {
            per_size[i] = {{N, p, spectral_norm(A, options), options.seed}};
        } else {
            const NormBracket b = lp_norm(A, p, options);
            per_size[i] = {{N, p, b.lower, options.seed}, {N, p, b.upper, options.seed}};
        }
    });
    std::vector<GrowthRow> rows;
    for (auto& chunk : per_size)
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    return rows;
}

void write_csv(std::ostream& os, std::span<const GrowthRow> rows)
{
    os << "N,p,kind,value,iterations,residual,seed\n";
    for (const auto& r : rows)
        os << r.N << ',' << format_double(r.p) << ',' << to_string(r.estimate.kind) << ','
           << format_double(r.estimate.value) << ',' << r.estimate.iterations << ','
           << format_double(r.estimate.residual) << ',' << r.seed << '\n';
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear needs two equally sized samples of length >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_linear: abscissae are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

} // namespace trsc
