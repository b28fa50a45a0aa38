#include "trsc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "trsc/parallel.hpp"

namespace trsc {

namespace {

using Index = Eigen::Index;

constexpr double kLogScaleLimit = 690.7755; // log(1e300)
constexpr double kConditioningLimit = 1e12;

template <class Matrix>
void append_root(PowerNormSequence& out, const Matrix& P, Structure structure, double log_scale, int n)
{
    double lower = 0.0;
    double upper = 0.0;
    if (out.p == 2.0) {
        lower = upper = spectral_norm(P, structure).value;
    } else {
        const NormBracket b = lp_norm(P, structure, out.p);
        lower = b.lower.value;
        upper = b.upper.value;
    }
    auto root = [&](double norm) { return norm > 0.0 ? std::exp((std::log(norm) + log_scale) / n) : 0.0; };
    out.rows.push_back({n, root(lower), root(upper)});
}

template <class Matrix>
PowerNormSequence powers_impl(const Matrix& A, Structure structure, double p, int n_max)
{
    PowerNormSequence out;
    out.p = p;
    const bool lower = structure == Structure::LowerTriangular;
    Matrix P = A;
    double log_scale = 0.0;
    bool zero = false;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1 && !zero) {
            Matrix next = lower ? Matrix(A.template triangularView<Eigen::Lower>() * P) : Matrix(A * P);
            P.swap(next);
        }
        if (!zero) {
            const double m = P.cwiseAbs().maxCoeff();
            if (m == 0.0) {
                zero = true;
            } else {
                P /= m;
                log_scale += std::log(m);
                if (std::abs(log_scale) > kLogScaleLimit)
                    out.rescaled = true;
            }
        }
        if (zero)
            out.rows.push_back({n, 0.0, 0.0});
        else
            append_root(out, P, structure, log_scale, n);
    }
    return out;
}

void require_p(double p)
{
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("exponent p must satisfy 1 < p < infinity");
}

} // namespace

PowerNormSequence power_norm_sequence(const FiniteSection& A, double p, int n_max)
{
    require_p(p);
    if (n_max < 1)
        throw std::invalid_argument("power_norm_sequence needs n_max >= 1");
    if (A.is_real())
        return powers_impl(A.real_part(), A.structure(), p, n_max);
    return powers_impl(A.entries(), A.structure(), p, n_max);
}

FiniteSection resolvent_section(const CoefficientSequence& g, complex lambda, std::size_t N,
                                const WeightSequence& omega, double p)
{
    if (lambda == complex{})
        throw std::invalid_argument("resolvent needs lambda != 0");
    const FiniteSection T = volterra_operator_matrix(g, N, omega, p);
    const auto n = static_cast<Index>(N);
    ComplexMatrix M = ComplexMatrix::Identity(n, n) - T.entries() / lambda;

    ComplexMatrix R;
    if ((M.imag().array() == 0.0).all()) {
        const RealMatrix Mr = M.real();
        RealMatrix Rr = RealMatrix::Identity(n, n);
        Mr.triangularView<Eigen::UnitLower>().solveInPlace(Rr);
        R = Rr.cast<complex>();
    } else {
        R = ComplexMatrix::Identity(n, n);
        M.triangularView<Eigen::UnitLower>().solveInPlace(R);
    }
    R.triangularView<Eigen::StrictlyUpper>().setZero();
    return FiniteSection(std::move(R), Structure::LowerTriangular);
}

double ResolventProbe::max_growth() const
{
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        worst = std::max(worst, rows[i].upper.value / rows[i - 1].upper.value - 1.0);
    return worst;
}

ResolventProbe resolvent_probe(const CoefficientSequence& g, complex lambda, double p,
                               std::span<const std::size_t> N_list, const WeightSequence& omega)
{
    require_p(p);
    if (lambda == complex{})
        throw std::invalid_argument("resolvent_probe needs lambda != 0");
    ResolventProbe probe{lambda, std::vector<ResolventRow>(N_list.size())};
    parallel_for(N_list.size(), [&](std::size_t i) {
        const std::size_t N = N_list[i];
        const FiniteSection R = resolvent_section(g, lambda, N, omega, p);
        ResolventRow row{N, {}, {}, R.entries().cwiseAbs().maxCoeff(), false};
        row.ill_conditioned = row.max_entry > kConditioningLimit;
        if (p == 2.0) {
            row.lower = row.upper = spectral_norm(R);
        } else {
            const NormBracket b = lp_norm(R, p);
            row.lower = b.lower;
            row.upper = b.upper;
        }
        probe.rows[i] = row;
    });
    return probe;
}

QuasinilpotencyReport quasinilpotency_report(const CoefficientSequence& g, const WeightSequence& omega,
                                             double p, std::span<const std::size_t> N_list, int n_max,
                                             std::span<const complex> lambda_grid)
{
    require_p(p);
    if (N_list.empty())
        throw std::invalid_argument("quasinilpotency_report needs at least one size");
    QuasinilpotencyReport report;
    report.p = p;
    report.power_section_size = *std::max_element(N_list.begin(), N_list.end());
    report.weight_ratio_diagnostic = omega.ratio_diagnostic();

    const FiniteSection T = volterra_operator_matrix(g, report.power_section_size, omega, p);
    report.powers = power_norm_sequence(T, p, n_max);
    for (const complex lambda : lambda_grid)
        report.resolvents.push_back(resolvent_probe(g, lambda, p, N_list, omega));

    const auto& rows = report.powers.rows;
    report.roots_decreasing = true;
    std::vector<double> log_n, log_root;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].n < 4)
            continue;
        if (i + 1 < rows.size()) {
            const double a = rows[i].lower_root;
            const double b = rows[i + 1].lower_root;
            if (!(b < a || (a == 0.0 && b == 0.0)))
                report.roots_decreasing = false;
        }
        if (rows[i].lower_root > 0.0) {
            log_n.push_back(std::log(static_cast<double>(rows[i].n)));
            log_root.push_back(std::log(rows[i].lower_root));
        }
    }
    if (log_n.size() >= 2)
        report.root_decay_slope = fit_linear(log_n, log_root).slope;

    bool ill = false;
    for (const auto& probe : report.resolvents) {
        report.max_resolvent_growth = std::max(report.max_resolvent_growth, probe.max_growth());
        for (const auto& row : probe.rows)
            ill = ill || row.ill_conditioned;
    }
    const bool consistent = report.roots_decreasing && !ill
                         && report.max_resolvent_growth <= kResolventGrowthLimit;
    report.verdict = consistent ? kVerdictConsistent : kVerdictInconclusive;
    return report;
}

void write_json(std::ostream& os, const QuasinilpotencyReport& report)
{
    using nlohmann::json;
    json powers = json::array();
    for (const auto& r : report.powers.rows)
        powers.push_back({{"n", r.n}, {"lower_root", r.lower_root}, {"upper_root", r.upper_root}});
    json resolvents = json::array();
    for (const auto& probe : report.resolvents) {
        json rows = json::array();
        for (const auto& r : probe.rows)
            rows.push_back({{"N", r.N},
                            {"lower", r.lower.value},
                            {"lower_kind", to_string(r.lower.kind)},
                            {"upper", r.upper.value},
                            {"upper_kind", to_string(r.upper.kind)},
                            {"max_entry", r.max_entry},
                            {"ill_conditioned", r.ill_conditioned}});
        resolvents.push_back({{"lambda", {probe.lambda.real(), probe.lambda.imag()}},
                              {"max_growth", probe.max_growth()},
                              {"rows", rows}});
    }
    json out = {{"p", report.p},
                {"power_section_size", report.power_section_size},
                {"weight_ratio_diagnostic", report.weight_ratio_diagnostic},
                {"powers", {{"rescaled", report.powers.rescaled}, {"rows", powers}}},
                {"resolvents", resolvents},
                {"summary",
                 {{"roots_decreasing", report.roots_decreasing},
                  {"root_decay_slope", report.root_decay_slope},
                  {"max_resolvent_growth", report.max_resolvent_growth},
                  {"verdict", report.verdict}}}};
    os << out.dump(2) << '\n';
}

void write_csv(std::ostream& os, const PowerNormSequence& powers)
{
    os << "n,lower_root,upper_root\n";
    for (const auto& r : powers.rows)
        os << r.n << ',' << format_double(r.lower_root) << ',' << format_double(r.upper_root) << '\n';
}

void write_csv(std::ostream& os, std::span<const ResolventProbe> probes)
{
    os << "lambda_re,lambda_im,N,lower,upper,max_entry,ill_conditioned\n";
    for (const auto& probe : probes)
        for (const auto& r : probe.rows)
            os << format_double(probe.lambda.real()) << ',' << format_double(probe.lambda.imag()) << ','
               << r.N << ',' << format_double(r.lower.value) << ',' << format_double(r.upper.value) << ','
               << format_double(r.max_entry) << ',' << (r.ill_conditioned ? 1 : 0) << '\n';
}

} // namespace trsc
