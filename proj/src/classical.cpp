#include "nledge/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ols.hpp"

namespace nledge {

Sample rank_transform(const Sample& x) {
    require_finite(x);
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    Sample ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const Sample& x, const Sample& y) {
    require_same_length(x, y);
    require_finite(x);
    require_finite(y);
    const std::size_t n = x.size();
    if (n < 2) throw sample_too_small_error("pearson requires n >= 2");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw degenerate_input_error("pearson: constant input");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<Sample> rank_all(const Sample& x, const Sample& y, std::span<const Sample> z) {
    std::vector<Sample> ranked;
    ranked.reserve(2 + z.size());
    ranked.push_back(rank_transform(x));
    ranked.push_back(rank_transform(y));
    for (const Sample& zi : z) ranked.push_back(rank_transform(zi));
    return ranked;
}

double partial_pearson(const Sample& x, const Sample& y, std::span<const Sample> z) {
    if (z.empty()) return pearson(x, y);
    const Sample rx = detail::ols_residuals(x, z);
    const Sample ry = detail::ols_residuals(y, z);
    return pearson(rx, ry);
}

}  // namespace

double partial_correlation(const Sample& x, const Sample& y, std::span<const Sample> z,
                           CorrKind kind) {
    require_same_length(x, y);
    for (const Sample& zi : z) require_same_length(x, zi);
    if (x.size() < z.size() + 3)
        throw sample_too_small_error("partial_correlation requires n >= #conditioning + 3");

    if (kind == CorrKind::Spearman) {
        const std::vector<Sample> ranked = rank_all(x, y, z);
        return partial_pearson(ranked[0], ranked[1],
                               std::span<const Sample>(ranked.data() + 2, ranked.size() - 2));
    }
    return partial_pearson(x, y, z);
}

TestResult partial_correlation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                    CorrKind kind) {
    const double r = partial_correlation(x, y, z, kind);
    const double dof = static_cast<double>(x.size()) - 2.0 - static_cast<double>(z.size());

    TestResult result;
    result.method = kind == CorrKind::Pearson ? Method::PearsonPartial : Method::SpearmanPartial;
    result.n_permutations = 0;
    result.seed = 0;

    const double one_minus = 1.0 - r * r;
    if (one_minus <= 1e-300) {
        result.exact_fit = true;
        result.statistic = std::copysign(std::sqrt(dof / 1e-300), r);
        result.p_value = std::numeric_limits<double>::denorm_min();
        return result;
    }
    result.statistic = r * std::sqrt(dof / one_minus);
    result.p_value = student_t_two_sided_p(result.statistic, dof);
    return result;
}

CorrelationMatrix correlation_matrix(std::span<const Sample> vars, CorrKind kind) {
    const int p = static_cast<int>(vars.size());
    CorrelationMatrix m;
    m.dim = p;
    m.entries.assign(static_cast<std::size_t>(p) * p, 1.0);
    std::vector<Sample> ranked;
    std::vector<const Sample*> cols(vars.size());
    if (kind == CorrKind::Spearman) {
        ranked.reserve(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            ranked.push_back(rank_transform(vars[i]));
            cols[i] = &ranked.back();
        }
    } else {
        for (std::size_t i = 0; i < vars.size(); ++i) cols[i] = &vars[i];
    }
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double r = pearson(*cols[static_cast<std::size_t>(i)], *cols[static_cast<std::size_t>(j)]);
            m.entries[static_cast<std::size_t>(i) * p + j] = r;
            m.entries[static_cast<std::size_t>(j) * p + i] = r;
        }
    }
    return m;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw invalid_input_error("incomplete beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw invalid_input_error("incomplete beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) throw invalid_input_error("student_t_cdf: dof must be positive");
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double half_tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw invalid_input_error("student_t_two_sided_p: dof must be positive");
    if (t == 0.0) return 1.0;
    return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

}  // namespace nledge
