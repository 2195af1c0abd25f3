#pragma once

#include <span>

#include "nledge/types.hpp"

namespace nledge {

// Partial Pearson and partial Spearman correlations with the standard
// t-distributed significance test; the linear/monotonic baselines.

enum class CorrKind { Pearson, Spearman };

// Ranks 1..n; ties receive the average of the tied ranks.
Sample rank_transform(const Sample& x);

// Sample Pearson correlation; throws degenerate_input_error on constant input.
double pearson(const Sample& x, const Sample& y);

// Correlation of the least-squares residuals of x and y after projecting each
// onto {1, z_1..z_k}. Spearman rank-transforms every input first, then runs
// the Pearson route; the two kinds are otherwise identical.
double partial_correlation(const Sample& x, const Sample& y, std::span<const Sample> z,
                           CorrKind kind);

// t test for the partial correlation: t = r * sqrt((n-2-k)/(1-r^2)) against
// Student's t with n-2-k degrees of freedom, two-sided. An exact fit |r| = 1
// reports the minimum positive p-value and sets exact_fit.
TestResult partial_correlation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                    CorrKind kind);

// Pairwise correlation matrix over a set of equally long samples.
struct CorrelationMatrix {
    int dim = 0;
    std::vector<double> entries;  // row-major dim x dim
    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }
};
CorrelationMatrix correlation_matrix(std::span<const Sample> vars, CorrKind kind);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation, absolute accuracy well below 1e-10 over the tested range.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with dof degrees of freedom.
double student_t_cdf(double t, double dof);

// Two-sided p-value for an observed t statistic.
double student_t_two_sided_p(double t, double dof);

}  // namespace nledge
