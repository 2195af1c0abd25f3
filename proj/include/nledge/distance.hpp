#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nledge/types.hpp"

namespace nledge {

// Distance-correlation machinery for scalar samples: pairwise distance
// matrices, double (D-) and unbiased (U-) centering, distance covariance and
// correlation, the bias-corrected correlation R*, partial distance
// correlation, and its permutation significance test.

// Matrix of absolute pairwise differences |x_j - x_k|.
SymmetricMatrix pairwise_distances(const Sample& x);

// Subtracts row and column means and adds back the grand mean.
SymmetricMatrix double_center(const SymmetricMatrix& a);

// Unbiased centering: off-diagonal entries become
//   a(i,j) - rowsum_i/(n-2) - colsum_j/(n-2) + total/((n-1)*(n-2)),
// the diagonal is zero by definition. Requires n >= 4.
SymmetricMatrix u_center(const SymmetricMatrix& a);

// Squared sample distance covariance: mean of the elementwise product of the
// double-centered matrices. Tiny negative round-off (>= -1e-12) clamps to 0.
double dcov2(const Sample& x, const Sample& y);

double dvar2(const Sample& x);

// dcov2 / sqrt(dvar2(x) * dvar2(y)), in [0,1]; 0 when either variance is 0.
double dcor2(const Sample& x, const Sample& y);

// Bias-corrected distance correlation: normalized Frobenius inner product of
// the U-centered matrices. May be negative in sample; 0 when either norm is 0.
double r_star(const Sample& x, const Sample& y);
double r_star(const SymmetricMatrix& ux, const SymmetricMatrix& uy);

// Partial distance correlation of x and y given the conditioning set z.
// Empty z returns r_star(x, y). One z applies
//   (R*(x,y) - R*(x,z) R*(y,z)) / (sqrt(1-R*(x,z)^2) sqrt(1-R*(y,z)^2));
// several z are partialled out one at a time, in input order, by the same
// identity applied to the running R* values. A denominator factor
// 1 - R*^2 <= 1e-12 yields 0 for that pair and bumps *degenerate_count.
double pdcor(const Sample& x, const Sample& y, std::span<const Sample> z,
             int* degenerate_count = nullptr);

// Permutation significance test for pdcor. The observed statistic is
// pdcor(x,y,z); each of n_perm rounds permutes the observation indices of x
// only (y and z fixed) and recomputes the statistic; the p-value is
// (1 + #{permuted >= observed}) / (1 + n_perm). Permutation r draws its
// shuffle from the substream derive_seed(seed, r+1), so results do not depend
// on evaluation order.
TestResult pdcor_permutation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                  int n_perm, std::uint64_t seed);

// Same test on precomputed U-centered matrices; used by callers that share
// conditioning matrices across many tests.
TestResult pdcor_permutation_test(const SymmetricMatrix& ux, const SymmetricMatrix& uy,
                                  std::span<const SymmetricMatrix* const> uz, int n_perm,
                                  std::uint64_t seed);

}  // namespace nledge
