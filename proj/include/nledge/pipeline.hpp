#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nledge/types.hpp"

namespace nledge {

// Preprocessing (none / center / residualize) and the two-stage edge decision:
// analytic linear test, then residualize and run the nonlinear permutation
// test.

enum class PreprocessMode { Uncentered, Centered, Residualized };

const char* preprocess_name(PreprocessMode m);
PreprocessMode preprocess_from_name(const std::string& name);

// Which permutation test backs the nonlinear stage of detect_edges.
enum class NonlinearMethod { Pdcor, Cmi };

// Subtracts each column's sample mean.
Dataset center(const Dataset& data);

// Least-squares residuals of target on {intercept, predictors}.
Sample residualize(const Sample& target, std::span<const Sample> predictors);

// Applies a mode to a simulation network dataset (columns A, B, C[, D]).
// Residualized mode replaces C by its residuals on {A, B[, D]} and D by its
// residuals on {A, B}; the other columns pass through. For arbitrary analysis
// data use detect_edges, which residualizes per edge.
Dataset preprocess_network(const Dataset& data, PreprocessMode mode);

// One row of the edge-decision table.
struct EdgeDecision {
    std::string var1, var2;  // var1 < var2 lexicographically
    bool linear_significant = false;
    bool nonlinear_significant = false;
    TestResult linear_result;
    TestResult nonlinear_result;
    double alpha = 0.05;
};

// For every unordered column pair, in lexicographic name order: a partial
// Pearson t test given all other columns, then a permutation test on the
// residualized pair conditional on those columns. var1 is residualized on the
// other columns, var2 on the other columns plus var1, which removes the
// pair's linear association before the nonlinear test. Edge e draws its
// permutations from derive_seed(seed, e).
std::vector<EdgeDecision> detect_edges(const Dataset& data, double alpha, int n_perm,
                                       std::uint64_t seed, NonlinearMethod method = NonlinearMethod::Pdcor,
                                       int threads = 1);

}  // namespace nledge
