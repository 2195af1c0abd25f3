#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nledge/types.hpp"

namespace nledge {

// Plug-in entropy, mutual information, and conditional mutual information on
// binned data, in nats, with a permutation significance test.

enum class BinScheme { EqualFrequency, EqualWidth };

struct DiscretizedSample {
    std::vector<int> labels;  // bin index per observation, each in 0..n_bins-1
    int n_bins = 1;
    BinScheme scheme = BinScheme::EqualFrequency;

    std::size_t size() const { return labels.size(); }
};

// Equal-frequency: rank-order binning, bin counts differ by at most one when
// values are distinct (ties broken by original position). Equal-width: edges
// uniform over [min, max], the maximum lands in the top bin; a constant sample
// maps entirely to bin 0.
DiscretizedSample discretize(const Sample& x, int n_bins, BinScheme scheme);

// Default bin count ceil(sqrt(n)).
int default_bins(std::size_t n);

// Plug-in entropy -sum p ln p over occupied bins, in nats.
double entropy(const DiscretizedSample& d);

// Entropy of the empirical joint distribution over label tuples.
double joint_entropy(std::span<const DiscretizedSample> ds);

// I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z), with Z the tuple of all
// conditioning variables; empty z gives H(X) + H(Y) - H(X,Y). Round-off
// negatives above -1e-12 clamp to 0.
double cmi(const DiscretizedSample& x, const DiscretizedSample& y,
           std::span<const DiscretizedSample> z);

// Permutation test: discretizes the raw samples, takes cmi as the statistic,
// and permutes x's labels only; add-one p-value, per-permutation substreams
// derived from (seed, r+1).
TestResult cmi_permutation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                int n_bins, BinScheme scheme, int n_perm, std::uint64_t seed);

}  // namespace nledge
