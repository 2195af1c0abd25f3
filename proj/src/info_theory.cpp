#include "nledge/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nledge/rng.hpp"

namespace nledge {

DiscretizedSample discretize(const Sample& x, int n_bins, BinScheme scheme) {
    require_finite(x);
    if (n_bins < 1) throw invalid_input_error("discretize: n_bins must be >= 1");
    const std::size_t n = x.size();

    DiscretizedSample d;
    d.n_bins = n_bins;
    d.scheme = scheme;
    d.labels.assign(n, 0);
    if (n_bins == 1) return d;

    if (scheme == BinScheme::EqualFrequency) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
        for (std::size_t r = 0; r < n; ++r) {
            d.labels[idx[r]] = static_cast<int>((r * static_cast<std::size_t>(n_bins)) / n);
        }
    } else {
        const auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
        const double mn = *mn_it, mx = *mx_it;
        if (mn == mx) return d;  // all labels 0
        for (std::size_t i = 0; i < n; ++i) {
            int lab = static_cast<int>((x[i] - mn) / (mx - mn) * n_bins);
            if (lab >= n_bins) lab = n_bins - 1;
            d.labels[i] = lab;
        }
    }
    return d;
}

int default_bins(std::size_t n) {
    return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

namespace {

double entropy_from_counts(std::span<const std::size_t> counts, std::size_t n) {
    const double dn = static_cast<double>(n);
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / dn;
        h -= p * std::log(p);
    }
    return h;
}

// Entropy of the joint distribution of integer codes; counts by sorting.
double entropy_of_codes(std::vector<std::uint64_t> codes) {
    std::sort(codes.begin(), codes.end());
    const std::size_t n = codes.size();
    std::vector<std::size_t> counts;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && codes[j + 1] == codes[i]) ++j;
        counts.push_back(j - i + 1);
        i = j + 1;
    }
    return entropy_from_counts(counts, n);
}

// Mixed-radix code per observation; falls back to lexicographic sorting when
// the code space would overflow 64 bits.
bool try_codes(std::span<const DiscretizedSample> ds, std::vector<std::uint64_t>& codes) {
    std::uint64_t stride = 1;
    for (const DiscretizedSample& d : ds) {
        const std::uint64_t b = static_cast<std::uint64_t>(d.n_bins);
        if (b != 0 && stride > (std::uint64_t{1} << 62) / b) return false;
        stride *= b;
    }
    const std::size_t n = ds.front().size();
    codes.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t code = 0;
        for (const DiscretizedSample& d : ds) {
            code = code * static_cast<std::uint64_t>(d.n_bins) +
                   static_cast<std::uint64_t>(d.labels[i]);
        }
        codes[i] = code;
    }
    return true;
}

double joint_entropy_sorted(std::span<const DiscretizedSample> ds) {
    const std::size_t n = ds.front().size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        for (const DiscretizedSample& d : ds) {
            if (d.labels[a] != d.labels[b]) return d.labels[a] < d.labels[b];
        }
        return false;
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        for (const DiscretizedSample& d : ds) {
            if (d.labels[a] != d.labels[b]) return false;
        }
        return true;
    };
    std::sort(idx.begin(), idx.end(), less);
    std::vector<std::size_t> counts;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && equal(idx[j + 1], idx[i])) ++j;
        counts.push_back(j - i + 1);
        i = j + 1;
    }
    return entropy_from_counts(counts, n);
}

}  // namespace

double entropy(const DiscretizedSample& d) {
    if (d.labels.empty()) throw invalid_input_error("entropy: empty sample");
    std::vector<std::size_t> counts(static_cast<std::size_t>(d.n_bins), 0);
    for (int lab : d.labels) {
        if (lab < 0 || lab >= d.n_bins) throw invalid_input_error("entropy: label out of range");
        ++counts[static_cast<std::size_t>(lab)];
    }
    return entropy_from_counts(counts, d.labels.size());
}

double joint_entropy(std::span<const DiscretizedSample> ds) {
    if (ds.empty()) throw invalid_input_error("joint_entropy: no variables");
    const std::size_t n = ds.front().size();
    if (n == 0) throw invalid_input_error("joint_entropy: empty sample");
    for (const DiscretizedSample& d : ds) {
        if (d.size() != n) throw invalid_input_error("joint_entropy: length mismatch");
    }
    std::vector<std::uint64_t> codes;
    if (try_codes(ds, codes)) return entropy_of_codes(std::move(codes));
    return joint_entropy_sorted(ds);
}

double cmi(const DiscretizedSample& x, const DiscretizedSample& y,
           std::span<const DiscretizedSample> z) {
    if (x.size() != y.size()) throw invalid_input_error("cmi: length mismatch");
    for (const DiscretizedSample& zi : z) {
        if (zi.size() != x.size()) throw invalid_input_error("cmi: length mismatch");
    }

    double v;
    if (z.empty()) {
        const DiscretizedSample xy[2] = {x, y};
        v = entropy(x) + entropy(y) - joint_entropy(std::span<const DiscretizedSample>(xy, 2));
    } else {
        std::vector<DiscretizedSample> xz, yz, xyz, zz;
        xz.push_back(x);
        yz.push_back(y);
        xyz.push_back(x);
        xyz.push_back(y);
        for (const DiscretizedSample& zi : z) {
            xz.push_back(zi);
            yz.push_back(zi);
            xyz.push_back(zi);
            zz.push_back(zi);
        }
        v = joint_entropy(xz) + joint_entropy(yz) - joint_entropy(xyz) - joint_entropy(zz);
    }
    // The plug-in estimate is mathematically non-negative; small negatives are
    // round-off.
    if (v < 0.0 && v >= -1e-12) v = 0.0;
    return v;
}

TestResult cmi_permutation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                int n_bins, BinScheme scheme, int n_perm, std::uint64_t seed) {
    if (n_perm < 1) throw invalid_input_error("n_perm must be >= 1");
    require_same_length(x, y);
    for (const Sample& zi : z) require_same_length(x, zi);

    const DiscretizedSample dx = discretize(x, n_bins, scheme);
    const DiscretizedSample dy = discretize(y, n_bins, scheme);
    std::vector<DiscretizedSample> dz;
    dz.reserve(z.size());
    for (const Sample& zi : z) dz.push_back(discretize(zi, n_bins, scheme));

    TestResult result;
    result.method = Method::Cmi;
    result.n_permutations = n_perm;
    result.seed = seed;
    result.statistic = cmi(dx, dy, std::span<const DiscretizedSample>(dz));

    const std::size_t n = dx.size();

    // Under permutations of x only, H(Y,Z) and H(Z) are fixed; cache compact
    // codes for Z and (Y,Z) and recount the x-dependent terms per round.
    std::vector<std::uint64_t> zcode(n, 0), yzcode(n, 0);
    bool coded = true;
    {
        std::vector<DiscretizedSample> zz(dz.begin(), dz.end());
        if (!zz.empty()) coded = try_codes(zz, zcode);
        std::vector<DiscretizedSample> yz;
        yz.push_back(dy);
        for (const DiscretizedSample& d : dz) yz.push_back(d);
        std::vector<std::uint64_t> tmp;
        if (coded && try_codes(yz, tmp)) {
            yzcode = std::move(tmp);
        } else {
            coded = false;
        }
    }

    auto compact = [&](std::vector<std::uint64_t>& codes) -> std::uint64_t {
        std::vector<std::uint64_t> uniq(codes);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (std::uint64_t& c : codes) {
            c = static_cast<std::uint64_t>(
                std::lower_bound(uniq.begin(), uniq.end(), c) - uniq.begin());
        }
        return static_cast<std::uint64_t>(uniq.size());
    };

    int count = 0;
    if (coded) {
        const std::uint64_t mz = compact(zcode);
        const std::uint64_t myz = compact(yzcode);
        const double h_z_fixed =
            dz.empty() ? 0.0 : entropy_of_codes(std::vector<std::uint64_t>(zcode));
        const double h_yz_fixed = entropy_of_codes(std::vector<std::uint64_t>(yzcode));
        const std::uint64_t b = static_cast<std::uint64_t>(dx.n_bins);

        const double h_x_fixed = entropy(dx);  // invariant under relabelling of rows

        std::vector<std::size_t> cnt_xz(b * std::max<std::uint64_t>(mz, 1), 0);
        std::vector<std::size_t> cnt_xyz(b * myz, 0);
        std::vector<std::uint64_t> xlab(n);
        for (std::size_t i = 0; i < n; ++i) xlab[i] = static_cast<std::uint64_t>(dx.labels[i]);

        for (int r = 0; r < n_perm; ++r) {
            const std::vector<int> perm =
                random_permutation(static_cast<int>(n), CounterRng(derive_seed(seed, r + 1)));
            std::fill(cnt_xz.begin(), cnt_xz.end(), 0);
            std::fill(cnt_xyz.begin(), cnt_xyz.end(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t xl = xlab[static_cast<std::size_t>(perm[i])];
                if (!dz.empty()) ++cnt_xz[xl * mz + zcode[i]];
                ++cnt_xyz[xl * myz + yzcode[i]];
            }
            double s;
            const double h_xyz = entropy_from_counts(cnt_xyz, n);
            if (dz.empty()) {
                // h_yz_fixed is H(Y) here.
                s = h_x_fixed + h_yz_fixed - h_xyz;
            } else {
                const double h_xz = entropy_from_counts(cnt_xz, n);
                s = h_xz + h_yz_fixed - h_xyz - h_z_fixed;
            }
            if (s < 0.0 && s >= -1e-12) s = 0.0;
            if (s >= result.statistic) ++count;
        }
    } else {
        // Code space too large for packing; rebuild the permuted sample.
        for (int r = 0; r < n_perm; ++r) {
            const std::vector<int> perm =
                random_permutation(static_cast<int>(n), CounterRng(derive_seed(seed, r + 1)));
            DiscretizedSample px = dx;
            for (std::size_t i = 0; i < n; ++i)
                px.labels[i] = dx.labels[static_cast<std::size_t>(perm[i])];
            if (cmi(px, dy, std::span<const DiscretizedSample>(dz)) >= result.statistic) ++count;
        }
    }

    result.p_value = static_cast<double>(1 + count) / static_cast<double>(1 + n_perm);
    return result;
}

}  // namespace nledge
