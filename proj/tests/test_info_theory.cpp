#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nledge/info_theory.hpp"
#include "nledge/rng.hpp"
#include "oracles.hpp"

using namespace nledge;

namespace {

DiscretizedSample from_labels(std::vector<int> labels, int bins) {
    DiscretizedSample d;
    d.labels = std::move(labels);
    d.n_bins = bins;
    return d;
}

}  // namespace

TEST_CASE("discretize: equal-frequency and equal-width hand cases") {
    CHECK(discretize({1.0, 2.0, 3.0, 4.0}, 2, BinScheme::EqualFrequency).labels ==
          std::vector<int>{0, 0, 1, 1});
    CHECK(discretize({0.0, 0.1, 0.9, 1.0}, 2, BinScheme::EqualWidth).labels ==
          std::vector<int>{0, 0, 1, 1});
    CHECK(discretize({5.0, 5.0, 5.0}, 3, BinScheme::EqualWidth).labels == std::vector<int>{0, 0, 0});

    // max value lands in the top bin
    CHECK(discretize({0.0, 1.0, 2.0, 3.0, 4.0}, 4, BinScheme::EqualWidth).labels.back() == 3);
    CHECK_THROWS_AS(discretize({1.0}, 0, BinScheme::EqualWidth), invalid_input_error);
}

TEST_CASE("discretize: equal-frequency bin counts stay within one of each other") {
    const Sample x = oracle::random_sample(1000, 77);
    const DiscretizedSample d = discretize(x, 10, BinScheme::EqualFrequency);
    std::vector<int> counts(10, 0);
    for (int lab : d.labels) ++counts[static_cast<std::size_t>(lab)];
    for (int c : counts) {
        CHECK(c >= 99);
        CHECK(c <= 101);
    }
}

TEST_CASE("entropy: degenerate, fair coin, direct summation") {
    CHECK(entropy(from_labels({2, 2, 2, 2}, 3)) == 0.0);

    std::vector<int> coin(100);
    for (std::size_t i = 0; i < 100; ++i) coin[i] = i < 50 ? 0 : 1;
    CHECK(entropy(from_labels(coin, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    // counts {1,2,3} over n = 6
    const double expected = -(1.0 / 6.0) * std::log(1.0 / 6.0) - (2.0 / 6.0) * std::log(2.0 / 6.0) -
                            (3.0 / 6.0) * std::log(3.0 / 6.0);
    CHECK(entropy(from_labels({0, 1, 1, 2, 2, 2}, 3)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("entropy invariants: bounds, permutation and relabel invariance") {
    const Sample x = oracle::random_sample(200, 88);
    const DiscretizedSample d = discretize(x, 8, BinScheme::EqualFrequency);
    const double h = entropy(d);
    std::vector<bool> seen(8, false);
    for (int lab : d.labels) seen[static_cast<std::size_t>(lab)] = true;
    const double occupied =
        static_cast<double>(std::count(seen.begin(), seen.end(), true));
    CHECK(h >= 0.0);
    CHECK(h <= std::log(occupied) + 1e-12);

    // a sparse labelling: 3 occupied bins out of 50 caps entropy at ln 3
    DiscretizedSample sparse;
    sparse.n_bins = 50;
    sparse.labels = {0, 0, 17, 17, 49, 49};
    CHECK(entropy(sparse) <= std::log(3.0) + 1e-12);
    CHECK(entropy(sparse) == doctest::Approx(std::log(3.0)).epsilon(1e-14));

    DiscretizedSample shuffled = d;
    std::reverse(shuffled.labels.begin(), shuffled.labels.end());
    CHECK(entropy(shuffled) == h);

    DiscretizedSample relabelled = d;
    for (int& lab : relabelled.labels) lab = 7 - lab;
    CHECK(entropy(relabelled) == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("joint_entropy: duplicated variable, product distribution, oracle, order") {
    const Sample x = oracle::random_sample(60, 91);
    const DiscretizedSample d = discretize(x, 4, BinScheme::EqualFrequency);
    const DiscretizedSample dd[2] = {d, d};
    CHECK(joint_entropy(std::span<const DiscretizedSample>(dd, 2)) ==
          doctest::Approx(entropy(d)).epsilon(1e-12));

    // two exactly balanced independent binary variables
    std::vector<int> a(16), b(16);
    for (std::size_t i = 0; i < 16; ++i) {
        a[i] = static_cast<int>(i / 8);
        b[i] = static_cast<int>((i / 2) % 2);
    }
    const DiscretizedSample ab[2] = {from_labels(a, 2), from_labels(b, 2)};
    CHECK(joint_entropy(std::span<const DiscretizedSample>(ab, 2)) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));

    // three-variable case against a tuple-counting oracle
    std::vector<DiscretizedSample> three;
    for (std::uint64_t s = 0; s < 3; ++s)
        three.push_back(discretize(oracle::random_sample(30, 500 + s), 3, BinScheme::EqualFrequency));
    std::map<std::vector<int>, int> counts;
    for (std::size_t i = 0; i < 30; ++i)
        ++counts[{three[0].labels[i], three[1].labels[i], three[2].labels[i]}];
    double expected = 0.0;
    for (const auto& [key, c] : counts) {
        const double p = c / 30.0;
        expected -= p * std::log(p);
    }
    CHECK(joint_entropy(three) == doctest::Approx(expected).epsilon(1e-12));

    std::vector<DiscretizedSample> reordered = {three[2], three[0], three[1]};
    CHECK(joint_entropy(reordered) == doctest::Approx(joint_entropy(three)).epsilon(1e-14));

    const DiscretizedSample bad[2] = {three[0], from_labels({0, 1}, 2)};
    CHECK_THROWS_AS(joint_entropy(std::span<const DiscretizedSample>(bad, 2)), invalid_input_error);
}

TEST_CASE("cmi: determined, independent-conditioner, oracle, empty z") {
    const Sample x = oracle::random_sample(40, 111);
    const DiscretizedSample d = discretize(x, 4, BinScheme::EqualFrequency);

    // x = y = z: z determines both, nothing remains.
    const DiscretizedSample zsame[1] = {d};
    CHECK(cmi(d, d, std::span<const DiscretizedSample>(zsame, 1)) == 0.0);

    // x = y with z independent of x (balanced so the empirical joint
    // factorizes exactly): residual information is H(X).
    std::vector<int> xb(40), zb(40);
    for (std::size_t i = 0; i < 40; ++i) {
        xb[i] = i < 20 ? 0 : 1;
        zb[i] = static_cast<int>(i % 4);
    }
    const DiscretizedSample dxb = from_labels(xb, 2);
    const DiscretizedSample zind[1] = {from_labels(zb, 4)};
    CHECK(cmi(dxb, dxb, std::span<const DiscretizedSample>(zind, 1)) ==
          doctest::Approx(entropy(dxb)).epsilon(1e-12));

    // random triple against the pmf-summation oracle
    const DiscretizedSample y = discretize(oracle::random_sample(40, 113), 3, BinScheme::EqualFrequency);
    const DiscretizedSample z = discretize(oracle::random_sample(40, 114), 3, BinScheme::EqualFrequency);
    const DiscretizedSample zs[1] = {z};
    const double expected = oracle::cmi_pmf(d.labels, y.labels, {z.labels});
    CHECK(cmi(d, y, std::span<const DiscretizedSample>(zs, 1)) ==
          doctest::Approx(expected).epsilon(1e-10));

    // empty conditioning set is H(X) + H(Y) - H(X,Y) exactly
    const DiscretizedSample xy[2] = {d, y};
    CHECK(cmi(d, y, {}) ==
          entropy(d) + entropy(y) - joint_entropy(std::span<const DiscretizedSample>(xy, 2)));
    CHECK(cmi(d, y, {}) >= 0.0);
}

TEST_CASE("cmi_permutation_test: dominant statistic, exact statistic, determinism") {
    const Sample x = oracle::normal_sample(200, 121);
    const Sample z = oracle::normal_sample(200, 122);
    const Sample zs[1] = {z};

    const TestResult r =
        cmi_permutation_test(x, x, std::span<const Sample>(zs, 1), 14, BinScheme::EqualFrequency, 199, 5);
    CHECK(r.p_value == 1.0 / 200.0);

    const DiscretizedSample dx = discretize(x, 14, BinScheme::EqualFrequency);
    const DiscretizedSample dz[1] = {discretize(z, 14, BinScheme::EqualFrequency)};
    CHECK(r.statistic == cmi(dx, dx, std::span<const DiscretizedSample>(dz, 1)));

    const TestResult again =
        cmi_permutation_test(x, x, std::span<const Sample>(zs, 1), 14, BinScheme::EqualFrequency, 199, 5);
    CHECK(again.p_value == r.p_value);

    const TestResult other =
        cmi_permutation_test(x, x, std::span<const Sample>(zs, 1), 14, BinScheme::EqualFrequency, 199, 6);
    CHECK(other.statistic == r.statistic);
}

TEST_CASE("cmi_permutation_test: fast path agrees with the generic path") {
    // The counting fast path and a literal rebuild-and-recompute loop must
    // produce the same p-value.
    const Sample x = oracle::normal_sample(60, 131);
    const Sample y = oracle::normal_sample(60, 132);
    const Sample z = oracle::normal_sample(60, 133);
    const Sample zs[1] = {z};
    const int n_perm = 50;
    const std::uint64_t seed = 77;

    const TestResult fast = cmi_permutation_test(x, y, std::span<const Sample>(zs, 1), 5,
                                                 BinScheme::EqualFrequency, n_perm, seed);

    const DiscretizedSample dx = discretize(x, 5, BinScheme::EqualFrequency);
    const DiscretizedSample dy = discretize(y, 5, BinScheme::EqualFrequency);
    const DiscretizedSample dz[1] = {discretize(z, 5, BinScheme::EqualFrequency)};
    const double stat = cmi(dx, dy, std::span<const DiscretizedSample>(dz, 1));
    int count = 0;
    for (int r = 0; r < n_perm; ++r) {
        const std::vector<int> perm = random_permutation(60, CounterRng(derive_seed(seed, r + 1)));
        DiscretizedSample px = dx;
        for (std::size_t i = 0; i < 60; ++i) px.labels[i] = dx.labels[static_cast<std::size_t>(perm[i])];
        if (cmi(px, dy, std::span<const DiscretizedSample>(dz, 1)) >= stat) ++count;
    }
    CHECK(fast.p_value == doctest::Approx((1.0 + count) / (1.0 + n_perm)).epsilon(1e-15));
}

TEST_CASE("default_bins") {
    CHECK(default_bins(200) == 15);
    CHECK(default_bins(100) == 10);
    CHECK(default_bins(1) == 1);
}
