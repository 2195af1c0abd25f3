#include <doctest.h>

#include <cmath>

#include "nledge/distance.hpp"
#include "nledge/rng.hpp"
#include "oracles.hpp"

using namespace nledge;

TEST_CASE("pairwise_distances basics") {
    const Sample x = {0.0, 3.0, 4.0};
    const SymmetricMatrix m = pairwise_distances(x);
    const double expected[3][3] = {{0, 3, 4}, {3, 0, 1}, {4, 1, 0}};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(m(j, k) == expected[j][k]);

    const SymmetricMatrix c = pairwise_distances({7.5, 7.5, 7.5});
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(c(j, k) == 0.0);

    CHECK_THROWS_AS(pairwise_distances({1.0, std::nan("")}), invalid_input_error);
    CHECK_THROWS_AS(pairwise_distances({}), invalid_input_error);
}

TEST_CASE("pairwise_distances matches the double-loop oracle exactly") {
    const Sample x = oracle::random_sample(20, 101, -5.0, 5.0);
    const SymmetricMatrix m = pairwise_distances(x);
    const auto ref = oracle::distances(x);
    for (int j = 0; j < 20; ++j)
        for (int k = 0; k < 20; ++k) CHECK(m(j, k) == ref[j][k]);
}

TEST_CASE("raw distance matrices: symmetry, zero diagonal, triangle inequality") {
    const Sample x = oracle::random_sample(12, 55, -2.0, 9.0);
    const SymmetricMatrix m = pairwise_distances(x);
    for (int j = 0; j < 12; ++j) {
        CHECK(m(j, j) == 0.0);
        for (int k = 0; k < 12; ++k) {
            CHECK(m(j, k) == m(k, j));
            for (int l = 0; l < 12; ++l) CHECK(m(j, k) <= m(j, l) + m(l, k) + 1e-15);
        }
    }
}

TEST_CASE("double_center hand example and zero matrix") {
    SymmetricMatrix a(2, MatrixKind::RawDistance);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    const SymmetricMatrix c = double_center(a);
    CHECK(c(0, 0) == -0.5);
    CHECK(c(0, 1) == 0.5);
    CHECK(c(1, 0) == 0.5);
    CHECK(c(1, 1) == -0.5);

    const SymmetricMatrix z = double_center(pairwise_distances({4.0, 4.0, 4.0}));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(z(j, k) == 0.0);
}

TEST_CASE("double_center: row and column means vanish") {
    const Sample x = oracle::random_sample(10, 7, 0.0, 3.0);
    const SymmetricMatrix c = double_center(pairwise_distances(x));
    for (int j = 0; j < 10; ++j) {
        double rm = 0.0, cm = 0.0;
        for (int k = 0; k < 10; ++k) {
            rm += c(j, k);
            cm += c(k, j);
        }
        CHECK(std::abs(rm / 10.0) < 1e-12);
        CHECK(std::abs(cm / 10.0) < 1e-12);
    }
    CHECK_THROWS_AS(double_center(c), contract_error);
}

TEST_CASE("u_center: zero input, row sums, oracle, minimum n") {
    const SymmetricMatrix z = u_center(pairwise_distances({1.0, 1.0, 1.0, 1.0, 1.0}));
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k) CHECK(z(j, k) == 0.0);

    const Sample x5 = oracle::random_sample(5, 11);
    const SymmetricMatrix u5 = u_center(pairwise_distances(x5));
    for (int j = 0; j < 5; ++j) {
        double rs = 0.0, cs = 0.0;
        for (int k = 0; k < 5; ++k) {
            rs += u5(j, k);
            cs += u5(k, j);
        }
        CHECK(std::abs(rs) < 1e-10);
        CHECK(std::abs(cs) < 1e-10);
        CHECK(u5(j, j) == 0.0);
    }

    const Sample x6 = oracle::random_sample(6, 13, -1.0, 4.0);
    const SymmetricMatrix u6 = u_center(pairwise_distances(x6));
    const auto ref = oracle::u_center(oracle::distances(x6));
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) CHECK(u6(j, k) == doctest::Approx(ref[j][k]).epsilon(1e-12));

    CHECK_THROWS_AS(u_center(pairwise_distances({1.0, 2.0, 3.0})), sample_too_small_error);
    CHECK_THROWS_AS(u_center(u6), contract_error);
}

TEST_CASE("dcov2: degenerate cases, self-consistency, brute-force oracle") {
    const Sample c = {2.0, 2.0, 2.0, 2.0};
    const Sample y = {1.0, 5.0, 2.0, 8.0};
    CHECK(dcov2(c, y) == 0.0);
    CHECK(dcov2(y, y) == dvar2(y));

    const Sample a = oracle::random_sample(15, 21, 0.0, 2.0);
    const Sample b = oracle::random_sample(15, 22, -3.0, 3.0);
    CHECK(dcov2(a, b) == doctest::Approx(oracle::dcov2(a, b)).epsilon(1e-12));

    CHECK_THROWS_AS(dcov2({1.0, 2.0}, {1.0, 2.0, 3.0}), invalid_input_error);
}

TEST_CASE("dcor2: identical, affine, degenerate, range") {
    const Sample x = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(dcor2(x, x) == doctest::Approx(1.0).epsilon(1e-10));

    Sample y(5);
    for (int i = 0; i < 5; ++i) y[static_cast<std::size_t>(i)] = -2.0 * x[static_cast<std::size_t>(i)] + 7.0;
    CHECK(dcor2(x, y) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dcor2(x, y) == doctest::Approx(oracle::dcor2(x, y)).epsilon(1e-12));

    const Sample c = {3.0, 3.0, 3.0, 3.0, 3.0};
    const Sample r = oracle::random_sample(5, 31);
    CHECK(dcor2(c, r) == 0.0);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const Sample u = oracle::random_sample(12, 100 + s);
        const Sample v = oracle::random_sample(12, 200 + s);
        const double d = dcor2(u, v);
        CHECK(d >= -1e-10);
        CHECK(d <= 1.0 + 1e-10);
    }
}

TEST_CASE("dcor2 and pdcor: relabelling invariance") {
    const Sample x = oracle::random_sample(14, 41);
    const Sample y = oracle::random_sample(14, 42);
    const Sample z = oracle::random_sample(14, 43);
    const std::vector<int> perm = random_permutation(14, CounterRng(99));

    Sample px(14), py(14), pz(14);
    for (int i = 0; i < 14; ++i) {
        px[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        py[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        pz[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    CHECK(dcor2(px, py) == doctest::Approx(dcor2(x, y)).epsilon(1e-12));
    const Sample zs[1] = {z};
    const Sample pzs[1] = {pz};
    CHECK(pdcor(px, py, std::span<const Sample>(pzs, 1)) ==
          doctest::Approx(pdcor(x, y, std::span<const Sample>(zs, 1))).epsilon(1e-12));
}

TEST_CASE("dcor2: affine invariance in either argument") {
    const Sample x = oracle::random_sample(16, 51);
    const Sample y = oracle::random_sample(16, 52);
    Sample xs(16);
    for (int i = 0; i < 16; ++i) xs[static_cast<std::size_t>(i)] = -3.5 * x[static_cast<std::size_t>(i)] + 11.0;
    CHECK(dcor2(xs, y) == doctest::Approx(dcor2(x, y)).epsilon(1e-10));
}

TEST_CASE("r_star: identical, constant, oracle, minimum n") {
    const Sample x = oracle::random_sample(10, 61);
    CHECK(r_star(x, x) == doctest::Approx(1.0).epsilon(1e-10));

    const Sample c = {1.0, 1.0, 1.0, 1.0, 1.0};
    const Sample y5 = oracle::random_sample(5, 64);
    CHECK(r_star(c, y5) == 0.0);

    const Sample a = oracle::random_sample(8, 62, -1.0, 1.0);
    const Sample b = oracle::random_sample(8, 63, 0.0, 10.0);
    CHECK(r_star(a, b) == doctest::Approx(oracle::r_star(a, b)).epsilon(1e-12));

    CHECK_THROWS_AS(r_star({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}), sample_too_small_error);
}

TEST_CASE("pdcor: conventions and oracle agreement") {
    const Sample x = oracle::random_sample(12, 71);
    const Sample y = oracle::random_sample(12, 72);
    const Sample z = oracle::random_sample(12, 73);

    // Empty conditioning set reduces to r_star exactly.
    CHECK(pdcor(x, y, {}) == r_star(x, y));

    // A constant z has a zero U-centered matrix, so nothing is partialled out.
    const Sample zc(12, 4.0);
    const Sample zcs[1] = {zc};
    CHECK(pdcor(x, y, std::span<const Sample>(zcs, 1)) == r_star(x, y));

    // y == x with non-degenerate z.
    const Sample zs[1] = {z};
    CHECK(pdcor(x, x, std::span<const Sample>(zs, 1)) == doctest::Approx(1.0).epsilon(1e-10));

    // Composed brute-force oracle.
    CHECK(pdcor(x, y, std::span<const Sample>(zs, 1)) ==
          doctest::Approx(oracle::pdcor(x, y, std::span<const Sample>(zs, 1))).epsilon(1e-12));

    // Two conditioning variables, recursive route.
    const Sample z2 = oracle::random_sample(12, 74);
    const Sample zs2[2] = {z, z2};
    CHECK(pdcor(x, y, std::span<const Sample>(zs2, 2)) ==
          doctest::Approx(oracle::pdcor(x, y, std::span<const Sample>(zs2, 2))).epsilon(1e-12));

    // Degenerate denominator: z == x forces R*(x,z) = 1, convention is 0.
    int degenerate = 0;
    const Sample zx[1] = {x};
    CHECK(pdcor(x, y, std::span<const Sample>(zx, 1), &degenerate) == 0.0);
    CHECK(degenerate > 0);

    CHECK_THROWS_AS(pdcor(x, Sample{1.0, 2.0}, {}), invalid_input_error);
}

TEST_CASE("u-centered inner product is unbiased for independent variables") {
    // The sum-based centering makes (1/(n(n-3))) <Ux,Uy> an unbiased estimate
    // of the squared distance covariance, which is 0 for independent inputs.
    // The mean-based misreading of the formula, like the plain d-centered
    // estimate, would show a clear positive bias at n = 6.
    const int reps = 20000;
    const int n = 6;
    double mean_unbiased = 0.0, mean_biased = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const std::uint64_t s = derive_seed(909, static_cast<std::uint64_t>(rep));
        const Sample x = oracle::normal_sample(static_cast<std::size_t>(n), derive_seed(s, 1));
        const Sample y = oracle::normal_sample(static_cast<std::size_t>(n), derive_seed(s, 2));
        const SymmetricMatrix ux = u_center(pairwise_distances(x));
        const SymmetricMatrix uy = u_center(pairwise_distances(y));
        double inner = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) inner += ux(j, k) * uy(j, k);
        mean_unbiased += inner / (n * (n - 3.0));
        mean_biased += dcov2(x, y);
    }
    mean_unbiased /= reps;
    mean_biased /= reps;
    CHECK(std::abs(mean_unbiased) < 0.01);  // ~3 standard errors around 0
    CHECK(mean_biased > 0.05);              // the V-statistic bias is obvious at n = 6
}

TEST_CASE("pdcor_permutation_test: dominant statistic gives the minimum p-value") {
    const Sample x = oracle::normal_sample(50, 81);
    const Sample z = oracle::normal_sample(50, 82);
    const Sample zs[1] = {z};
    const TestResult r = pdcor_permutation_test(x, x, std::span<const Sample>(zs, 1), 199, 7);
    CHECK(r.p_value == 1.0 / 200.0);
    CHECK(r.statistic == pdcor(x, x, std::span<const Sample>(zs, 1)));
    CHECK(r.n_permutations == 199);
}

TEST_CASE("pdcor_permutation_test: determinism and seed independence of the statistic") {
    const Sample x = oracle::normal_sample(30, 91);
    const Sample y = oracle::normal_sample(30, 92);
    const Sample z = oracle::normal_sample(30, 93);
    const Sample zs[1] = {z};

    const TestResult a = pdcor_permutation_test(x, y, std::span<const Sample>(zs, 1), 99, 1234);
    const TestResult b = pdcor_permutation_test(x, y, std::span<const Sample>(zs, 1), 99, 1234);
    const TestResult c = pdcor_permutation_test(x, y, std::span<const Sample>(zs, 1), 99, 4321);
    CHECK(a.p_value == b.p_value);
    CHECK(a.statistic == b.statistic);
    CHECK(a.statistic == c.statistic);  // seed changes the p-value only
}

TEST_CASE("permuted evaluation equals naive recomputation on permuted samples") {
    // The test's fast path reindexes the cached U-centered matrix; recomputing
    // from the physically permuted sample must agree.
    const Sample x = oracle::random_sample(12, 301);
    const Sample y = oracle::random_sample(12, 302);
    const Sample z = oracle::random_sample(12, 303);
    const Sample zs[1] = {z};

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::vector<int> perm = random_permutation(12, CounterRng(derive_seed(seed, 1)));
        Sample px(12);
        for (int i = 0; i < 12; ++i)
            px[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];

        // One-permutation test: its p-value reveals whether the permuted
        // statistic beat the observed one; replicate the comparison naively.
        const TestResult t = pdcor_permutation_test(x, y, std::span<const Sample>(zs, 1), 1, seed);
        const double naive = pdcor(px, y, std::span<const Sample>(zs, 1));
        const double observed = pdcor(x, y, std::span<const Sample>(zs, 1));
        const double expected_p = (1.0 + (naive >= observed ? 1.0 : 0.0)) / 2.0;
        if (std::abs(naive - observed) > 1e-9) {
            CHECK(t.p_value == expected_p);
        }
    }
}
