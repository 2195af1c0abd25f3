#include "nledge/distance.hpp"

#include <cmath>

#include "nledge/rng.hpp"

namespace nledge {

namespace {

void require_raw(const SymmetricMatrix& a, const char* op) {
    if (a.kind() != MatrixKind::RawDistance)
        throw contract_error(std::string(op) + " expects a raw-distance matrix");
}

// Row sums of a symmetric matrix plus the grand total.
void row_sums(const SymmetricMatrix& a, std::vector<double>& rs, double& total) {
    const int n = a.dim();
    rs.assign(static_cast<std::size_t>(n), 0.0);
    total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double* row = a.row(j);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += row[k];
        rs[static_cast<std::size_t>(j)] = s;
        total += s;
    }
}

double frobenius_inner(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    const std::size_t m = a.data().size();
    const double* pa = a.data().data();
    const double* pb = b.data().data();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += pa[i] * pb[i];
    return s;
}

// Inner product of the row/column permuted image of a against b:
// sum_{j,k} a(perm[j], perm[k]) * b(j, k). Permuting a sample's observation
// indices permutes its distance matrix symmetrically, and U-centering commutes
// with symmetric permutation, so this evaluates <U(perm x), U(y)> without
// rebuilding any matrix.
double permuted_inner(const SymmetricMatrix& a, const SymmetricMatrix& b,
                      const std::vector<int>& perm) {
    const int n = a.dim();
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double* arow = a.row(perm[static_cast<std::size_t>(j)]);
        const double* brow = b.row(j);
        for (int k = 0; k < n; ++k) s += arow[perm[static_cast<std::size_t>(k)]] * brow[k];
    }
    return s;
}

// Partials the conditioning variables out of a small R* matrix, one at a time
// in index order starting at `first_z`, and returns the (0,1) entry. The
// degenerate-denominator convention (factor <= 1e-12 -> 0) matches pdcor's.
double partial_from_rstar_matrix(std::vector<std::vector<double>> r, int first_z,
                                 int* degenerate_count) {
    const int m = static_cast<int>(r.size());
    for (int c = first_z; c < m; ++c) {
        for (int i = 0; i < m; ++i) {
            if (i == c) continue;
            for (int j = i + 1; j < m; ++j) {
                if (j == c) continue;
                const double fi = 1.0 - r[i][c] * r[i][c];
                const double fj = 1.0 - r[j][c] * r[j][c];
                double v;
                if (fi <= 1e-12 || fj <= 1e-12) {
                    v = 0.0;
                    if (degenerate_count) ++*degenerate_count;
                } else {
                    v = (r[i][j] - r[i][c] * r[j][c]) / (std::sqrt(fi) * std::sqrt(fj));
                }
                r[i][j] = r[j][i] = v;
            }
        }
    }
    return r[0][1];
}

}  // namespace

SymmetricMatrix pairwise_distances(const Sample& x) {
    require_finite(x);
    const int n = static_cast<int>(x.size());
    SymmetricMatrix m(n, MatrixKind::RawDistance);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            const double d = std::abs(x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(k)]);
            m(j, k) = d;
            m(k, j) = d;
        }
    }
    return m;
}

SymmetricMatrix double_center(const SymmetricMatrix& a) {
    require_raw(a, "double_center");
    const int n = a.dim();
    std::vector<double> rs;
    double total = 0.0;
    row_sums(a, rs, total);
    const double inv_n = 1.0 / n;
    const double grand = total * inv_n * inv_n;

    SymmetricMatrix out(n, MatrixKind::DCentered);
    for (int j = 0; j < n; ++j) {
        const double rm_j = rs[static_cast<std::size_t>(j)] * inv_n;
        for (int k = 0; k < n; ++k) {
            out(j, k) = a(j, k) - rm_j - rs[static_cast<std::size_t>(k)] * inv_n + grand;
        }
    }
    return out;
}

SymmetricMatrix u_center(const SymmetricMatrix& a) {
    require_raw(a, "u_center");
    const int n = a.dim();
    if (n < 4) throw sample_too_small_error("u_center requires n >= 4");
    std::vector<double> rs;
    double total = 0.0;
    row_sums(a, rs, total);
    const double inv = 1.0 / (n - 2);
    const double grand = total / (static_cast<double>(n - 1) * (n - 2));

    SymmetricMatrix out(n, MatrixKind::UCentered);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            out(j, k) = (j == k) ? 0.0
                                 : a(j, k) - rs[static_cast<std::size_t>(j)] * inv -
                                       rs[static_cast<std::size_t>(k)] * inv + grand;
        }
    }
    return out;
}

double dcov2(const Sample& x, const Sample& y) {
    require_same_length(x, y);
    const SymmetricMatrix ax = double_center(pairwise_distances(x));
    const SymmetricMatrix ay = double_center(pairwise_distances(y));
    const int n = ax.dim();
    double v = frobenius_inner(ax, ay) / (static_cast<double>(n) * n);
    if (v < 0.0 && v >= -1e-12) v = 0.0;
    return v;
}

double dvar2(const Sample& x) { return dcov2(x, x); }

double dcor2(const Sample& x, const Sample& y) {
    require_same_length(x, y);
    const SymmetricMatrix ax = double_center(pairwise_distances(x));
    const SymmetricMatrix ay = double_center(pairwise_distances(y));
    const int n = ax.dim();
    const double n2 = static_cast<double>(n) * n;
    const double cov = frobenius_inner(ax, ay) / n2;
    const double vx = frobenius_inner(ax, ax) / n2;
    const double vy = frobenius_inner(ay, ay) / n2;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    double v = cov / std::sqrt(vx * vy);
    if (v < 0.0 && v >= -1e-12) v = 0.0;
    return v;
}

double r_star(const SymmetricMatrix& ux, const SymmetricMatrix& uy) {
    if (ux.kind() != MatrixKind::UCentered || uy.kind() != MatrixKind::UCentered)
        throw contract_error("r_star expects U-centered matrices");
    if (ux.dim() != uy.dim()) throw invalid_input_error("r_star: dimension mismatch");
    const double na = std::sqrt(frobenius_inner(ux, ux));
    const double nb = std::sqrt(frobenius_inner(uy, uy));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return frobenius_inner(ux, uy) / (na * nb);
}

double r_star(const Sample& x, const Sample& y) {
    require_same_length(x, y);
    return r_star(u_center(pairwise_distances(x)), u_center(pairwise_distances(y)));
}

double pdcor(const Sample& x, const Sample& y, std::span<const Sample> z, int* degenerate_count) {
    require_same_length(x, y);
    for (const Sample& zi : z) require_same_length(x, zi);

    const int m = 2 + static_cast<int>(z.size());
    std::vector<SymmetricMatrix> u;
    u.reserve(static_cast<std::size_t>(m));
    u.push_back(u_center(pairwise_distances(x)));
    u.push_back(u_center(pairwise_distances(y)));
    for (const Sample& zi : z) u.push_back(u_center(pairwise_distances(zi)));

    std::vector<std::vector<double>> r(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                r[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    r_star(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);

    return partial_from_rstar_matrix(std::move(r), 2, degenerate_count);
}

TestResult pdcor_permutation_test(const SymmetricMatrix& ux, const SymmetricMatrix& uy,
                                  std::span<const SymmetricMatrix* const> uz, int n_perm,
                                  std::uint64_t seed) {
    if (n_perm < 1) throw invalid_input_error("n_perm must be >= 1");
    const int n = ux.dim();
    const int m = 2 + static_cast<int>(uz.size());

    std::vector<const SymmetricMatrix*> mats;
    mats.reserve(static_cast<std::size_t>(m));
    mats.push_back(&ux);
    mats.push_back(&uy);
    for (const SymmetricMatrix* p : uz) mats.push_back(p);
    for (const SymmetricMatrix* p : mats) {
        if (p->dim() != n) throw invalid_input_error("pdcor_permutation_test: dimension mismatch");
        if (p->kind() != MatrixKind::UCentered)
            throw contract_error("pdcor_permutation_test expects U-centered matrices");
    }

    std::vector<double> norms(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        norms[static_cast<std::size_t>(i)] = std::sqrt(frobenius_inner(*mats[static_cast<std::size_t>(i)],
                                                                       *mats[static_cast<std::size_t>(i)]));

    // R* values among y and the conditioning set never change under
    // permutations of x, so fill them once.
    std::vector<std::vector<double>> base(static_cast<std::size_t>(m),
                                          std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int i = 1; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double v = 0.0;
            if (norms[static_cast<std::size_t>(i)] != 0.0 && norms[static_cast<std::size_t>(j)] != 0.0)
                v = frobenius_inner(*mats[static_cast<std::size_t>(i)], *mats[static_cast<std::size_t>(j)]) /
                    (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
            base[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                base[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }

    TestResult result;
    result.method = Method::Pdcor;
    result.n_permutations = n_perm;
    result.seed = seed;

    auto statistic_for = [&](const std::vector<int>* perm) {
        std::vector<std::vector<double>> r = base;
        for (int j = 1; j < m; ++j) {
            double v = 0.0;
            if (norms[0] != 0.0 && norms[static_cast<std::size_t>(j)] != 0.0) {
                const double inner = perm == nullptr
                                         ? frobenius_inner(*mats[0], *mats[static_cast<std::size_t>(j)])
                                         : permuted_inner(*mats[0], *mats[static_cast<std::size_t>(j)], *perm);
                v = inner / (norms[0] * norms[static_cast<std::size_t>(j)]);
            }
            r[0][static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j)][0] = v;
        }
        return partial_from_rstar_matrix(std::move(r), 2, &result.degenerate_count);
    };

    result.statistic = statistic_for(nullptr);

    int count = 0;
    for (int rperm = 0; rperm < n_perm; ++rperm) {
        const std::vector<int> perm = random_permutation(n, CounterRng(derive_seed(seed, rperm + 1)));
        if (statistic_for(&perm) >= result.statistic) ++count;
    }
    result.p_value = static_cast<double>(1 + count) / static_cast<double>(1 + n_perm);
    return result;
}

TestResult pdcor_permutation_test(const Sample& x, const Sample& y, std::span<const Sample> z,
                                  int n_perm, std::uint64_t seed) {
    require_same_length(x, y);
    for (const Sample& zi : z) require_same_length(x, zi);

    const SymmetricMatrix ux = u_center(pairwise_distances(x));
    const SymmetricMatrix uy = u_center(pairwise_distances(y));
    std::vector<SymmetricMatrix> uzs;
    uzs.reserve(z.size());
    for (const Sample& zi : z) uzs.push_back(u_center(pairwise_distances(zi)));
    std::vector<const SymmetricMatrix*> ptrs;
    ptrs.reserve(uzs.size());
    for (const SymmetricMatrix& mz : uzs) ptrs.push_back(&mz);

    return pdcor_permutation_test(ux, uy, std::span<const SymmetricMatrix* const>(ptrs), n_perm, seed);
}

}  // namespace nledge
