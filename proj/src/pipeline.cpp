#include "nledge/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "nledge/classical.hpp"
#include "nledge/distance.hpp"
#include "nledge/info_theory.hpp"
#include "nledge/parallel.hpp"
#include "nledge/rng.hpp"
#include "ols.hpp"

namespace nledge {

const char* preprocess_name(PreprocessMode m) {
    switch (m) {
        case PreprocessMode::Uncentered: return "uncentered";
        case PreprocessMode::Centered: return "centered";
        case PreprocessMode::Residualized: return "residualized";
    }
    return "?";
}

PreprocessMode preprocess_from_name(const std::string& name) {
    if (name == "uncentered") return PreprocessMode::Uncentered;
    if (name == "centered") return PreprocessMode::Centered;
    if (name == "residualized") return PreprocessMode::Residualized;
    throw invalid_input_error("unknown preprocess mode '" + name + "'");
}

Dataset center(const Dataset& data) {
    data.validate();
    Dataset out = data;
    for (Sample& col : out.columns) {
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(col.size());
        for (double& v : col) v -= mean;
    }
    return out;
}

Sample residualize(const Sample& target, std::span<const Sample> predictors) {
    require_finite(target, "target");
    for (const Sample& p : predictors) require_finite(p, "predictor");
    return detail::ols_residuals(target, predictors);
}

Dataset preprocess_network(const Dataset& data, PreprocessMode mode) {
    data.validate();
    if (mode == PreprocessMode::Uncentered) return data;
    if (mode == PreprocessMode::Centered) return center(data);

    const bool three = data.names == std::vector<std::string>{"A", "B", "C"};
    const bool four = data.names == std::vector<std::string>{"A", "B", "C", "D"};
    if (!three && !four)
        throw contract_error(
            "residualized preprocessing applies to simulation networks (columns A,B,C[,D]); "
            "use detect_edges for arbitrary data");

    Dataset out = data;
    const Sample& a = data.columns[0];
    const Sample& b = data.columns[1];
    if (four) {
        const Sample ab[2] = {a, b};
        out.columns[3] = residualize(data.columns[3], std::span<const Sample>(ab, 2));
        const Sample abd[3] = {a, b, data.columns[3]};
        out.columns[2] = residualize(data.columns[2], std::span<const Sample>(abd, 3));
    } else {
        const Sample ab[2] = {a, b};
        out.columns[2] = residualize(data.columns[2], std::span<const Sample>(ab, 2));
    }
    return out;
}

std::vector<EdgeDecision> detect_edges(const Dataset& data, double alpha, int n_perm,
                                       std::uint64_t seed, NonlinearMethod method, int threads) {
    data.validate();
    const std::size_t p = data.n_cols();
    const std::size_t n = data.n_rows();
    if (p < 3) throw invalid_input_error("detect_edges requires at least 3 columns");
    if (n < 4) throw sample_too_small_error("detect_edges requires n >= 4");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (data.names[i] == data.names[j])
                throw invalid_input_error("duplicate column name '" + data.names[i] + "'");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input_error("alpha must be in (0,1)");
    if (n_perm < 1) throw invalid_input_error("n_perm must be >= 1");

    // Lexicographic column order fixes both the row order and the per-edge
    // seed derivation.
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return data.names[x] < data.names[y]; });

    struct EdgeSpec {
        std::size_t i, j;  // column indices into data
    };
    std::vector<EdgeSpec> edges;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) edges.push_back({order[a], order[b]});

    // U-centered matrices of raw columns are shared across edges as the
    // conditioning set of the nonlinear stage.
    std::vector<SymmetricMatrix> shared_u;
    if (method == NonlinearMethod::Pdcor) {
        shared_u.reserve(p);
        for (const Sample& col : data.columns) shared_u.push_back(u_center(pairwise_distances(col)));
    }

    std::vector<EdgeDecision> decisions(edges.size());
    parallel_for(static_cast<int>(edges.size()), threads, [&](int e) {
        const EdgeSpec& edge = edges[static_cast<std::size_t>(e)];
        const Sample& xi = data.columns[edge.i];
        const Sample& xj = data.columns[edge.j];

        std::vector<Sample> others;
        others.reserve(p - 2);
        for (std::size_t c = 0; c < p; ++c) {
            if (c != edge.i && c != edge.j) others.push_back(data.columns[c]);
        }

        EdgeDecision d;
        d.var1 = data.names[edge.i];
        d.var2 = data.names[edge.j];
        d.alpha = alpha;

        // A stage that hits a degenerate design (a constant residual or a
        // collinear conditioning set, e.g. one column duplicating another)
        // yields a NaN p-value and a false flag instead of aborting the whole
        // table.
        const double nan = std::numeric_limits<double>::quiet_NaN();
        try {
            d.linear_result = partial_correlation_test(xi, xj, others, CorrKind::Pearson);
            d.linear_significant = d.linear_result.p_value < alpha;
        } catch (const degenerate_input_error&) {
            d.linear_result.method = Method::PearsonPartial;
            d.linear_result.statistic = nan;
            d.linear_result.p_value = nan;
            d.linear_significant = false;
        }

        // The nonlinear stage removes the pair's own linear component: var2 is
        // residualized on var1 as well as the rest, so a purely linear pair
        // leaves nothing for the permutation test to find. Residualizing on
        // the rest alone would hand the test the pair's partial correlation
        // unchanged.
        const std::uint64_t edge_seed = derive_seed(seed, static_cast<std::uint64_t>(e));
        try {
            const Sample ri = residualize(xi, others);
            std::vector<Sample> with_partner;
            with_partner.reserve(others.size() + 1);
            with_partner.push_back(xi);
            for (const Sample& o : others) with_partner.push_back(o);
            const Sample rj = residualize(xj, with_partner);
            if (method == NonlinearMethod::Pdcor) {
                std::vector<const SymmetricMatrix*> uz;
                uz.reserve(p - 2);
                for (std::size_t c = 0; c < p; ++c) {
                    if (c != edge.i && c != edge.j) uz.push_back(&shared_u[c]);
                }
                const SymmetricMatrix uri = u_center(pairwise_distances(ri));
                const SymmetricMatrix urj = u_center(pairwise_distances(rj));
                d.nonlinear_result = pdcor_permutation_test(
                    uri, urj, std::span<const SymmetricMatrix* const>(uz), n_perm, edge_seed);
            } else {
                d.nonlinear_result = cmi_permutation_test(ri, rj, others, default_bins(n),
                                                          BinScheme::EqualFrequency, n_perm,
                                                          edge_seed);
            }
            d.nonlinear_significant = d.nonlinear_result.p_value < alpha;
        } catch (const degenerate_input_error&) {
            d.nonlinear_result.method =
                method == NonlinearMethod::Pdcor ? Method::Pdcor : Method::Cmi;
            d.nonlinear_result.statistic = nan;
            d.nonlinear_result.p_value = nan;
            d.nonlinear_significant = false;
        }
        decisions[static_cast<std::size_t>(e)] = d;
    });
    return decisions;
}

}  // namespace nledge
