#include "nledge/harness.hpp"

#include <limits>
#include <map>
#include <sstream>

#include "nledge/classical.hpp"
#include "nledge/distance.hpp"
#include "nledge/info_theory.hpp"
#include "nledge/parallel.hpp"
#include "nledge/rng.hpp"

namespace nledge {

const char* edge_name(EdgeTag e) {
    switch (e) {
        case EdgeTag::AC: return "AC";
        case EdgeTag::BC: return "BC";
        case EdgeTag::AD: return "AD";
    }
    return "?";
}

const char* metric_name(MetricKind m) {
    return m == MetricKind::Sensitivity ? "sensitivity" : "specificity";
}

const char* stratum_name(MetricStratum s) {
    return s == MetricStratum::Primary ? "primary" : "linear-only";
}

std::optional<EdgeMetric> classify_edge_metric(const DgpSpec& spec, EdgeTag edge) {
    switch (edge) {
        case EdgeTag::AC:
            if (spec.beta_non != 0.0) return EdgeMetric{MetricKind::Sensitivity, MetricStratum::Primary};
            if (spec.beta_lin != 0.0) return EdgeMetric{MetricKind::Specificity, MetricStratum::LinearOnly};
            return EdgeMetric{MetricKind::Specificity, MetricStratum::Primary};
        case EdgeTag::BC:
            // Under an interaction AC form, B enters C's equation through the
            // A*B term even when beta_con = 0, so neither label applies.
            if (spec.beta_non != 0.0 && spec.ac_form == FunctionalForm::Interaction)
                return std::nullopt;
            if (spec.beta_con == 0.0) return EdgeMetric{MetricKind::Specificity, MetricStratum::Primary};
            return EdgeMetric{MetricKind::Specificity, MetricStratum::LinearOnly};
        case EdgeTag::AD:
            if (spec.network_size != 4) return std::nullopt;
            if (spec.beta_ad * spec.beta_non2 != 0.0)
                return EdgeMetric{MetricKind::Sensitivity, MetricStratum::Primary};
            // With the AD relation absent, conditioning on C (a child of both
            // A and D when beta_con2 != 0) opens a collider path, so the edge
            // is not a clean null either; leave it out of the summaries.
            if (spec.beta_con2 == 0.0)
                return EdgeMetric{MetricKind::Specificity, MetricStratum::Primary};
            return std::nullopt;
    }
    return std::nullopt;
}

namespace {

std::vector<EdgeTag> monitored_edges(const DgpSpec& spec) {
    if (spec.network_size == 4) return {EdgeTag::AC, EdgeTag::BC, EdgeTag::AD};
    return {EdgeTag::AC, EdgeTag::BC};
}

void edge_variables(const Dataset& data, EdgeTag edge, const Sample** x, const Sample** y,
                    std::vector<Sample>* z) {
    const bool four = data.n_cols() == 4;
    auto col = [&](const char* name) -> const Sample& { return data.column(name); };
    z->clear();
    switch (edge) {
        case EdgeTag::AC:
            *x = &col("A");
            *y = &col("C");
            z->push_back(col("B"));
            if (four) z->push_back(col("D"));
            break;
        case EdgeTag::BC:
            *x = &col("B");
            *y = &col("C");
            z->push_back(col("A"));
            if (four) z->push_back(col("D"));
            break;
        case EdgeTag::AD:
            *x = &col("A");
            *y = &col("D");
            z->push_back(col("B"));
            z->push_back(col("C"));
            break;
    }
}

std::string cell_key(const DgpSpec& s, PreprocessMode mode, Method method, EdgeTag edge) {
    std::ostringstream key;
    key.precision(17);
    key << s.network_size << '|' << form_name(s.ac_form) << '|'
        << (s.network_size == 4 ? form_name(s.ad_form) : "-") << '|' << s.n << '|' << s.mu_a << '|'
        << s.mu_b << '|' << s.mu_c << '|' << s.mu_d << '|' << s.sigma_a << '|' << s.sigma_b << '|'
        << s.sigma_c << '|' << s.sigma_d << '|' << s.beta_non << '|' << s.beta_lin << '|'
        << s.beta_con << '|' << s.beta_ab << '|' << s.beta_ad << '|' << s.beta_non2 << '|'
        << s.beta_con2 << '|' << preprocess_name(mode) << '|' << method_name(method) << '|'
        << edge_name(edge);
    return key.str();
}

}  // namespace

std::vector<CellResult> run_cell(const DgpSpec& spec, PreprocessMode mode,
                                 std::span<const Method> methods, int n_replications, double alpha,
                                 int n_perm, std::uint64_t master_seed, int threads) {
    spec.validate();
    if (n_replications < 1) throw invalid_input_error("n_replications must be >= 1");
    if (n_perm < 1) throw invalid_input_error("n_perm must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input_error("alpha must be in (0,1)");
    if (methods.empty()) throw invalid_input_error("run_cell: no methods given");

    const std::vector<EdgeTag> edges = monitored_edges(spec);
    const std::size_t per_rep = methods.size() * edges.size();
    std::vector<CellResult> results(static_cast<std::size_t>(n_replications) * per_rep);

    parallel_for(n_replications, threads, [&](int rep) {
        const std::uint64_t rep_seed = derive_seed(master_seed, static_cast<std::uint64_t>(rep));
        DgpSpec rep_spec = spec;
        rep_spec.seed = rep_seed;
        const Dataset data = preprocess_network(generate(rep_spec), mode);

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            for (std::size_t ei = 0; ei < edges.size(); ++ei) {
                CellResult& out =
                    results[static_cast<std::size_t>(rep) * per_rep + mi * edges.size() + ei];
                out.spec = rep_spec;
                out.mode = mode;
                out.method = methods[mi];
                out.edge = edges[ei];
                out.replication = rep;

                const Sample* x = nullptr;
                const Sample* y = nullptr;
                std::vector<Sample> z;
                edge_variables(data, edges[ei], &x, &y, &z);
                const std::uint64_t test_seed = derive_seed(derive_seed(rep_seed, mi), ei);

                try {
                    TestResult tr;
                    switch (methods[mi]) {
                        case Method::Pdcor:
                            tr = pdcor_permutation_test(*x, *y, z, n_perm, test_seed);
                            break;
                        case Method::PearsonPartial:
                            tr = partial_correlation_test(*x, *y, z, CorrKind::Pearson);
                            break;
                        case Method::SpearmanPartial:
                            tr = partial_correlation_test(*x, *y, z, CorrKind::Spearman);
                            break;
                        case Method::Cmi:
                            tr = cmi_permutation_test(*x, *y, z, default_bins(data.n_rows()),
                                                      BinScheme::EqualFrequency, n_perm, test_seed);
                            break;
                    }
                    out.statistic = tr.statistic;
                    out.p_value = tr.p_value;
                    out.n_permutations = tr.n_permutations;
                    out.seed = tr.seed;
                } catch (const degenerate_input_error&) {
                    out.status = "degenerate-input";
                    out.statistic = std::numeric_limits<double>::quiet_NaN();
                    out.p_value = std::numeric_limits<double>::quiet_NaN();
                    out.seed = test_seed;
                } catch (const sample_too_small_error&) {
                    out.status = "sample-too-small";
                    out.statistic = std::numeric_limits<double>::quiet_NaN();
                    out.p_value = std::numeric_limits<double>::quiet_NaN();
                    out.seed = test_seed;
                }
            }
        }
    });
    return results;
}

std::vector<SummaryRow> summarize(std::span<const CellResult> results, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input_error("alpha must be in (0,1)");

    struct Group {
        const CellResult* first = nullptr;
        int n_valid = 0;
        int n_reject = 0;
        int n_missing = 0;
        std::map<int, int> reps_seen;  // replication -> count, for duplicate detection
    };

    std::vector<std::string> order;
    std::map<std::string, Group> groups;
    for (const CellResult& r : results) {
        const std::string key = cell_key(r.spec, r.mode, r.method, r.edge);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        Group& g = it->second;
        if (g.first == nullptr) g.first = &r;
        if (++g.reps_seen[r.replication] > 1)
            throw contract_error("summarize: duplicate replication in one group");
        if (!r.status.empty()) {
            ++g.n_missing;
            continue;
        }
        ++g.n_valid;
        if (r.p_value < alpha) ++g.n_reject;
    }

    std::vector<SummaryRow> rows;
    for (const std::string& key : order) {
        const Group& g = groups.at(key);
        const CellResult& f = *g.first;
        const auto metric = classify_edge_metric(f.spec, f.edge);
        if (!metric.has_value()) continue;

        SummaryRow row;
        row.spec = f.spec;
        row.spec.seed = 0;  // per-replication seeds live in the results rows
        row.mode = f.mode;
        row.method = f.method;
        row.edge = f.edge;
        row.metric = metric->kind;
        row.stratum = metric->stratum;
        row.n_replications = g.n_valid;
        row.n_missing = g.n_missing;
        const int qualifying =
            metric->kind == MetricKind::Sensitivity ? g.n_reject : g.n_valid - g.n_reject;
        row.value = g.n_valid == 0 ? 0.0 : static_cast<double>(qualifying) / g.n_valid;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nledge
