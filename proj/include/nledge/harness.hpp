#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nledge/datagen.hpp"
#include "nledge/pipeline.hpp"
#include "nledge/types.hpp"

namespace nledge {

// Runs the factorial simulation: generate, preprocess, test each monitored
// edge with each method, and aggregate sensitivity/specificity across
// replications.

enum class EdgeTag { AC, BC, AD };

const char* edge_name(EdgeTag e);

// One (replication, method, edge) outcome. status is empty for a valid result
// and carries a reason code (e.g. "degenerate-input") when the test could not
// be computed; such rows keep NaN statistics and are excluded from summary
// denominators.
struct CellResult {
    DgpSpec spec;
    PreprocessMode mode = PreprocessMode::Uncentered;
    Method method = Method::Pdcor;
    EdgeTag edge = EdgeTag::AC;
    int replication = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    int n_permutations = 0;
    std::uint64_t seed = 0;
    std::string status;
};

enum class MetricKind { Sensitivity, Specificity };

const char* metric_name(MetricKind m);

// Specificity strata: TrueNull marks edges with no dependence at all beyond
// the conditioning set; LinearOnly marks BC edges whose only dependence is the
// linear beta_con path, where the nonlinear test should still say no.
enum class MetricStratum { Primary, LinearOnly };

const char* stratum_name(MetricStratum s);

struct EdgeMetric {
    MetricKind kind;
    MetricStratum stratum;
};

// Decides which metric a monitored edge contributes to under the given DGP,
// or nullopt when neither label is honest (AD with beta_ad = 0, where
// conditioning on the collider C induces dependence; BC under an interaction
// AC form, where B enters C's equation through A*B).
std::optional<EdgeMetric> classify_edge_metric(const DgpSpec& spec, EdgeTag edge);

// Aggregated rate for one (cell, mode, method, edge) group.
struct SummaryRow {
    DgpSpec spec;
    PreprocessMode mode = PreprocessMode::Uncentered;
    Method method = Method::Pdcor;
    EdgeTag edge = EdgeTag::AC;
    MetricKind metric = MetricKind::Sensitivity;
    MetricStratum stratum = MetricStratum::Primary;
    double value = 0.0;
    int n_replications = 0;  // valid replications (missing excluded)
    int n_missing = 0;
};

// Runs n_replications of one condition cell under one preprocessing mode.
// Replication r generates data from derive_seed(master_seed, r); each
// (method, edge) test gets its own substream. Results arrive sorted by
// (replication, method index, edge index) regardless of thread count.
std::vector<CellResult> run_cell(const DgpSpec& spec, PreprocessMode mode,
                                 std::span<const Method> methods, int n_replications, double alpha,
                                 int n_perm, std::uint64_t master_seed, int threads = 1);

// Groups results by (cell, mode, method, edge) and computes the classified
// metric per group; groups without a metric are skipped. Throws contract_error
// on duplicate (group, replication) rows.
std::vector<SummaryRow> summarize(std::span<const CellResult> results, double alpha);

}  // namespace nledge
