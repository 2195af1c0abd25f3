// Command-line front end: simulate (factorial study), analyze (edge decisions
// for a dataset), report (aggregates from a results file).

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nledge/config.hpp"
#include "nledge/csv.hpp"
#include "nledge/datagen.hpp"
#include "nledge/harness.hpp"
#include "nledge/parallel.hpp"
#include "nledge/pipeline.hpp"
#include "nledge/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 2;
constexpr int kExitIoError = 3;

struct CommonFlags {
    std::optional<double> alpha;
    std::optional<int> permutations;
    std::optional<int> replications;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> preprocess;
    std::optional<std::string> methods;
    std::optional<int> threads;
    std::optional<std::string> output_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--alpha", flags.alpha, "Significance level (default 0.05)")
        ->envname("NLEDGE_ALPHA");
    cmd->add_option("--permutations", flags.permutations,
                    "Permutation count for the resampling tests (default 1000)")
        ->envname("NLEDGE_PERMUTATIONS");
    cmd->add_option("--seed", flags.seed, "Master RNG seed")->envname("NLEDGE_SEED");
    cmd->add_option("--methods", flags.methods, "Comma-separated method list")
        ->envname("NLEDGE_METHODS");
    cmd->add_option("--threads", flags.threads, "Worker threads; 0 = all cores")
        ->envname("NLEDGE_THREADS");
    cmd->add_option("--output-dir", flags.output_dir, "Directory for output files")
        ->envname("NLEDGE_OUTPUT_DIR");
}

std::string join_path(const std::string& dir, const char* file) {
    return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw nledge::io_error("cannot create output directory '" + dir + "'");
}

int run_simulate(const std::string& config_path, const CommonFlags& flags) {
    nledge::HarnessConfig cfg = nledge::parse_config(config_path);
    if (flags.alpha) cfg.alpha = *flags.alpha;
    if (flags.permutations) cfg.n_permutations = *flags.permutations;
    if (flags.replications) cfg.n_replications = *flags.replications;
    if (flags.seed) cfg.master_seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.output_dir) cfg.output_dir = *flags.output_dir;
    if (flags.preprocess) {
        cfg.modes.clear();
        std::istringstream in(*flags.preprocess);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) cfg.modes.push_back(nledge::preprocess_from_name(item));
    }
    if (flags.methods) {
        cfg.methods.clear();
        std::istringstream in(*flags.methods);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) cfg.methods.push_back(nledge::method_from_string(item));
    }
    cfg.validate();

    const std::vector<nledge::DgpSpec> cells = cfg.cells();
    const int threads = cfg.threads == 0 ? nledge::hardware_threads() : cfg.threads;

    ensure_dir(cfg.output_dir);
    std::vector<nledge::CellResult> all;
    all.reserve(cells.size() * cfg.modes.size() * cfg.methods.size() * cfg.n_replications);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const std::uint64_t cell_seed =
            nledge::derive_seed(cfg.master_seed, static_cast<std::uint64_t>(ci));
        for (nledge::PreprocessMode mode : cfg.modes) {
            std::cerr << "cell " << (ci + 1) << "/" << cells.size() << " ("
                      << nledge::form_name(cells[ci].ac_form) << ", n=" << cells[ci].n
                      << ") mode=" << nledge::preprocess_name(mode) << "\n";
            std::vector<nledge::CellResult> part =
                nledge::run_cell(cells[ci], mode, cfg.methods, cfg.n_replications, cfg.alpha,
                                 cfg.n_permutations, cell_seed, threads);
            all.insert(all.end(), part.begin(), part.end());
        }
    }

    const std::vector<nledge::SummaryRow> summary = nledge::summarize(all, cfg.alpha);
    nledge::write_results_csv(join_path(cfg.output_dir, "results.csv"), all);
    nledge::write_summary_csv(join_path(cfg.output_dir, "summary.csv"), summary);
    return kExitOk;
}

int run_analyze(const std::string& data_path, const CommonFlags& flags) {
    const double alpha = flags.alpha.value_or(0.05);
    const int n_perm = flags.permutations.value_or(1000);
    const std::uint64_t seed = flags.seed.value_or(1);
    const int threads =
        flags.threads.value_or(0) == 0 ? nledge::hardware_threads() : *flags.threads;
    const std::string out_dir = flags.output_dir.value_or(".");

    nledge::NonlinearMethod method = nledge::NonlinearMethod::Pdcor;
    if (flags.methods) {
        if (*flags.methods == "pdcor") {
            method = nledge::NonlinearMethod::Pdcor;
        } else if (*flags.methods == "cmi") {
            method = nledge::NonlinearMethod::Cmi;
        } else {
            throw nledge::invalid_input_error(
                "analyze --methods expects 'pdcor' or 'cmi' (the nonlinear stage; the linear "
                "stage is always the partial Pearson t test)");
        }
    }

    const nledge::Dataset data = nledge::read_dataset_csv(data_path);
    if (data.n_cols() < 3)
        throw nledge::invalid_input_error("analyze needs at least 3 numeric columns");
    if (data.n_rows() < 4) throw nledge::invalid_input_error("analyze needs at least 4 data rows");

    const std::vector<nledge::EdgeDecision> edges =
        nledge::detect_edges(data, alpha, n_perm, seed, method, threads);

    ensure_dir(out_dir);
    nledge::write_edges_csv(join_path(out_dir, "edges.csv"), edges);
    std::cout << nledge::render_edge_table(edges);
    return kExitOk;
}

int run_report(const std::string& results_path, const CommonFlags& flags) {
    const double alpha = flags.alpha.value_or(0.05);
    const std::string out_dir = flags.output_dir.value_or(".");

    const std::vector<nledge::CellResult> results = nledge::read_results_csv(results_path);
    const std::vector<nledge::SummaryRow> summary = nledge::summarize(results, alpha);

    ensure_dir(out_dir);
    nledge::write_summary_csv(join_path(out_dir, "aggregates.csv"), summary);

    // Long-format panel for the headline 3-node figure: n = 200, beta_non = 1,
    // all means zero, AC sensitivity by form / mode / method across the
    // beta_lin x beta_con x beta_ab toggles.
    std::vector<nledge::SummaryRow> panel;
    for (const nledge::SummaryRow& row : summary) {
        const nledge::DgpSpec& s = row.spec;
        if (s.network_size == 3 && s.n == 200 && s.beta_non == 1.0 && s.mu_a == 0.0 &&
            s.mu_b == 0.0 && s.mu_c == 0.0 && row.edge == nledge::EdgeTag::AC &&
            row.metric == nledge::MetricKind::Sensitivity) {
            panel.push_back(row);
        }
    }
    nledge::write_summary_csv(join_path(out_dir, "panel_3node_n200_mu0.csv"), panel);

    // Best and worst sensitivity cell per method.
    std::map<std::string, std::pair<const nledge::SummaryRow*, const nledge::SummaryRow*>> extremes;
    for (const nledge::SummaryRow& row : summary) {
        if (row.metric != nledge::MetricKind::Sensitivity || row.n_replications == 0) continue;
        auto& [best, worst] = extremes[nledge::method_name(row.method)];
        if (best == nullptr || row.value > best->value) best = &row;
        if (worst == nullptr || row.value < worst->value) worst = &row;
    }
    auto describe = [](const nledge::SummaryRow& r) {
        std::ostringstream out;
        out << nledge::form_name(r.spec.ac_form) << " " << nledge::edge_name(r.edge)
            << " n=" << r.spec.n << " mode=" << nledge::preprocess_name(r.mode)
            << " beta(non,lin,con,ab)=(" << r.spec.beta_non << "," << r.spec.beta_lin << ","
            << r.spec.beta_con << "," << r.spec.beta_ab << ") value=" << r.value;
        return out.str();
    };
    for (const auto& [name, pair] : extremes) {
        std::cout << name << " best:  " << describe(*pair.first) << "\n";
        std::cout << name << " worst: " << describe(*pair.second) << "\n";
    }
    if (extremes.empty()) std::cout << "no sensitivity rows in " << results_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional-dependence screening for nonlinear edges in small networks"};
    app.require_subcommand(1);

    CommonFlags flags;

    std::string config_path;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run the factorial simulation study described by a config file");
    simulate->add_option("--config", config_path, "Harness config file")
        ->required()
        ->envname("NLEDGE_CONFIG");
    simulate
        ->add_option("--replications", flags.replications, "Replications per cell (default 100)")
        ->envname("NLEDGE_REPLICATIONS");
    simulate
        ->add_option("--preprocess", flags.preprocess,
                     "Comma list of uncentered,centered,residualized")
        ->envname("NLEDGE_PREPROCESS");
    add_common_flags(simulate, flags);

    std::string data_path;
    CLI::App* analyze =
        app.add_subcommand("analyze", "Two-stage edge decisions (linear, then nonlinear) for a CSV");
    analyze->add_option("data", data_path, "Numeric CSV with a header row")->required();
    add_common_flags(analyze, flags);

    std::string results_path;
    CLI::App* report = app.add_subcommand("report", "Aggregate a results.csv into plotting tables");
    report->add_option("results", results_path, "results.csv from a simulate run")->required();
    add_common_flags(report, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUserError;
    }

    try {
        if (simulate->parsed()) return run_simulate(config_path, flags);
        if (analyze->parsed()) return run_analyze(data_path, flags);
        if (report->parsed()) return run_report(results_path, flags);
        std::cerr << "no subcommand given\n";
        return kExitUserError;
    } catch (const nledge::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const nledge::invalid_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const nledge::contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}
