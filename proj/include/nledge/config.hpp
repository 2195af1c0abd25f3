#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nledge/datagen.hpp"
#include "nledge/pipeline.hpp"
#include "nledge/types.hpp"

namespace nledge {

// Flat key = value configuration for the simulation harness. Lists are
// comma-separated; '#' starts a comment. Any key left out falls back to the
// default grid levels for the configured network size.
//
//   network_size   = 3
//   ac_forms       = quadratic,interaction,logarithmic
//   ad_forms       = quadratic,interaction,logarithmic   # 4-node only
//   sample_sizes   = 200,500
//   mus            = 0,5,10      # one shared level for mu_a/mu_b/mu_c[/mu_d]
//   mu_a,mu_b,...  = per-variable lists; overrides the shared mus
//   sigma          = 1
//   beta_non       = -1,1
//   beta_lin       = 0,1
//   beta_con       = 0,1
//   beta_ab        = 0,1
//   beta_ad        = 0,1         # 4-node only
//   beta_non2      = 1           # 4-node only
//   beta_con2      = 1           # 4-node only
//   preprocess     = uncentered,centered,residualized
//   methods        = pdcor,pearson,spearman,cmi
//   n_replications = 100
//   n_permutations = 1000
//   alpha          = 0.05
//   master_seed    = 1
//   threads        = 0           # 0 = all cores
//   output_dir     = .
struct HarnessConfig {
    int network_size = 3;
    std::vector<FunctionalForm> ac_forms;
    std::vector<FunctionalForm> ad_forms;
    std::vector<int> sample_sizes;
    std::vector<double> mus;      // shared levels; empty when per-variable lists given
    std::vector<double> mu_a, mu_b, mu_c, mu_d;  // per-variable overrides
    double sigma = 1.0;
    std::vector<double> beta_non, beta_lin, beta_con, beta_ab, beta_ad;
    double beta_non2 = 1.0;
    double beta_con2 = 1.0;
    std::vector<PreprocessMode> modes;
    std::vector<Method> methods;
    int n_replications = 100;
    int n_permutations = 1000;
    double alpha = 0.05;
    std::uint64_t master_seed = 1;
    int threads = 0;
    std::string output_dir = ".";

    void validate() const;

    // The condition cells this config describes, in enumeration order
    // (ac_form, ad_form, n, mu combination, beta_non, beta_lin, beta_con,
    // beta_ab, beta_ad). Cell i keys its replications off
    // derive_seed(master_seed, i).
    std::vector<DgpSpec> cells() const;
};

HarnessConfig parse_config(const std::string& path);
HarnessConfig parse_config_text(const std::string& text);

Method method_from_string(const std::string& name);

}  // namespace nledge
