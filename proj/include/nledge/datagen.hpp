#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nledge/types.hpp"

namespace nledge {

// Seeded generation of the 3- and 4-node synthetic networks and the factorial
// condition grid used by the simulation harness.

enum class FunctionalForm { Quadratic, Interaction, Logarithmic };

const char* form_name(FunctionalForm f);
FunctionalForm form_from_name(const std::string& name);

// One cell of the simulation grid.
//
// Node equations (natural log; all noise normal with the stated mean/sd):
//   A = mu_a + sigma_a * standard normal
//   B = beta_ab * A + eps,                      eps ~ N(mu_b, sigma_b)
//   D = beta_ad * beta_non2 * g(A, B) + gamma,  gamma ~ N(mu_d, sigma_d)   (4-node)
//   C = beta_non * f(A, B) + beta_lin * A + beta_con * B
//       [+ beta_con2 * D] + nu,                 nu ~ N(mu_c, sigma_c)
// with f, g in {A^2, A*B, log|A|} per ac_form / ad_form. beta_ad toggles the
// AD relation on and off while beta_non2 scales it.
struct DgpSpec {
    int network_size = 3;  // 3 or 4
    FunctionalForm ac_form = FunctionalForm::Quadratic;
    FunctionalForm ad_form = FunctionalForm::Quadratic;  // 4-node only

    double beta_non = 1.0;
    double beta_lin = 0.0;
    double beta_con = 0.0;
    double beta_ab = 0.0;
    double beta_ad = 0.0;    // 4-node only
    double beta_non2 = 1.0;  // 4-node only
    double beta_con2 = 1.0;  // 4-node only

    double mu_a = 0.0, mu_b = 0.0, mu_c = 0.0, mu_d = 0.0;
    double sigma_a = 1.0, sigma_b = 1.0, sigma_c = 1.0, sigma_d = 1.0;

    int n = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

// Draws a dataset with columns A, B, C (and D for 4-node networks). Normal
// variates come from a counter-based stream with fixed per-variable counter
// blocks (A, then eps, then gamma, then nu), so the A and B columns of 3- and
// 4-node runs with shared parameters and seed are bit-identical.
Dataset generate(const DgpSpec& spec);

// The full factorial condition grid for the given network size, in a fixed
// enumeration order. 3-node: forms x n {200,500} x shared mu {0,5,10} x
// beta_lin {0,1} x beta_con {0,1} x beta_ab {0,1} x beta_non {-1,1}.
// 4-node: ac_form x ad_form x n {200,500} x beta_lin/con/ab/ad {0,1} with
// mu = 0 and beta_non = beta_non2 = beta_con2 = 1. Both enumerate 288 cells.
std::vector<DgpSpec> condition_grid(int network_size);

}  // namespace nledge
