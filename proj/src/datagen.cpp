#include "nledge/datagen.hpp"

#include <cmath>

#include "nledge/rng.hpp"

namespace nledge {

const char* form_name(FunctionalForm f) {
    switch (f) {
        case FunctionalForm::Quadratic: return "quadratic";
        case FunctionalForm::Interaction: return "interaction";
        case FunctionalForm::Logarithmic: return "logarithmic";
    }
    return "?";
}

FunctionalForm form_from_name(const std::string& name) {
    if (name == "quadratic") return FunctionalForm::Quadratic;
    if (name == "interaction") return FunctionalForm::Interaction;
    if (name == "logarithmic") return FunctionalForm::Logarithmic;
    throw invalid_input_error("unknown functional form '" + name + "'");
}

void DgpSpec::validate() const {
    if (network_size != 3 && network_size != 4)
        throw invalid_input_error("network_size must be 3 or 4");
    if (n < 1) throw invalid_input_error("sample size must be >= 1");
    if (!(sigma_a > 0.0 && sigma_b > 0.0 && sigma_c > 0.0 && sigma_d > 0.0))
        throw invalid_input_error("sigmas must be positive");
}

namespace {

double nonlinear_term(FunctionalForm f, double a, double b) {
    switch (f) {
        case FunctionalForm::Quadratic: return a * a;
        case FunctionalForm::Interaction: return a * b;
        case FunctionalForm::Logarithmic: return std::log(std::abs(a));
    }
    return 0.0;
}

}  // namespace

Dataset generate(const DgpSpec& spec) {
    spec.validate();
    const std::size_t n = static_cast<std::size_t>(spec.n);
    const CounterRng rng(spec.seed);

    // Counter blocks, one per noise variable. The gamma block is reserved even
    // for 3-node runs so the nu draws line up across network sizes.
    const std::uint64_t block = n;
    const std::uint64_t a_base = 0, eps_base = block, gamma_base = 2 * block, nu_base = 3 * block;
    std::uint64_t guard_ctr = 4 * block;

    const bool four = spec.network_size == 4;
    const bool needs_nonzero_a =
        spec.ac_form == FunctionalForm::Logarithmic ||
        (four && spec.ad_form == FunctionalForm::Logarithmic);

    Dataset data;
    data.names = four ? std::vector<std::string>{"A", "B", "C", "D"}
                      : std::vector<std::string>{"A", "B", "C"};
    data.columns.assign(data.names.size(), Sample(n));

    Sample& a = data.columns[0];
    Sample& b = data.columns[1];
    Sample& c = data.columns[2];

    for (std::size_t i = 0; i < n; ++i) {
        double ai = spec.mu_a + spec.sigma_a * rng.normal(a_base + i);
        if (needs_nonzero_a) {
            // log|A| needs A != 0; a redraw has probability zero but keeps the
            // output finite if it ever happens.
            while (ai == 0.0) ai = spec.mu_a + spec.sigma_a * rng.normal(guard_ctr++);
        }
        a[i] = ai;
        b[i] = spec.beta_ab * ai + spec.mu_b + spec.sigma_b * rng.normal(eps_base + i);
    }

    if (four) {
        Sample& d = data.columns[3];
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = spec.beta_ad * spec.beta_non2 * nonlinear_term(spec.ad_form, a[i], b[i]) +
                   spec.mu_d + spec.sigma_d * rng.normal(gamma_base + i);
        }
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = spec.beta_non * nonlinear_term(spec.ac_form, a[i], b[i]) + spec.beta_lin * a[i] +
                   spec.beta_con * b[i] + spec.beta_con2 * d[i] + spec.mu_c +
                   spec.sigma_c * rng.normal(nu_base + i);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = spec.beta_non * nonlinear_term(spec.ac_form, a[i], b[i]) + spec.beta_lin * a[i] +
                   spec.beta_con * b[i] + spec.mu_c + spec.sigma_c * rng.normal(nu_base + i);
        }
    }
    return data;
}

std::vector<DgpSpec> condition_grid(int network_size) {
    if (network_size != 3 && network_size != 4)
        throw invalid_input_error("network_size must be 3 or 4");

    const FunctionalForm forms[3] = {FunctionalForm::Quadratic, FunctionalForm::Interaction,
                                     FunctionalForm::Logarithmic};
    const int sizes[2] = {200, 500};
    std::vector<DgpSpec> grid;

    if (network_size == 3) {
        const double mus[3] = {0.0, 5.0, 10.0};
        for (FunctionalForm form : forms)
            for (int n : sizes)
                for (double mu : mus)
                    for (double beta_lin : {0.0, 1.0})
                        for (double beta_con : {0.0, 1.0})
                            for (double beta_ab : {0.0, 1.0})
                                for (double beta_non : {-1.0, 1.0}) {
                                    DgpSpec s;
                                    s.network_size = 3;
                                    s.ac_form = form;
                                    s.n = n;
                                    s.mu_a = s.mu_b = s.mu_c = mu;
                                    s.beta_lin = beta_lin;
                                    s.beta_con = beta_con;
                                    s.beta_ab = beta_ab;
                                    s.beta_non = beta_non;
                                    grid.push_back(s);
                                }
    } else {
        for (FunctionalForm ac : forms)
            for (FunctionalForm ad : forms)
                for (int n : sizes)
                    for (double beta_lin : {0.0, 1.0})
                        for (double beta_con : {0.0, 1.0})
                            for (double beta_ab : {0.0, 1.0})
                                for (double beta_ad : {0.0, 1.0}) {
                                    DgpSpec s;
                                    s.network_size = 4;
                                    s.ac_form = ac;
                                    s.ad_form = ad;
                                    s.n = n;
                                    s.beta_non = 1.0;
                                    s.beta_non2 = 1.0;
                                    s.beta_con2 = 1.0;
                                    s.beta_lin = beta_lin;
                                    s.beta_con = beta_con;
                                    s.beta_ab = beta_ab;
                                    s.beta_ad = beta_ad;
                                    grid.push_back(s);
                                }
    }
    return grid;
}

}  // namespace nledge
