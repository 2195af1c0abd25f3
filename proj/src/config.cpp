#include "nledge/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace nledge {

Method method_from_string(const std::string& name) {
    if (name == "pdcor") return Method::Pdcor;
    if (name == "pearson") return Method::PearsonPartial;
    if (name == "spearman") return Method::SpearmanPartial;
    if (name == "cmi") return Method::Cmi;
    throw invalid_input_error("unknown method '" + name + "' (expected pdcor, pearson, spearman or cmi)");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw invalid_input_error("config key '" + key + "': '" + s + "' is not a number");
    return v;
}

long long to_int(const std::string& s, const std::string& key) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw invalid_input_error("config key '" + key + "': '" + s + "' is not an integer");
    return v;
}

std::vector<double> to_doubles(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const std::string& item : split_list(s)) out.push_back(to_double(item, key));
    if (out.empty()) throw invalid_input_error("config key '" + key + "': empty list");
    return out;
}

}  // namespace

void HarnessConfig::validate() const {
    if (network_size != 3 && network_size != 4)
        throw invalid_input_error("network_size must be 3 or 4");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input_error("alpha must be in (0,1)");
    if (n_permutations < 1) throw invalid_input_error("n_permutations must be >= 1");
    if (n_replications < 1) throw invalid_input_error("n_replications must be >= 1");
    if (threads < 0) throw invalid_input_error("threads must be >= 0");
    if (!(sigma > 0.0)) throw invalid_input_error("sigma must be positive");
    if (methods.empty()) throw invalid_input_error("methods list is empty");
    if (modes.empty()) throw invalid_input_error("preprocess list is empty");
    for (int n : sample_sizes) {
        if (n < 4) throw invalid_input_error("sample sizes must be >= 4");
    }
}

std::vector<DgpSpec> HarnessConfig::cells() const {
    validate();
    const bool four = network_size == 4;

    // Per-variable mu combinations: either the shared levels fanned out, or
    // the factorial product of the per-variable lists.
    struct MuCell {
        double a, b, c, d;
    };
    std::vector<MuCell> mu_cells;
    const bool per_var = !mu_a.empty() || !mu_b.empty() || !mu_c.empty() || !mu_d.empty();
    if (per_var) {
        auto levels = [](const std::vector<double>& v) {
            return v.empty() ? std::vector<double>{0.0} : v;
        };
        for (double a : levels(mu_a))
            for (double b : levels(mu_b))
                for (double c : levels(mu_c))
                    for (double d : levels(four ? mu_d : std::vector<double>{}))
                        mu_cells.push_back({a, b, c, d});
    } else {
        for (double m : mus) mu_cells.push_back({m, m, m, four ? m : 0.0});
    }

    const std::vector<FunctionalForm> ad_list =
        four ? ad_forms : std::vector<FunctionalForm>{FunctionalForm::Quadratic};
    const std::vector<double> ad_levels = four ? beta_ad : std::vector<double>{0.0};

    std::vector<DgpSpec> out;
    for (FunctionalForm ac : ac_forms)
        for (FunctionalForm ad : ad_list)
            for (int n : sample_sizes)
                for (const MuCell& mu : mu_cells)
                    for (double b_non : beta_non)
                        for (double b_lin : beta_lin)
                            for (double b_con : beta_con)
                                for (double b_ab : beta_ab)
                                    for (double b_ad : ad_levels) {
                                        DgpSpec s;
                                        s.network_size = network_size;
                                        s.ac_form = ac;
                                        s.ad_form = ad;
                                        s.n = n;
                                        s.mu_a = mu.a;
                                        s.mu_b = mu.b;
                                        s.mu_c = mu.c;
                                        s.mu_d = mu.d;
                                        s.sigma_a = s.sigma_b = s.sigma_c = s.sigma_d = sigma;
                                        s.beta_non = b_non;
                                        s.beta_lin = b_lin;
                                        s.beta_con = b_con;
                                        s.beta_ab = b_ab;
                                        s.beta_ad = b_ad;
                                        s.beta_non2 = four ? beta_non2 : 1.0;
                                        s.beta_con2 = four ? beta_con2 : 1.0;
                                        out.push_back(s);
                                    }
    return out;
}

HarnessConfig parse_config_text(const std::string& text) {
    HarnessConfig cfg;
    std::set<std::string> seen;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_input_error("config line " + std::to_string(line_no) +
                                      ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw invalid_input_error("config line " + std::to_string(line_no) +
                                      ": empty key or value");
        if (!seen.insert(key).second)
            throw invalid_input_error("config key '" + key + "' given twice");

        if (key == "network_size") {
            cfg.network_size = static_cast<int>(to_int(value, key));
        } else if (key == "ac_forms" || key == "forms") {
            cfg.ac_forms.clear();
            for (const std::string& f : split_list(value)) cfg.ac_forms.push_back(form_from_name(f));
        } else if (key == "ad_forms") {
            cfg.ad_forms.clear();
            for (const std::string& f : split_list(value)) cfg.ad_forms.push_back(form_from_name(f));
        } else if (key == "sample_sizes") {
            cfg.sample_sizes.clear();
            for (const std::string& s : split_list(value))
                cfg.sample_sizes.push_back(static_cast<int>(to_int(s, key)));
        } else if (key == "mus") {
            cfg.mus = to_doubles(value, key);
        } else if (key == "mu_a") {
            cfg.mu_a = to_doubles(value, key);
        } else if (key == "mu_b") {
            cfg.mu_b = to_doubles(value, key);
        } else if (key == "mu_c") {
            cfg.mu_c = to_doubles(value, key);
        } else if (key == "mu_d") {
            cfg.mu_d = to_doubles(value, key);
        } else if (key == "sigma") {
            cfg.sigma = to_double(value, key);
        } else if (key == "beta_non") {
            cfg.beta_non = to_doubles(value, key);
        } else if (key == "beta_lin") {
            cfg.beta_lin = to_doubles(value, key);
        } else if (key == "beta_con") {
            cfg.beta_con = to_doubles(value, key);
        } else if (key == "beta_ab") {
            cfg.beta_ab = to_doubles(value, key);
        } else if (key == "beta_ad") {
            cfg.beta_ad = to_doubles(value, key);
        } else if (key == "beta_non2") {
            cfg.beta_non2 = to_double(value, key);
        } else if (key == "beta_con2") {
            cfg.beta_con2 = to_double(value, key);
        } else if (key == "preprocess") {
            cfg.modes.clear();
            for (const std::string& m : split_list(value))
                cfg.modes.push_back(preprocess_from_name(m));
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const std::string& m : split_list(value)) cfg.methods.push_back(method_from_string(m));
        } else if (key == "n_replications") {
            cfg.n_replications = static_cast<int>(to_int(value, key));
        } else if (key == "n_permutations") {
            cfg.n_permutations = static_cast<int>(to_int(value, key));
        } else if (key == "alpha") {
            cfg.alpha = to_double(value, key);
        } else if (key == "master_seed") {
            cfg.master_seed = static_cast<std::uint64_t>(to_int(value, key));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(to_int(value, key));
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else {
            throw invalid_input_error("unknown config key '" + key + "'");
        }
    }

    // Full study-grid defaults for anything not specified.
    const bool four = cfg.network_size == 4;
    if (cfg.ac_forms.empty())
        cfg.ac_forms = {FunctionalForm::Quadratic, FunctionalForm::Interaction,
                        FunctionalForm::Logarithmic};
    if (cfg.ad_forms.empty())
        cfg.ad_forms = {FunctionalForm::Quadratic, FunctionalForm::Interaction,
                        FunctionalForm::Logarithmic};
    if (cfg.sample_sizes.empty()) cfg.sample_sizes = {200, 500};
    if (cfg.mus.empty() && cfg.mu_a.empty() && cfg.mu_b.empty() && cfg.mu_c.empty() &&
        cfg.mu_d.empty())
        cfg.mus = four ? std::vector<double>{0.0} : std::vector<double>{0.0, 5.0, 10.0};
    if (cfg.beta_non.empty()) cfg.beta_non = four ? std::vector<double>{1.0} : std::vector<double>{-1.0, 1.0};
    if (cfg.beta_lin.empty()) cfg.beta_lin = {0.0, 1.0};
    if (cfg.beta_con.empty()) cfg.beta_con = {0.0, 1.0};
    if (cfg.beta_ab.empty()) cfg.beta_ab = {0.0, 1.0};
    if (cfg.beta_ad.empty()) cfg.beta_ad = {0.0, 1.0};
    if (cfg.modes.empty())
        cfg.modes = {PreprocessMode::Uncentered, PreprocessMode::Centered,
                     PreprocessMode::Residualized};
    if (cfg.methods.empty())
        cfg.methods = {Method::Pdcor, Method::PearsonPartial, Method::SpearmanPartial, Method::Cmi};

    cfg.validate();
    return cfg;
}

HarnessConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace nledge
