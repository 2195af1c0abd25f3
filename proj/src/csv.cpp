#include "nledge/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nledge {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw invalid_input_error("non-numeric value '" + s + "' at data row " +
                                  std::to_string(row) + ", column " + std::to_string(col));
    }
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return in;
}

const char* kResultsHeader =
    "network_size,ac_form,ad_form,n,mu_a,mu_b,mu_c,mu_d,sigma_a,sigma_b,sigma_c,sigma_d,"
    "beta_non,beta_lin,beta_con,beta_ab,beta_ad,beta_non2,beta_con2,"
    "mode,method,edge,replication,statistic,p_value,n_permutations,seed,status";

void write_spec_fields(std::ostream& out, const DgpSpec& s) {
    out << s.network_size << ',' << form_name(s.ac_form) << ','
        << (s.network_size == 4 ? form_name(s.ad_form) : "-") << ',' << s.n << ','
        << format_double(s.mu_a) << ',' << format_double(s.mu_b) << ',' << format_double(s.mu_c)
        << ',' << format_double(s.mu_d) << ',' << format_double(s.sigma_a) << ','
        << format_double(s.sigma_b) << ',' << format_double(s.sigma_c) << ','
        << format_double(s.sigma_d) << ',' << format_double(s.beta_non) << ','
        << format_double(s.beta_lin) << ',' << format_double(s.beta_con) << ','
        << format_double(s.beta_ab) << ',' << format_double(s.beta_ad) << ','
        << format_double(s.beta_non2) << ',' << format_double(s.beta_con2);
}

DgpSpec parse_spec_fields(const std::vector<std::string>& f, std::size_t row) {
    DgpSpec s;
    s.network_size = static_cast<int>(parse_double(f[0], row, 1));
    s.ac_form = form_from_name(f[1]);
    s.ad_form = f[2] == "-" ? FunctionalForm::Quadratic : form_from_name(f[2]);
    s.n = static_cast<int>(parse_double(f[3], row, 4));
    s.mu_a = parse_double(f[4], row, 5);
    s.mu_b = parse_double(f[5], row, 6);
    s.mu_c = parse_double(f[6], row, 7);
    s.mu_d = parse_double(f[7], row, 8);
    s.sigma_a = parse_double(f[8], row, 9);
    s.sigma_b = parse_double(f[9], row, 10);
    s.sigma_c = parse_double(f[10], row, 11);
    s.sigma_d = parse_double(f[11], row, 12);
    s.beta_non = parse_double(f[12], row, 13);
    s.beta_lin = parse_double(f[13], row, 14);
    s.beta_con = parse_double(f[14], row, 15);
    s.beta_ab = parse_double(f[15], row, 16);
    s.beta_ad = parse_double(f[16], row, 17);
    s.beta_non2 = parse_double(f[17], row, 18);
    s.beta_con2 = parse_double(f[18], row, 19);
    return s;
}

Method method_from_name(const std::string& name) {
    if (name == "pdcor") return Method::Pdcor;
    if (name == "pearson") return Method::PearsonPartial;
    if (name == "spearman") return Method::SpearmanPartial;
    if (name == "cmi") return Method::Cmi;
    throw invalid_input_error("unknown method '" + name + "'");
}

EdgeTag edge_from_name(const std::string& name) {
    if (name == "AC") return EdgeTag::AC;
    if (name == "BC") return EdgeTag::BC;
    if (name == "AD") return EdgeTag::AD;
    throw invalid_input_error("unknown edge '" + name + "'");
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw invalid_input_error("empty CSV file '" + path + "'");

    Dataset data;
    data.names = split_csv_line(line);
    if (data.names.size() < 1) throw invalid_input_error("CSV has no columns");
    data.columns.assign(data.names.size(), Sample{});

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != data.names.size()) {
            throw invalid_input_error("data row " + std::to_string(row) + " has " +
                                      std::to_string(fields.size()) + " fields, expected " +
                                      std::to_string(data.names.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            data.columns[c].push_back(parse_double(fields[c], row, c + 1));
        }
    }
    if (row == 0) throw invalid_input_error("CSV '" + path + "' has no data rows");
    return data;
}

void write_results_csv(const std::string& path, std::span<const CellResult> results) {
    std::ofstream out = open_out(path);
    out << kResultsHeader << '\n';
    for (const CellResult& r : results) {
        write_spec_fields(out, r.spec);
        out << ',' << preprocess_name(r.mode) << ',' << method_name(r.method) << ','
            << edge_name(r.edge) << ',' << r.replication << ',';
        if (r.status.empty()) {
            out << format_double(r.statistic) << ',' << format_double(r.p_value);
        } else {
            out << ',';
        }
        out << ',' << r.n_permutations << ',' << r.seed << ',' << csv_escape(r.status) << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

std::vector<CellResult> read_results_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw invalid_input_error("empty results file '" + path + "'");
    if (split_csv_line(line) != split_csv_line(kResultsHeader))
        throw invalid_input_error("results file '" + path + "' has an unexpected header");

    std::vector<CellResult> results;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 28)
            throw invalid_input_error("results row " + std::to_string(row) + " has " +
                                      std::to_string(f.size()) + " fields, expected 28");
        CellResult r;
        r.spec = parse_spec_fields(f, row);
        r.mode = preprocess_from_name(f[19]);
        r.method = method_from_name(f[20]);
        r.edge = edge_from_name(f[21]);
        r.replication = static_cast<int>(parse_double(f[22], row, 23));
        r.status = f[27];
        if (r.status.empty()) {
            r.statistic = parse_double(f[23], row, 24);
            r.p_value = parse_double(f[24], row, 25);
        } else {
            r.statistic = std::numeric_limits<double>::quiet_NaN();
            r.p_value = std::numeric_limits<double>::quiet_NaN();
        }
        r.n_permutations = static_cast<int>(parse_double(f[25], row, 26));
        r.seed = static_cast<std::uint64_t>(std::stoull(f[26]));
        results.push_back(std::move(r));
    }
    return results;
}

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows) {
    std::ofstream out = open_out(path);
    out << "network_size,ac_form,ad_form,n,mu_a,mu_b,mu_c,mu_d,sigma_a,sigma_b,sigma_c,sigma_d,"
           "beta_non,beta_lin,beta_con,beta_ab,beta_ad,beta_non2,beta_con2,"
           "mode,method,edge,metric,stratum,value,n_replications,n_missing\n";
    for (const SummaryRow& r : rows) {
        write_spec_fields(out, r.spec);
        out << ',' << preprocess_name(r.mode) << ',' << method_name(r.method) << ','
            << edge_name(r.edge) << ',' << metric_name(r.metric) << ',' << stratum_name(r.stratum)
            << ',' << format_double(r.value) << ',' << r.n_replications << ',' << r.n_missing
            << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_edges_csv(const std::string& path, std::span<const EdgeDecision> edges) {
    std::ofstream out = open_out(path);
    out << "var1,var2,linear_p,linear_significant,nonlinear_p,nonlinear_significant\n";
    for (const EdgeDecision& e : edges) {
        out << csv_escape(e.var1) << ',' << csv_escape(e.var2) << ','
            << format_double(e.linear_result.p_value) << ','
            << (e.linear_significant ? "true" : "false") << ','
            << format_double(e.nonlinear_result.p_value) << ','
            << (e.nonlinear_significant ? "true" : "false") << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

std::string render_edge_table(std::span<const EdgeDecision> edges) {
    std::size_t w1 = 10, w2 = 10;
    for (const EdgeDecision& e : edges) {
        w1 = std::max(w1, e.var1.size());
        w2 = std::max(w2, e.var2.size());
    }
    std::ostringstream out;
    auto pad = [](const std::string& s, std::size_t w) {
        std::string t = s;
        t.resize(w, ' ');
        return t;
    };
    out << pad("Variable 1", w1) << "  " << pad("Variable 2", w2) << "  Linear  Nonlinear\n";
    for (const EdgeDecision& e : edges) {
        out << pad(e.var1, w1) << "  " << pad(e.var2, w2) << "  "
            << pad(e.linear_significant ? "X" : "", 6) << "  "
            << (e.nonlinear_significant ? "X" : "") << '\n';
    }
    return out.str();
}

}  // namespace nledge
