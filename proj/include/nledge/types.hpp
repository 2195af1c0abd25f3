#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nledge/errors.hpp"

namespace nledge {

// One observed variable: n real-valued observations.
using Sample = std::vector<double>;

// Throws invalid_input_error if x is empty or contains NaN/infinity.
inline void require_finite(const Sample& x, const char* name = "sample") {
    if (x.empty()) throw invalid_input_error(std::string(name) + " is empty");
    for (double v : x) {
        if (!std::isfinite(v)) throw invalid_input_error(std::string(name) + " contains a non-finite value");
    }
}

inline void require_same_length(const Sample& x, const Sample& y) {
    if (x.size() != y.size()) throw invalid_input_error("sample length mismatch");
}

enum class MatrixKind { RawDistance, DCentered, UCentered };

// Dense symmetric n-by-n matrix of distances or centered distances.
class SymmetricMatrix {
public:
    SymmetricMatrix(int dim, MatrixKind kind)
        : dim_(dim), kind_(kind), a_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw invalid_input_error("matrix dimension must be >= 1");
    }

    int dim() const { return dim_; }
    MatrixKind kind() const { return kind_; }

    double operator()(int j, int k) const { return a_[static_cast<std::size_t>(j) * dim_ + k]; }
    double& operator()(int j, int k) { return a_[static_cast<std::size_t>(j) * dim_ + k]; }

    const double* row(int j) const { return a_.data() + static_cast<std::size_t>(j) * dim_; }
    const std::vector<double>& data() const { return a_; }

private:
    int dim_;
    MatrixKind kind_;
    std::vector<double> a_;
};

enum class Method { Pdcor, PearsonPartial, SpearmanPartial, Cmi };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Pdcor: return "pdcor";
        case Method::PearsonPartial: return "pearson";
        case Method::SpearmanPartial: return "spearman";
        case Method::Cmi: return "cmi";
    }
    return "?";
}

// Outcome of one edge-level significance test.
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Method method = Method::Pdcor;
    int n_permutations = 0;  // 0 for analytic tests
    std::uint64_t seed = 0;
    bool exact_fit = false;       // |r| reached 1 in an analytic test
    int degenerate_count = 0;     // degenerate denominators hit during computation
};

// Column-labelled numeric data matrix; the universal input.
struct Dataset {
    std::vector<std::string> names;
    std::vector<Sample> columns;

    std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t n_cols() const { return columns.size(); }

    const Sample& column(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return columns[i];
        }
        throw invalid_input_error("no column named '" + name + "'");
    }

    void validate() const {
        if (names.size() != columns.size()) throw invalid_input_error("dataset: name/column count mismatch");
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].size() != n_rows()) throw invalid_input_error("dataset: ragged columns");
            require_finite(columns[i], names[i].c_str());
        }
    }
};

}  // namespace nledge
