#pragma once

#include <span>
#include <string>
#include <vector>

#include "nledge/harness.hpp"
#include "nledge/pipeline.hpp"
#include "nledge/types.hpp"

namespace nledge {

// CSV I/O with bit-stable formatting: UTF-8, comma-delimited, one header row,
// '.' decimal separator, doubles printed with 17 significant digits so the
// files round-trip 64-bit floats exactly.

std::string format_double(double v);

// Numeric dataset with a header row of column names.
Dataset read_dataset_csv(const std::string& path);

void write_results_csv(const std::string& path, std::span<const CellResult> results);
std::vector<CellResult> read_results_csv(const std::string& path);

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows);

void write_edges_csv(const std::string& path, std::span<const EdgeDecision> edges);

// Aligned two-column decision table for terminal output.
std::string render_edge_table(std::span<const EdgeDecision> edges);

}  // namespace nledge
