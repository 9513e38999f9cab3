#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vaxmed/dataset.hpp"
#include "vaxmed/scenario.hpp"

namespace vaxmed {

// How a row's numbers are displayed in the table format.
enum class RowScale { Probability, Percent, Count, None };

struct ReportRow {
    std::string analysis;
    std::optional<double> analytic;
    std::optional<double> estimate;
    std::optional<double> se;
    std::string flags;
    RowScale scale = RowScale::Probability;
    bool error = false;

    bool operator==(const ReportRow&) const = default;
};

struct Report {
    std::string scenario;
    std::string version;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
    std::vector<ReportRow> rows;
    std::optional<Dataset> data;

    bool has_errors() const;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sample_size;
    bool keep_data = false;
};

// Runs every requested analysis. Each analysis contributes one row named
// exactly as requested (an error row if it failed), optionally followed by
// detail rows named "<analysis>.<part>". Deterministic for a fixed seed.
Report run(const Scenario& scenario, const RunOptions& options = {});

void write_table(std::ostream& os, const Report& report);
void write_csv(std::ostream& os, const Report& report);

}  // namespace vaxmed
