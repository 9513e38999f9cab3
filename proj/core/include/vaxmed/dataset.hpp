#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vaxmed {

// Column-per-node table of unit values. Columns sampled as counterfactuals
// are kept alongside the observed ones but marked non-observable so that
// estimators refuse them.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> names, std::vector<std::vector<int>> columns,
            std::optional<std::vector<int>> groups = std::nullopt);

    std::size_t rows() const { return rows_; }
    const std::vector<std::string>& names() const { return names_; }
    bool has_column(const std::string& name) const;
    // Throws InputError for unknown columns.
    const std::vector<int>& column(const std::string& name) const;
    bool observable(const std::string& name) const;
    const std::optional<std::vector<int>>& groups() const { return groups_; }

    void add_column(std::string name, std::vector<int> values, bool observable = true);
    void replace_column(const std::string& name, std::vector<int> values);

    // Keeps only the listed row indices, in order.
    Dataset subset(const std::vector<std::size_t>& rows) const;

    bool operator==(const Dataset&) const = default;

private:
    std::size_t index(const std::string& name) const;

    std::vector<std::string> names_;
    std::vector<std::vector<int>> columns_;
    std::vector<bool> observable_;
    std::optional<std::vector<int>> groups_;
    std::size_t rows_ = 0;
};

// Header row of node names plus an optional reserved `group` column.
// Non-observable columns are written only when asked for.
void write_csv(std::ostream& os, const Dataset& data, bool include_counterfactual = false);
Dataset read_csv(std::istream& is);

}  // namespace vaxmed
