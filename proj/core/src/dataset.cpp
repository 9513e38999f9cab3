#include "vaxmed/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "vaxmed/errors.hpp"

namespace vaxmed {

namespace {
constexpr const char* kGroupColumn = "group";
}

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<int>> columns,
                 std::optional<std::vector<int>> groups)
    : names_(std::move(names)), columns_(std::move(columns)), groups_(std::move(groups)) {
    if (names_.size() != columns_.size()) throw InputError("dataset: column names and columns differ in count");
    if (names_.empty() && !groups_) throw InputError("dataset: no columns");
    rows_ = columns_.empty() ? groups_->size() : columns_.front().size();
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == kGroupColumn) throw InputError("dataset: 'group' is a reserved column name");
        if (columns_[i].size() != rows_) throw InputError("dataset: column '" + names_[i] + "' has wrong length");
        for (std::size_t j = 0; j < i; ++j)
            if (names_[i] == names_[j]) throw InputError("dataset: duplicate column '" + names_[i] + "'");
    }
    if (groups_ && groups_->size() != rows_) throw InputError("dataset: group column has wrong length");
    if (rows_ == 0) throw InputError("dataset: no rows");
    observable_.assign(names_.size(), true);
}

std::size_t Dataset::index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InputError("dataset: unknown column '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool Dataset::has_column(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<int>& Dataset::column(const std::string& name) const { return columns_[index(name)]; }

bool Dataset::observable(const std::string& name) const { return observable_[index(name)]; }

void Dataset::add_column(std::string name, std::vector<int> values, bool observable) {
    if (has_column(name) || name == kGroupColumn) throw InputError("dataset: column '" + name + "' already exists");
    if (values.size() != rows_) throw InputError("dataset: column '" + name + "' has wrong length");
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
    observable_.push_back(observable);
}

void Dataset::replace_column(const std::string& name, std::vector<int> values) {
    if (values.size() != rows_) throw InputError("dataset: column '" + name + "' has wrong length");
    columns_[index(name)] = std::move(values);
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out = *this;
    for (auto& col : out.columns_) {
        std::vector<int> picked;
        picked.reserve(rows.size());
        for (auto r : rows) picked.push_back(col.at(r));
        col = std::move(picked);
    }
    if (out.groups_) {
        std::vector<int> picked;
        for (auto r : rows) picked.push_back(groups_->at(r));
        out.groups_ = std::move(picked);
    }
    out.rows_ = rows.size();
    return out;
}

void write_csv(std::ostream& os, const Dataset& data, bool include_counterfactual) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < data.names().size(); ++i) {
        if (include_counterfactual || data.observable(data.names()[i])) cols.push_back(i);
    }
    bool first = true;
    for (auto c : cols) {
        os << (first ? "" : ",") << data.names()[c];
        first = false;
    }
    if (data.groups()) os << (first ? "" : ",") << kGroupColumn;
    os << '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        first = true;
        for (auto c : cols) {
            os << (first ? "" : ",") << data.column(data.names()[c])[r];
            first = false;
        }
        if (data.groups()) os << (first ? "" : ",") << (*data.groups())[r];
        os << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Dataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("csv: missing header row");
    const auto header = split(line);
    std::vector<std::string> names;
    std::optional<std::size_t> group_at;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == kGroupColumn) {
            group_at = i;
        } else {
            names.push_back(header[i]);
        }
    }
    std::vector<std::vector<int>> columns(names.size());
    std::vector<int> groups;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InputError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(cells.size()));
        std::size_t col = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            int value = 0;
            const auto& s = cells[i];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw InputError("csv line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
            if (group_at && i == *group_at) {
                groups.push_back(value);
            } else {
                columns[col++].push_back(value);
            }
        }
    }
    std::optional<std::vector<int>> g;
    if (group_at) g = std::move(groups);
    return Dataset(std::move(names), std::move(columns), std::move(g));
}

}  // namespace vaxmed
