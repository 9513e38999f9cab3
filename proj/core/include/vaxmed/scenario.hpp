#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vaxmed/errors.hpp"
#include "vaxmed/interference.hpp"
#include "vaxmed/scm.hpp"

namespace vaxmed {

inline constexpr int kScenarioSchemaVersion = 1;

// A node as written in a scenario file: either Bernoulli probabilities per
// parent configuration ("prob") or an explicit noise distribution and
// response table ("noise" + "table"). Configurations follow the mixed-radix
// order documented on NodeSpec.
struct NodeSource {
    std::string name;
    std::vector<std::string> parents;
    std::vector<int> support{0, 1};
    std::vector<double> prob;
    std::optional<Coupling> coupling;
    std::vector<double> noise;
    std::vector<std::vector<int>> table;  // [config][noise value]

    bool explicit_table() const { return prob.empty(); }
    bool operator==(const NodeSource&) const = default;
};

struct Roles {
    std::string exposure;
    std::string mediator;
    std::string outcome;
    std::string perception;
    std::string probe;
    std::string subgroup;
    std::string mask;
    std::string contacts;
    std::vector<std::string> adjust;
    std::vector<std::string> condition;
    std::vector<std::string> behaviour;

    bool operator==(const Roles&) const = default;
};

struct GroupsSpec {
    std::vector<std::size_t> sizes;
    SummaryKind summary = SummaryKind::Fraction;
    double alpha = 0.5;
    double y_coef = 0.0;
    double b_coef = 0.0;
    bool mediator_reads_group = false;

    bool operator==(const GroupsSpec&) const = default;
};

struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    std::string description;
    std::vector<NodeSource> nodes;
    Coupling coupling = Coupling::Monotone;
    int resolution = 1000;
    Roles roles;
    std::vector<std::string> analyses;
    std::size_t sample_size = 100000;
    std::uint64_t seed = 1;
    std::size_t bootstrap = 200;
    double z_threshold = 3.0;
    std::size_t min_subgroup = 200;
    std::optional<GroupsSpec> groups;

    StructuralModel model() const;
    GroupedModel grouped_model() const;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioIssue {
    std::string location;  // "line 3, column 7" or a JSON pointer such as /nodes/1/noise
    std::string message;
};

class ScenarioError : public InputError {
public:
    explicit ScenarioError(std::vector<ScenarioIssue> issues);
    const std::vector<ScenarioIssue>& issues() const { return issues_; }

private:
    std::vector<ScenarioIssue> issues_;
};

// Parses and validates scenario text (JSON). Throws ScenarioError listing
// every problem found.
Scenario parse_scenario(const std::string& text);
// Canonical JSON text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

// Parsed form of one analysis request such as "cde(1)" or "plugin_nde(H,W)".
struct AnalysisRequest {
    std::string kind;
    std::optional<std::vector<std::string>> args;  // nullopt when no parentheses
};

AnalysisRequest parse_analysis(const std::string& text);

std::vector<std::string> list_builtin();
// Source text of a built-in scenario, or nullopt.
std::optional<std::string> builtin_source(const std::string& name);

}  // namespace vaxmed
