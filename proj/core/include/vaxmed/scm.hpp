#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vaxmed/dataset.hpp"
#include "vaxmed/graph.hpp"

namespace vaxmed {

// One structural equation: a finite exogenous noise variable and a response
// table over (parent configuration, noise value).
//
// Parent configurations are numbered in mixed radix over `parents` in the
// listed order, last parent fastest, each parent ranging over its support in
// declared order. table[config * noise.size() + u] is the node value.
struct NodeSpec {
    std::string name;
    std::vector<std::string> parents;
    std::vector<int> support{0, 1};
    std::vector<double> noise{1.0};
    std::vector<int> table;
};

enum class Coupling { Monotone, Independent };

// Binary node with Pr(node = 1 | config c) = p_one[c].
//
// Monotone: a single uniform latent U, node = 1 iff U < p_one[c]; thresholds
// are rounded to multiples of 1/resolution (resolution 0 keeps them exact)
// and the noise support is the set of cells between distinct thresholds.
// Independent: one independent Bernoulli per configuration.
NodeSpec bernoulli_node(std::string name, std::vector<std::string> parents, std::vector<double> p_one,
                        Coupling coupling = Coupling::Monotone, int resolution = 1000);

// Noise-free node whose value is a function of its parents.
NodeSpec deterministic_node(std::string name, std::vector<std::string> parents, std::vector<int> support,
                            std::vector<int> value_by_config);

using Values = std::vector<int>;              // indexed like StructuralModel::nodes
using Intervention = std::map<std::string, int>;

struct NoiseConfig {
    std::vector<std::size_t> index;  // noise value per node
    double probability = 1.0;
};

class StructuralModel {
public:
    StructuralModel() = default;
    // Validates totality of tables, supports, noise stochasticity and
    // acyclicity. Throws InputError naming the offending node.
    explicit StructuralModel(std::vector<NodeSpec> nodes);

    const CausalDag& dag() const { return dag_; }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t index_of(const std::string& name) const { return dag_.index_of(name); }
    const NodeSpec& node(const std::string& name) const { return nodes_[index_of(name)]; }

    std::size_t config_count(std::size_t node) const { return config_count_[node]; }
    // Parent configuration of `node` given the values of all nodes.
    std::size_t config_of(std::size_t node, const Values& values) const;
    int respond(std::size_t node, const Values& values, std::size_t noise) const;
    bool in_support(std::size_t node, int value) const;

    // Product of noise support sizes, as a double to avoid overflow.
    double noise_space_size() const;

    // Values of all nodes for one noise configuration; intervened nodes are
    // overridden (indexed by node, nullopt = structural).
    Values evaluate(const std::vector<std::size_t>& noise, const std::vector<std::optional<int>>& overrides) const;
    void evaluate_into(const std::vector<std::size_t>& noise, const std::vector<std::optional<int>>& overrides,
                       Values& out) const;

private:
    std::vector<NodeSpec> nodes_;
    CausalDag dag_;
    std::vector<std::vector<std::size_t>> parent_index_;
    std::vector<std::size_t> config_count_;
};

std::map<std::string, int> evaluate(const StructuralModel& model, const NoiseConfig& noise,
                                    const Intervention& interventions);

// Nested potential-outcome expression such as Y[A=1, B=B[A=0]]: the target's
// value under a world whose assignments are constants or the value of some
// node in a sub-world evaluated under the same noise.
struct QueryAssignment;

struct CounterfactualQuery {
    std::string target;
    std::vector<QueryAssignment> assignments;

    bool operator==(const CounterfactualQuery&) const;
};

struct QueryAssignment {
    std::string node;
    std::variant<int, CounterfactualQuery> value;

    bool operator==(const QueryAssignment&) const = default;
};

inline constexpr int kMaxQueryDepth = 2;

// Text form: Y[A=1,B=B[A=0]]; a bare name is the factual value.
CounterfactualQuery parse_query(const std::string& text);
std::string to_string(const CounterfactualQuery& query);
// Bracket levels: Y is 0, Y[A=1] is 1, Y[A=1,B=B[A=0]] is 2.
int query_depth(const CounterfactualQuery& query);
// Throws InputError when the query is malformed against the model.
void check_query(const StructuralModel& model, const CounterfactualQuery& query);

int counterfactual(const StructuralModel& model, const NoiseConfig& noise, const CounterfactualQuery& query);

inline constexpr double kDefaultEnumerationCap = 1e7;

// Visits every noise configuration with positive probability in a fixed
// lexicographic order. Throws CapacityError above `cap` configurations.
void for_each_noise(const StructuralModel& model, const std::function<void(const NoiseConfig&)>& visit,
                    double cap = kDefaultEnumerationCap);

// E[query] by exhaustive enumeration, compensated summation. The optional
// filter restricts the sum to part of the noise space (unnormalised).
double analytic_expectation(const StructuralModel& model, const CounterfactualQuery& query,
                            double cap = kDefaultEnumerationCap,
                            const std::function<bool(const NoiseConfig&)>& filter = {});

struct SampleOptions {
    // Extra non-observable columns holding each unit's counterfactual value.
    std::vector<std::pair<std::string, CounterfactualQuery>> counterfactuals;
};

Dataset sample_units(const StructuralModel& model, std::size_t n, std::uint64_t seed,
                     const SampleOptions& options = {});

struct MonteCarloEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t draws = 0;
};

MonteCarloEstimate monte_carlo_expectation(const StructuralModel& model, const CounterfactualQuery& query,
                                           std::size_t n, std::uint64_t seed);

// Copy of the model with an extra binary node `observed` that equals `node`
// flipped with probability flip_prob, independently of everything else.
StructuralModel with_misclassified_copy(const StructuralModel& model, const std::string& node,
                                        const std::string& observed, double flip_prob);

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace vaxmed
