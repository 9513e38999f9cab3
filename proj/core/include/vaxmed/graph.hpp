#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vaxmed {

using NodeSet = std::set<std::string>;

struct Edge {
    std::string from;
    std::string to;

    auto operator<=>(const Edge&) const = default;
};

using EdgeList = std::vector<Edge>;

// Named nodes with directed parent -> child edges. Construction rejects
// undeclared endpoints, self-loops and duplicate edges; cycles are allowed
// at construction so that validate() can report them, but every causal
// query requires an acyclic graph.
class CausalDag {
public:
    CausalDag() = default;
    CausalDag(std::vector<std::string> nodes, EdgeList edges);

    const std::vector<std::string>& nodes() const { return nodes_; }
    const EdgeList& edges() const { return edges_; }
    std::size_t size() const { return nodes_.size(); }

    bool has_node(const std::string& name) const;
    bool has_edge(const std::string& from, const std::string& to) const;
    // Throws InputError for undeclared names.
    std::size_t index_of(const std::string& name) const;

    const std::vector<std::size_t>& parents_of(std::size_t v) const { return parents_[v]; }
    const std::vector<std::size_t>& children_of(std::size_t v) const { return children_[v]; }
    std::vector<std::string> parents(const std::string& name) const;
    std::vector<std::string> children(const std::string& name) const;

    bool is_acyclic() const { return acyclic_; }
    // Throws InputError when the graph has a cycle.
    const std::vector<std::size_t>& topological_order() const;

    // Strict ancestors / descendants (the node itself is excluded).
    NodeSet ancestors(const std::string& name) const;
    NodeSet descendants(const std::string& name) const;

    // Same node list and the same edge set, irrespective of edge order.
    bool operator==(const CausalDag& other) const;

private:
    std::vector<std::string> nodes_;
    EdgeList edges_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> topo_;
    bool acyclic_ = true;
};

struct ValidationResult {
    bool valid = true;
    // Closed walk v0 -> v1 -> ... -> v0 when invalid.
    std::vector<std::string> cycle;
};

ValidationResult validate(const CausalDag& dag);

// Standard d-separation of x and y given z (reachability / Bayes-ball).
bool d_separated(const CausalDag& dag, const std::string& x, const std::string& y, const NodeSet& z);

// An x ... y path left open by z, found by depth-first search over simple
// paths of the skeleton. Empty when x and y are d-separated.
std::optional<std::vector<std::string>> find_open_path(const CausalDag& dag, const std::string& x,
                                                       const std::string& y, const NodeSet& z);

// Renders a path with arrow glyphs, e.g. "A -> Y <- B -> R".
std::string format_path(const CausalDag& dag, const std::vector<std::string>& path);

CausalDag remove_edges(const CausalDag& dag, const EdgeList& edges);
CausalDag remove_outgoing(const CausalDag& dag, const std::string& node);

// Nodes C that descend from a, are ancestors of b, and reach y by a directed
// path that avoids b.
NodeSet find_exposure_induced_confounders(const CausalDag& dag, const std::string& a, const std::string& b,
                                          const std::string& y);

enum class Verdict { HoldsGraphically, Violated, NotDecidableGraphically };

const char* to_string(Verdict v);

struct AssumptionVerdict {
    int number = 0;
    Verdict verdict = Verdict::HoldsGraphically;
    std::vector<std::string> witness;
    std::string detail;
};

struct AssumptionReport {
    std::array<AssumptionVerdict, 4> entries;

    const AssumptionVerdict& operator[](int number) const { return entries.at(number - 1); }
    bool all_hold() const;
    std::string summary() const;
};

// Graphical checks of the four natural-direct-effect identification
// assumptions for exposure a, mediator b, outcome y and adjustment set l.
// Assumption 4 is judged under independent exogenous noise: it holds unless
// an exposure-induced mediator-outcome confounder exists.
AssumptionReport check_nde_assumptions(const CausalDag& dag, const std::string& a, const std::string& b,
                                       const std::string& y, const NodeSet& l);

}  // namespace vaxmed
