#include "vaxmed/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "vaxmed/errors.hpp"

namespace vaxmed {

CausalDag::CausalDag(std::vector<std::string> nodes, EdgeList edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    const std::size_t n = nodes_.size();
    if (n == 0) throw InputError("graph has no nodes");
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes_[i].empty()) throw InputError("empty node identifier");
        for (std::size_t j = 0; j < i; ++j) {
            if (nodes_[i] == nodes_[j]) throw InputError("duplicate node '" + nodes_[i] + "'");
        }
    }
    parents_.assign(n, {});
    children_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges_) {
        if (!has_node(e.from)) throw InputError("edge " + e.from + "->" + e.to + ": undeclared node '" + e.from + "'");
        if (!has_node(e.to)) throw InputError("edge " + e.from + "->" + e.to + ": undeclared node '" + e.to + "'");
        if (e.from == e.to) throw InputError("self-loop on '" + e.from + "'");
        const auto u = index_of(e.from);
        const auto v = index_of(e.to);
        if (!seen.emplace(u, v).second) throw InputError("duplicate edge " + e.from + "->" + e.to);
        parents_[v].push_back(u);
        children_[u].push_back(v);
    }

    // Kahn's algorithm, ties broken by declaration order.
    std::vector<std::size_t> indegree(n);
    for (std::size_t v = 0; v < n; ++v) indegree[v] = parents_[v].size();
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> done(n, false);
    while (order.size() < n) {
        bool progressed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v] || indegree[v] != 0) continue;
            done[v] = true;
            order.push_back(v);
            for (auto c : children_[v]) --indegree[c];
            progressed = true;
            break;
        }
        if (!progressed) break;
    }
    acyclic_ = order.size() == n;
    if (acyclic_) topo_ = std::move(order);
}

bool CausalDag::has_node(const std::string& name) const {
    return std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end();
}

bool CausalDag::has_edge(const std::string& from, const std::string& to) const {
    return std::find(edges_.begin(), edges_.end(), Edge{from, to}) != edges_.end();
}

std::size_t CausalDag::index_of(const std::string& name) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end()) throw InputError("unknown node '" + name + "'");
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::string> CausalDag::parents(const std::string& name) const {
    std::vector<std::string> out;
    for (auto p : parents_[index_of(name)]) out.push_back(nodes_[p]);
    return out;
}

std::vector<std::string> CausalDag::children(const std::string& name) const {
    std::vector<std::string> out;
    for (auto c : children_[index_of(name)]) out.push_back(nodes_[c]);
    return out;
}

const std::vector<std::size_t>& CausalDag::topological_order() const {
    if (!acyclic_) throw InputError("graph has a cycle");
    return topo_;
}

namespace {

std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

void require_acyclic(const CausalDag& dag) {
    if (!dag.is_acyclic()) throw InputError("operation requires an acyclic graph");
}

}  // namespace

NodeSet CausalDag::ancestors(const std::string& name) const {
    auto seen = reach(parents_, index_of(name));
    NodeSet out;
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (seen[v] && nodes_[v] != name) out.insert(nodes_[v]);
    return out;
}

NodeSet CausalDag::descendants(const std::string& name) const {
    auto seen = reach(children_, index_of(name));
    NodeSet out;
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (seen[v] && nodes_[v] != name) out.insert(nodes_[v]);
    return out;
}

bool CausalDag::operator==(const CausalDag& other) const {
    if (nodes_ != other.nodes_) return false;
    std::set<Edge> mine(edges_.begin(), edges_.end());
    std::set<Edge> theirs(other.edges_.begin(), other.edges_.end());
    return mine == theirs;
}

ValidationResult validate(const CausalDag& dag) {
    if (dag.is_acyclic()) return {};
    // Colour-marking DFS; the first back edge closes the witness cycle.
    const std::size_t n = dag.size();
    std::vector<int> colour(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::string> cycle;
    std::function<bool(std::size_t)> visit = [&](std::size_t v) {
        colour[v] = 1;
        stack.push_back(v);
        for (auto w : dag.children_of(v)) {
            if (colour[w] == 1) {
                auto it = std::find(stack.begin(), stack.end(), w);
                for (; it != stack.end(); ++it) cycle.push_back(dag.nodes()[*it]);
                cycle.push_back(dag.nodes()[w]);
                return true;
            }
            if (colour[w] == 0 && visit(w)) return true;
        }
        colour[v] = 2;
        stack.pop_back();
        return false;
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (colour[v] == 0 && visit(v)) break;
    }
    return {false, cycle};
}

namespace {

void check_query(const CausalDag& dag, const std::string& x, const std::string& y, const NodeSet& z) {
    require_acyclic(dag);
    dag.index_of(x);
    dag.index_of(y);
    for (const auto& v : z) dag.index_of(v);
    if (x == y) throw InputError("d-separation query needs two distinct nodes, got '" + x + "' twice");
    if (z.count(x) || z.count(y)) throw InputError("query endpoints must not be in the conditioning set");
}

}  // namespace

bool d_separated(const CausalDag& dag, const std::string& x, const std::string& y, const NodeSet& z) {
    check_query(dag, x, y, z);
    const std::size_t n = dag.size();
    std::vector<bool> in_z(n, false);
    for (const auto& v : z) in_z[dag.index_of(v)] = true;

    // Nodes that are in z or have a descendant in z.
    std::vector<bool> z_anc(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v)
        if (in_z[v]) stack.push_back(v);
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (z_anc[v]) continue;
        z_anc[v] = true;
        for (auto p : dag.parents_of(v)) stack.push_back(p);
    }

    // Direction 0: entered from a child (moving up); 1: entered from a parent.
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::deque<std::pair<std::size_t, int>> queue{{dag.index_of(x), 0}};
    const auto target = dag.index_of(y);
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[v][dir]) continue;
        visited[v][dir] = true;
        if (!in_z[v] && v == target) return false;
        if (dir == 0) {
            if (in_z[v]) continue;
            for (auto p : dag.parents_of(v)) queue.emplace_back(p, 0);
            for (auto c : dag.children_of(v)) queue.emplace_back(c, 1);
        } else {
            if (!in_z[v])
                for (auto c : dag.children_of(v)) queue.emplace_back(c, 1);
            if (z_anc[v])
                for (auto p : dag.parents_of(v)) queue.emplace_back(p, 0);
        }
    }
    return true;
}

std::optional<std::vector<std::string>> find_open_path(const CausalDag& dag, const std::string& x,
                                                       const std::string& y, const NodeSet& z) {
    check_query(dag, x, y, z);
    const std::size_t n = dag.size();
    std::vector<bool> in_z(n, false);
    for (const auto& v : z) in_z[dag.index_of(v)] = true;
    std::vector<bool> activates(n, false);  // in z or ancestor of a z node
    for (const auto& v : z) {
        activates[dag.index_of(v)] = true;
        for (const auto& anc : dag.ancestors(v)) activates[dag.index_of(anc)] = true;
    }
    auto is_parent = [&](std::size_t p, std::size_t c) {
        const auto& ps = dag.parents_of(c);
        return std::find(ps.begin(), ps.end(), p) != ps.end();
    };

    const auto source = dag.index_of(x);
    const auto target = dag.index_of(y);
    std::vector<std::size_t> path{source};
    std::vector<bool> on_path(n, false);
    on_path[source] = true;

    std::function<bool()> extend = [&]() -> bool {
        const auto v = path.back();
        if (v == target) return true;
        std::vector<std::size_t> next(dag.parents_of(v));
        next.insert(next.end(), dag.children_of(v).begin(), dag.children_of(v).end());
        for (auto w : next) {
            if (on_path[w]) continue;
            if (path.size() >= 2) {
                const auto prev = path[path.size() - 2];
                const bool collider = is_parent(prev, v) && is_parent(w, v);
                if (collider ? !activates[v] : in_z[v]) continue;
            }
            path.push_back(w);
            on_path[w] = true;
            if (extend()) return true;
            on_path[w] = false;
            path.pop_back();
        }
        return false;
    };
    if (!extend()) return std::nullopt;
    std::vector<std::string> out;
    for (auto v : path) out.push_back(dag.nodes()[v]);
    return out;
}

std::string format_path(const CausalDag& dag, const std::vector<std::string>& path) {
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) os << (dag.has_edge(path[i - 1], path[i]) ? " -> " : " <- ");
        os << path[i];
    }
    return os.str();
}

CausalDag remove_edges(const CausalDag& dag, const EdgeList& edges) {
    for (const auto& e : edges) {
        if (!dag.has_edge(e.from, e.to)) throw InputError("cannot remove nonexistent edge " + e.from + "->" + e.to);
    }
    EdgeList kept;
    for (const auto& e : dag.edges()) {
        if (std::find(edges.begin(), edges.end(), e) == edges.end()) kept.push_back(e);
    }
    return CausalDag(dag.nodes(), std::move(kept));
}

CausalDag remove_outgoing(const CausalDag& dag, const std::string& node) {
    EdgeList out;
    for (const auto& child : dag.children(node)) out.push_back({node, child});
    return remove_edges(dag, out);
}

NodeSet find_exposure_induced_confounders(const CausalDag& dag, const std::string& a, const std::string& b,
                                          const std::string& y) {
    require_acyclic(dag);
    if (a == b || a == y || b == y) throw InputError("exposure, mediator and outcome must be distinct");
    const auto desc_a = dag.descendants(a);
    const auto anc_b = dag.ancestors(b);

    // Ancestors of y through directed paths that never visit b.
    const std::size_t n = dag.size();
    const auto skip = dag.index_of(b);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{dag.index_of(y)};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto p : dag.parents_of(v)) {
            if (p == skip || seen[p]) continue;
            seen[p] = true;
            stack.push_back(p);
        }
    }

    NodeSet out;
    for (const auto& c : desc_a) {
        if (c == b || c == y) continue;
        if (anc_b.count(c) && seen[dag.index_of(c)]) out.insert(c);
    }
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::HoldsGraphically: return "holds-graphically";
        case Verdict::Violated: return "violated";
        case Verdict::NotDecidableGraphically: return "not-decidable-graphically";
    }
    return "?";
}

bool AssumptionReport::all_hold() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const auto& e) { return e.verdict == Verdict::HoldsGraphically; });
}

std::string AssumptionReport::summary() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        if (e.number > 1) os << "; ";
        os << "A" << e.number << "=" << to_string(e.verdict);
        if (!e.detail.empty()) os << " (" << e.detail << ")";
    }
    return os.str();
}

namespace {

AssumptionVerdict separation_verdict(int number, const CausalDag& g, const std::string& x, const std::string& y,
                                     const NodeSet& z) {
    AssumptionVerdict v;
    v.number = number;
    if (auto path = find_open_path(g, x, y, z)) {
        v.verdict = Verdict::Violated;
        v.witness = *path;
        v.detail = "open path " + format_path(g, *path);
    }
    return v;
}

}  // namespace

AssumptionReport check_nde_assumptions(const CausalDag& dag, const std::string& a, const std::string& b,
                                       const std::string& y, const NodeSet& l) {
    require_acyclic(dag);
    for (const auto& v : {a, b, y}) dag.index_of(v);
    for (const auto& v : l) dag.index_of(v);
    if (a == b || a == y || b == y) throw InputError("exposure, mediator and outcome must be distinct");
    for (const auto& v : {a, b, y}) {
        if (l.count(v)) throw InputError("node '" + v + "' cannot be both a role and in the adjustment set");
    }

    AssumptionReport report;
    const auto cut_a = remove_outgoing(dag, a);
    const auto cut_b = remove_outgoing(dag, b);
    NodeSet l_and_a = l;
    l_and_a.insert(a);

    report.entries[0] = separation_verdict(1, cut_a, a, y, l);
    report.entries[1] = separation_verdict(2, cut_b, b, y, l_and_a);
    report.entries[2] = separation_verdict(3, cut_a, a, b, l);

    auto& fourth = report.entries[3];
    fourth.number = 4;
    const auto confounders = find_exposure_induced_confounders(dag, a, b, y);
    if (!confounders.empty()) {
        fourth.verdict = Verdict::Violated;
        fourth.witness.assign(confounders.begin(), confounders.end());
        std::string names;
        for (const auto& c : confounders) names += (names.empty() ? "" : ",") + c;
        fourth.detail = "exposure-induced mediator-outcome confounder " + names;
    }
    return report;
}

}  // namespace vaxmed
