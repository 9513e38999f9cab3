#include "vaxmed/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vaxmed {

using Json = nlohmann::ordered_json;

ScenarioError::ScenarioError(std::vector<ScenarioIssue> issues)
    : InputError([&] {
          std::string msg = "invalid scenario:";
          for (const auto& i : issues) msg += "\n  " + i.location + ": " + i.message;
          return msg;
      }()),
      issues_(std::move(issues)) {}

namespace {

std::string trim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    return s.substr(start);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

const char* coupling_name(Coupling c) { return c == Coupling::Monotone ? "monotone" : "independent"; }

Coupling parse_coupling(const std::string& s) {
    if (s == "monotone") return Coupling::Monotone;
    if (s == "independent") return Coupling::Independent;
    throw InputError("unknown coupling '" + s + "' (expected monotone or independent)");
}

// Keys of the parent configurations in canonical order.
std::vector<std::string> config_keys(const std::vector<std::vector<int>>& parent_supports) {
    std::vector<std::string> keys{""};
    for (std::size_t k = 0; k < parent_supports.size(); ++k) {
        std::vector<std::string> next;
        for (const auto& prefix : keys) {
            for (int v : parent_supports[k]) next.push_back(prefix + (k == 0 ? "" : ",") + std::to_string(v));
        }
        keys = std::move(next);
    }
    return keys;
}

std::string normalise_key(const std::string& key) {
    std::string out;
    for (char c : key)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

struct Issues {
    std::vector<ScenarioIssue> list;
    void add(std::string where, std::string what) { list.push_back({std::move(where), std::move(what)}); }
};

// Typed field access that records an issue instead of throwing.
template <class T>
std::optional<T> field(const Json& obj, const std::string& key, const std::string& where, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    try {
        return obj.at(key).get<T>();
    } catch (const Json::exception& e) {
        issues.add(where + "/" + key, std::string("wrong type: ") + e.what());
        return std::nullopt;
    }
}

struct AnalysisNeeds {
    bool exposure = false, mediator = false, outcome = false, perception = false, probe = false, subgroup = false,
         paths = false, behaviour = false, groups = false;
    bool takes_args = false;
};

const std::map<std::string, AnalysisNeeds>& analysis_table() {
    static const std::map<std::string, AnalysisNeeds> table = [] {
        std::map<std::string, AnalysisNeeds> t;
        AnalysisNeeds eo;
        eo.exposure = eo.outcome = true;
        AnalysisNeeds ebo = eo;
        ebo.mediator = true;
        t["tau_rw"] = eo;
        t["nde"] = ebo;
        t["nie"] = ebo;
        t["assumptions"] = ebo;
        auto cde = ebo;
        cde.takes_args = true;
        t["cde"] = cde;
        auto vt = eo;
        vt.perception = true;
        t["tau_vt"] = vt;
        auto pse = eo;
        pse.paths = true;
        t["pse"] = pse;
        auto pn = ebo;
        pn.takes_args = true;
        t["plugin_nde"] = pn;
        t["misclassified_nde"] = pn;
        auto pt = eo;
        pt.takes_args = true;
        t["plugin_total"] = pt;
        auto pos = ebo;
        pos.takes_args = true;
        t["positivity"] = pos;
        AnalysisNeeds alt;
        alt.exposure = alt.probe = true;
        alt.takes_args = true;
        t["alt_outcome"] = alt;
        AnalysisNeeds panel;
        panel.exposure = panel.outcome = panel.probe = panel.behaviour = true;
        t["panel"] = panel;
        auto neg = eo;
        neg.subgroup = true;
        neg.takes_args = true;
        t["negctrl"] = neg;
        auto interf = ebo;
        interf.groups = true;
        interf.takes_args = true;
        t["interf_total"] = interf;
        t["interf_nde"] = interf;
        t["interf_spillover"] = interf;
        return t;
    }();
    return table;
}

}  // namespace

AnalysisRequest parse_analysis(const std::string& text) {
    AnalysisRequest req;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        req.kind = trim(text);
        return req;
    }
    if (text.back() != ')') throw InputError("analysis '" + text + "': missing ')'");
    req.kind = trim(text.substr(0, open));
    const auto inner = trim(text.substr(open + 1, text.size() - open - 2));
    req.args = inner.empty() ? std::vector<std::string>{} : split_list(inner);
    return req;
}

StructuralModel Scenario::model() const {
    std::vector<NodeSpec> specs;
    for (const auto& n : nodes) {
        if (!n.explicit_table()) {
            if (n.support != std::vector<int>{0, 1})
                throw InputError("node '" + n.name + "': probability form needs support [0,1]");
            specs.push_back(bernoulli_node(n.name, n.parents, n.prob, n.coupling.value_or(coupling), resolution));
            continue;
        }
        NodeSpec spec;
        spec.name = n.name;
        spec.parents = n.parents;
        spec.support = n.support;
        spec.noise = n.noise;
        for (const auto& row : n.table) {
            if (row.size() != n.noise.size())
                throw InputError("node '" + n.name + "': table row length differs from noise support size");
            spec.table.insert(spec.table.end(), row.begin(), row.end());
        }
        specs.push_back(std::move(spec));
    }
    return StructuralModel(std::move(specs));
}

GroupedModel Scenario::grouped_model() const {
    if (!groups) throw InputError("scenario has no groups block");
    auto find = [&](const std::string& name) -> const NodeSource& {
        for (const auto& n : nodes)
            if (n.name == name) return n;
        throw InputError("unknown node '" + name + "'");
    };
    const auto& a = find(roles.exposure);
    const auto& b = find(roles.mediator);
    const auto& y = find(roles.outcome);
    if (a.explicit_table() || b.explicit_table() || y.explicit_table())
        throw InputError("grouped scenarios need exposure, mediator and outcome in probability form");
    if (!a.parents.empty() || b.parents != std::vector<std::string>{a.name})
        throw InputError("grouped scenarios need parents: exposure none, mediator [exposure]");
    UnitTemplate unit;
    unit.pr_b = {b.prob[0], b.prob[1]};
    if (y.parents == std::vector<std::string>{a.name, b.name}) {
        unit.pr_y = {{{y.prob[0], y.prob[1]}, {y.prob[2], y.prob[3]}}};
    } else if (y.parents == std::vector<std::string>{b.name, a.name}) {
        unit.pr_y = {{{y.prob[0], y.prob[2]}, {y.prob[1], y.prob[3]}}};
    } else {
        throw InputError("grouped scenarios need outcome parents [exposure, mediator]");
    }
    unit.y_coef = groups->y_coef;
    unit.b_coef = groups->b_coef;
    unit.mediator_reads_group = groups->mediator_reads_group;
    unit.resolution = resolution;
    return GroupedModel(groups->sizes, unit, groups->summary);
}

Scenario parse_scenario(const std::string& text) {
    Issues issues;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ScenarioError({{"line " + std::to_string(line) + ", column " + std::to_string(col), e.what()}});
    }
    if (!doc.is_object()) throw ScenarioError(std::vector<ScenarioIssue>{{"/", "scenario must be a JSON object"}});

    static const std::set<std::string> known_top{"schema_version", "name",   "description", "coupling",
                                                 "resolution",     "nodes",  "roles",       "analyses",
                                                 "sample_size",    "seed",   "bootstrap",   "z_threshold",
                                                 "min_subgroup",   "groups"};
    for (const auto& [k, _] : doc.items())
        if (!known_top.count(k)) issues.add("/" + k, "unknown field");

    Scenario sc;
    if (auto v = field<int>(doc, "schema_version", "", issues)) {
        sc.schema_version = *v;
        if (*v != kScenarioSchemaVersion)
            issues.add("/schema_version", "unsupported schema version " + std::to_string(*v));
    } else {
        issues.add("/schema_version", "missing schema version");
    }
    if (auto v = field<std::string>(doc, "name", "", issues)) sc.name = *v;
    if (sc.name.empty()) issues.add("/name", "missing scenario name");
    if (auto v = field<std::string>(doc, "description", "", issues)) sc.description = *v;
    if (auto v = field<std::string>(doc, "coupling", "", issues)) {
        try {
            sc.coupling = parse_coupling(*v);
        } catch (const InputError& e) {
            issues.add("/coupling", e.what());
        }
    }
    if (auto v = field<int>(doc, "resolution", "", issues)) {
        if (*v < 0) issues.add("/resolution", "must be nonnegative");
        sc.resolution = *v;
    }
    if (auto v = field<std::size_t>(doc, "sample_size", "", issues)) {
        if (*v == 0) issues.add("/sample_size", "must be at least 1");
        sc.sample_size = *v;
    }
    if (auto v = field<std::uint64_t>(doc, "seed", "", issues)) sc.seed = *v;
    if (auto v = field<std::size_t>(doc, "bootstrap", "", issues)) sc.bootstrap = *v;
    if (auto v = field<double>(doc, "z_threshold", "", issues)) {
        if (!(*v > 0)) issues.add("/z_threshold", "must be positive");
        sc.z_threshold = *v;
    }
    if (auto v = field<std::size_t>(doc, "min_subgroup", "", issues)) sc.min_subgroup = *v;

    // Nodes: two passes, since probability keys depend on parents' supports.
    const Json nodes = doc.contains("nodes") ? doc.at("nodes") : Json();
    if (!nodes.is_array() || nodes.empty()) {
        issues.add("/nodes", "expected a nonempty array of nodes");
    } else {
        std::map<std::string, std::vector<int>> supports;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const std::string where = "/nodes/" + std::to_string(k);
            const auto& n = nodes[k];
            NodeSource src;
            if (!n.is_object()) {
                issues.add(where, "expected an object");
                sc.nodes.push_back(src);
                continue;
            }
            for (const auto& [key, _] : n.items()) {
                static const std::set<std::string> known{"name", "parents", "support", "prob", "coupling", "noise", "table"};
                if (!known.count(key)) issues.add(where + "/" + key, "unknown field");
            }
            if (auto v = field<std::string>(n, "name", where, issues)) src.name = *v;
            if (src.name.empty()) issues.add(where + "/name", "missing node name");
            if (auto v = field<std::vector<std::string>>(n, "parents", where, issues)) src.parents = *v;
            if (auto v = field<std::vector<int>>(n, "support", where, issues)) src.support = *v;
            if (auto v = field<std::string>(n, "coupling", where, issues)) {
                try {
                    src.coupling = parse_coupling(*v);
                } catch (const InputError& e) {
                    issues.add(where + "/coupling", e.what());
                }
            }
            if (supports.count(src.name)) issues.add(where + "/name", "duplicate node '" + src.name + "'");
            supports[src.name] = src.support;
            sc.nodes.push_back(std::move(src));
        }

        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const std::string where = "/nodes/" + std::to_string(k);
            const auto& n = nodes[k];
            auto& src = sc.nodes[k];
            if (!n.is_object()) continue;
            std::vector<std::vector<int>> parent_supports;
            bool parents_ok = true;
            for (const auto& p : src.parents) {
                auto it = supports.find(p);
                if (it == supports.end()) {
                    issues.add(where + "/parents", "node '" + src.name + "': unknown parent '" + p + "'");
                    parents_ok = false;
                } else {
                    parent_supports.push_back(it->second);
                }
            }
            if (!parents_ok) continue;
            const auto keys = config_keys(parent_supports);
            const bool has_prob = n.contains("prob");
            const bool has_table = n.contains("table") || n.contains("noise");
            if (has_prob == has_table) {
                issues.add(where, "node '" + src.name + "': give either 'prob' or 'noise' + 'table'");
                continue;
            }
            if (has_prob) {
                const auto& p = n.at("prob");
                if (p.is_number() && src.parents.empty()) {
                    src.prob = {p.get<double>()};
                } else if (p.is_object()) {
                    std::map<std::string, double> given;
                    for (const auto& [key, value] : p.items()) {
                        if (!value.is_number()) {
                            issues.add(where + "/prob/" + key, "expected a probability");
                            continue;
                        }
                        given[normalise_key(key)] = value.get<double>();
                    }
                    for (const auto& key : keys) {
                        auto it = given.find(key);
                        if (it == given.end()) {
                            issues.add(where + "/prob", "node '" + src.name + "': missing configuration '" + key + "'");
                            continue;
                        }
                        src.prob.push_back(it->second);
                        given.erase(it);
                    }
                    for (const auto& [key, _] : given)
                        issues.add(where + "/prob/" + key, "node '" + src.name + "': unknown parent configuration");
                } else {
                    issues.add(where + "/prob", "expected a number (no parents) or an object keyed by parent values");
                    continue;
                }
                for (double v : src.prob) {
                    if (!(v >= 0.0 && v <= 1.0)) {
                        issues.add(where + "/prob", "node '" + src.name + "': probability outside [0,1]");
                        break;
                    }
                }
            } else {
                if (auto v = field<std::vector<double>>(n, "noise", where, issues)) src.noise = *v;
                double total = 0.0;
                bool negative = false;
                for (double w : src.noise) {
                    total += w;
                    negative |= w < 0.0;
                }
                if (src.noise.empty()) {
                    issues.add(where + "/noise", "node '" + src.name + "': empty noise support");
                } else if (negative || std::abs(total - 1.0) > 1e-12) {
                    std::ostringstream os;
                    os << "node '" << src.name << "': noise weights must be nonnegative and sum to 1 (sum is "
                       << total << ")";
                    issues.add(where + "/noise", os.str());
                }
                const Json table = n.contains("table") ? n.at("table") : Json();
                if (!table.is_object()) {
                    issues.add(where + "/table", "node '" + src.name + "': expected an object keyed by parent values");
                    continue;
                }
                std::map<std::string, std::vector<int>> given;
                for (const auto& [key, value] : table.items()) {
                    try {
                        given[normalise_key(key)] = value.get<std::vector<int>>();
                    } catch (const Json::exception&) {
                        issues.add(where + "/table/" + key, "expected an array of node values");
                    }
                }
                for (const auto& key : keys) {
                    auto it = given.find(key);
                    if (it == given.end()) {
                        issues.add(where + "/table", "node '" + src.name + "': missing configuration '" + key + "'");
                        continue;
                    }
                    if (it->second.size() != src.noise.size())
                        issues.add(where + "/table/" + key, "node '" + src.name + "': row length differs from noise size");
                    src.table.push_back(it->second);
                    given.erase(it);
                }
                for (const auto& [key, _] : given)
                    issues.add(where + "/table/" + key, "node '" + src.name + "': unknown parent configuration");
            }
        }
    }

    // Roles.
    std::set<std::string> declared;
    for (const auto& n : sc.nodes) declared.insert(n.name);
    if (doc.contains("roles")) {
        const auto& r = doc.at("roles");
        if (!r.is_object()) {
            issues.add("/roles", "expected an object");
        } else {
            static const std::set<std::string> single{"exposure", "mediator", "outcome",  "perception",
                                                      "probe",    "subgroup", "mask",     "contacts"};
            static const std::set<std::string> multi{"adjust", "condition", "behaviour"};
            for (const auto& [key, value] : r.items()) {
                const std::string where = "/roles/" + key;
                if (single.count(key)) {
                    if (!value.is_string()) {
                        issues.add(where, "expected a node name");
                        continue;
                    }
                    const auto name = value.get<std::string>();
                    if (!declared.count(name)) issues.add(where, "unknown node '" + name + "' in role binding");
                    std::string* slot = key == "exposure"     ? &sc.roles.exposure
                                        : key == "mediator"   ? &sc.roles.mediator
                                        : key == "outcome"    ? &sc.roles.outcome
                                        : key == "perception" ? &sc.roles.perception
                                        : key == "probe"      ? &sc.roles.probe
                                        : key == "subgroup"   ? &sc.roles.subgroup
                                        : key == "mask"       ? &sc.roles.mask
                                                              : &sc.roles.contacts;
                    *slot = name;
                } else if (multi.count(key)) {
                    std::vector<std::string> names;
                    try {
                        names = value.get<std::vector<std::string>>();
                    } catch (const Json::exception&) {
                        issues.add(where, "expected an array of node names");
                        continue;
                    }
                    for (const auto& name : names)
                        if (!declared.count(name)) issues.add(where, "unknown node '" + name + "' in role binding");
                    (key == "adjust" ? sc.roles.adjust : key == "condition" ? sc.roles.condition : sc.roles.behaviour) =
                        names;
                } else {
                    issues.add(where, "unknown role");
                }
            }
        }
    }
    {
        std::map<std::string, std::string> taken;
        const std::pair<const char*, const std::string*> singles[] = {
            {"exposure", &sc.roles.exposure}, {"mediator", &sc.roles.mediator}, {"outcome", &sc.roles.outcome},
            {"perception", &sc.roles.perception}, {"probe", &sc.roles.probe},   {"subgroup", &sc.roles.subgroup},
            {"mask", &sc.roles.mask},           {"contacts", &sc.roles.contacts}};
        for (const auto& [role, name] : singles) {
            if (name->empty()) continue;
            auto [it, fresh] = taken.emplace(*name, role);
            if (!fresh) issues.add(std::string("/roles/") + role, "node '" + *name + "' already bound to role " + it->second);
        }
        for (const auto& v : sc.roles.adjust) {
            if (v == sc.roles.exposure || v == sc.roles.mediator || v == sc.roles.outcome)
                issues.add("/roles/adjust", "node '" + v + "' cannot be both a role and in the adjustment set");
        }
        for (const auto& v : sc.roles.condition) {
            if (v == sc.roles.exposure || v == sc.roles.probe)
                issues.add("/roles/condition", "conditioning set must not contain the exposure or the probe");
        }
    }

    // Groups.
    if (doc.contains("groups")) {
        const auto& g = doc.at("groups");
        GroupsSpec spec;
        if (!g.is_object()) {
            issues.add("/groups", "expected an object");
        } else {
            for (const auto& [key, _] : g.items()) {
                static const std::set<std::string> known{"sizes",  "summary", "alpha",
                                                         "y_coef", "b_coef",  "mediator_reads_group"};
                if (!known.count(key)) issues.add("/groups/" + key, "unknown field");
            }
            if (auto v = field<std::vector<std::size_t>>(g, "sizes", "/groups", issues)) spec.sizes = *v;
            if (spec.sizes.empty()) issues.add("/groups/sizes", "expected a nonempty array of group sizes");
            if (auto v = field<std::string>(g, "summary", "/groups", issues)) {
                try {
                    spec.summary = parse_summary_kind(*v);
                } catch (const InputError& e) {
                    issues.add("/groups/summary", e.what());
                }
            }
            if (auto v = field<double>(g, "alpha", "/groups", issues)) {
                if (!(*v >= 0 && *v <= 1)) issues.add("/groups/alpha", "must lie in [0,1]");
                spec.alpha = *v;
            }
            if (auto v = field<double>(g, "y_coef", "/groups", issues)) spec.y_coef = *v;
            if (auto v = field<double>(g, "b_coef", "/groups", issues)) spec.b_coef = *v;
            if (auto v = field<bool>(g, "mediator_reads_group", "/groups", issues)) spec.mediator_reads_group = *v;
        }
        sc.groups = spec;
    }

    // Analyses.
    if (auto v = field<std::vector<std::string>>(doc, "analyses", "", issues)) sc.analyses = *v;
    {
        std::set<std::string> seen;
        for (std::size_t k = 0; k < sc.analyses.size(); ++k) {
            const std::string where = "/analyses/" + std::to_string(k);
            const auto& text = sc.analyses[k];
            if (!seen.insert(text).second) issues.add(where, "analysis '" + text + "' requested twice");
            AnalysisRequest req;
            try {
                req = parse_analysis(text);
            } catch (const InputError& e) {
                issues.add(where, e.what());
                continue;
            }
            auto it = analysis_table().find(req.kind);
            if (it == analysis_table().end()) {
                issues.add(where, "unknown analysis '" + req.kind + "'");
                continue;
            }
            const auto& need = it->second;
            if (req.args && !need.takes_args) issues.add(where, "analysis '" + req.kind + "' takes no arguments");
            auto require = [&](bool needed, const std::string& bound, const char* role) {
                if (needed && bound.empty())
                    issues.add(where, "unsatisfiable analysis '" + text + "': needs a " + role + " role");
            };
            require(need.exposure, sc.roles.exposure, "exposure");
            require(need.mediator, sc.roles.mediator, "mediator");
            require(need.outcome, sc.roles.outcome, "outcome");
            require(need.perception, sc.roles.perception, "perception");
            require(need.probe, sc.roles.probe, "probe");
            require(need.subgroup, sc.roles.subgroup, "subgroup");
            require(need.paths, sc.roles.mask, "mask");
            require(need.paths, sc.roles.contacts, "contacts");
            if (need.behaviour && sc.roles.behaviour.empty())
                issues.add(where, "unsatisfiable analysis '" + text + "': needs a behaviour role");
            if (need.groups && !sc.groups) issues.add(where, "unsatisfiable analysis '" + text + "': needs a groups block");
            if (req.kind == "cde") {
                if (!req.args || req.args->size() != 1) {
                    issues.add(where, "cde needs one mediator level, e.g. cde(1)");
                } else {
                    try {
                        std::size_t used = 0;
                        (void)std::stoi(req.args->front(), &used);
                        if (used != req.args->front().size()) throw InputError("");
                    } catch (const std::exception&) {
                        issues.add(where, "cde level must be an integer");
                    }
                }
            }
            if (req.kind == "misclassified_nde") {
                bool ok = req.args && req.args->size() == 1;
                if (ok) {
                    try {
                        const double p = std::stod(req.args->front());
                        ok = p >= 0.0 && p <= 1.0;
                    } catch (const std::exception&) {
                        ok = false;
                    }
                }
                if (!ok) issues.add(where, "misclassified_nde needs one flip probability in [0,1]");
            }
            if (req.kind.rfind("interf_", 0) == 0 && req.args) {
                if (req.args->size() != 1 || ((*req.args)[0] != "units" && (*req.args)[0] != "groups"))
                    issues.add(where, "interference averages take 'units' or 'groups'");
            }
            if ((req.kind == "plugin_nde" || req.kind == "plugin_total" || req.kind == "alt_outcome" ||
                 req.kind == "negctrl" || req.kind == "positivity") &&
                req.args) {
                for (const auto& name : *req.args)
                    if (!declared.count(name)) issues.add(where, "unknown node '" + name + "' in conditioning set");
            }
        }
    }

    if (!issues.list.empty()) throw ScenarioError(std::move(issues.list));

    // Whole-model checks: cycles, table totality, supports.
    std::optional<StructuralModel> model;
    try {
        model = sc.model();
    } catch (const InputError& e) {
        issues.add("/nodes", e.what());
    }
    if (model) {
        if (!sc.roles.perception.empty()) {
            const auto& s = model->node(sc.roles.perception).support;
            if (std::set<int>(s.begin(), s.end()) != std::set<int>{-1, 0, 1})
                issues.add("/roles/perception", "perception node must have support [-1,0,1]");
        }
        if (sc.groups) {
            try {
                (void)sc.grouped_model();
            } catch (const InputError& e) {
                issues.add("/groups", e.what());
            }
        }
    }
    if (!issues.list.empty()) throw ScenarioError(std::move(issues.list));
    return sc;
}

std::string serialize_scenario(const Scenario& sc) {
    std::map<std::string, std::vector<int>> supports;
    for (const auto& n : sc.nodes) supports[n.name] = n.support;

    Json doc;
    doc["schema_version"] = sc.schema_version;
    doc["name"] = sc.name;
    if (!sc.description.empty()) doc["description"] = sc.description;
    doc["coupling"] = coupling_name(sc.coupling);
    doc["resolution"] = sc.resolution;
    Json nodes = Json::array();
    for (const auto& n : sc.nodes) {
        Json node;
        node["name"] = n.name;
        if (!n.parents.empty()) node["parents"] = n.parents;
        if (n.support != std::vector<int>{0, 1}) node["support"] = n.support;
        std::vector<std::vector<int>> ps;
        for (const auto& p : n.parents) ps.push_back(supports.at(p));
        const auto keys = config_keys(ps);
        if (!n.explicit_table()) {
            if (n.parents.empty()) {
                node["prob"] = n.prob.at(0);
            } else {
                Json prob = Json::object();
                for (std::size_t c = 0; c < keys.size(); ++c) prob[keys[c]] = n.prob.at(c);
                node["prob"] = prob;
            }
            if (n.coupling) node["coupling"] = coupling_name(*n.coupling);
        } else {
            node["noise"] = n.noise;
            Json table = Json::object();
            for (std::size_t c = 0; c < keys.size(); ++c) table[keys[c]] = n.table.at(c);
            node["table"] = table;
        }
        nodes.push_back(node);
    }
    doc["nodes"] = nodes;

    Json roles = Json::object();
    const std::pair<const char*, const std::string*> singles[] = {
        {"exposure", &sc.roles.exposure}, {"mediator", &sc.roles.mediator}, {"outcome", &sc.roles.outcome},
        {"perception", &sc.roles.perception}, {"probe", &sc.roles.probe},   {"subgroup", &sc.roles.subgroup},
        {"mask", &sc.roles.mask},           {"contacts", &sc.roles.contacts}};
    for (const auto& [role, name] : singles)
        if (!name->empty()) roles[role] = *name;
    if (!sc.roles.adjust.empty()) roles["adjust"] = sc.roles.adjust;
    if (!sc.roles.condition.empty()) roles["condition"] = sc.roles.condition;
    if (!sc.roles.behaviour.empty()) roles["behaviour"] = sc.roles.behaviour;
    doc["roles"] = roles;

    doc["analyses"] = sc.analyses;
    doc["sample_size"] = sc.sample_size;
    doc["seed"] = sc.seed;
    doc["bootstrap"] = sc.bootstrap;
    doc["z_threshold"] = sc.z_threshold;
    doc["min_subgroup"] = sc.min_subgroup;
    if (sc.groups) {
        Json g;
        g["sizes"] = sc.groups->sizes;
        g["summary"] = to_string(sc.groups->summary);
        g["alpha"] = sc.groups->alpha;
        g["y_coef"] = sc.groups->y_coef;
        g["b_coef"] = sc.groups->b_coef;
        g["mediator_reads_group"] = sc.groups->mediator_reads_group;
        doc["groups"] = g;
    }
    return doc.dump(2) + "\n";
}

}  // namespace vaxmed
