#include <map>

#include "vaxmed/scenario.hpp"

namespace vaxmed {

namespace {

// Keyed by name; the order of the map is the listing order.
const std::map<std::string, std::string>& sources() {
    static const std::map<std::string, std::string> table = {
        {"table1", R"json({
  "schema_version": 1,
  "name": "table1",
  "description": "Vaccination raises the probability of risky behaviour; no confounding.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["A", "B"], "prob": {"0,0": 0.25, "0,1": 0.35, "1,0": 0.14, "1,1": 0.21}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y"},
  "analyses": ["tau_rw", "nde", "nie", "cde(0)", "cde(1)", "assumptions", "plugin_total", "plugin_nde",
               "misclassified_nde(0.1)", "positivity"],
  "sample_size": 100000,
  "seed": 1,
  "bootstrap": 200
})json"},
        {"fig1-panel1", R"json({
  "schema_version": 1,
  "name": "fig1-panel1",
  "description": "Exposure, behaviour and outcome without confounding.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["A", "B"], "prob": {"0,0": 0.25, "0,1": 0.35, "1,0": 0.14, "1,1": 0.21}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y"},
  "analyses": ["tau_rw", "nde", "nie", "assumptions", "plugin_total", "plugin_nde"],
  "sample_size": 100000,
  "seed": 1,
  "bootstrap": 200
})json"},
        {"fig1-panel2", R"json({
  "schema_version": 1,
  "name": "fig1-panel2",
  "description": "Healthcare seeking behaviour H confounds vaccination and the outcome.",
  "nodes": [
    {"name": "H", "prob": 0.4},
    {"name": "A", "parents": ["H"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["H", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.35, "0,1,0": 0.14, "0,1,1": 0.21,
              "1,0,0": 0.45, "1,0,1": 0.55, "1,1,0": 0.34, "1,1,1": 0.41}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "adjust": ["H"]},
  "analyses": ["tau_rw", "nde", "nie", "assumptions", "plugin_total", "plugin_total()", "plugin_nde",
               "plugin_nde()", "positivity"],
  "sample_size": 100000,
  "seed": 1,
  "bootstrap": 200
})json"},
        {"fig1-panel3", R"json({
  "schema_version": 1,
  "name": "fig1-panel3",
  "description": "H affects vaccination, behaviour and the outcome; work environment W affects behaviour.",
  "nodes": [
    {"name": "H", "prob": 0.4},
    {"name": "W", "prob": 0.5},
    {"name": "A", "parents": ["H"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "B", "parents": ["H", "W", "A"],
     "prob": {"0,0,0": 0.20, "0,0,1": 0.55, "0,1,0": 0.35, "0,1,1": 0.70,
              "1,0,0": 0.40, "1,0,1": 0.75, "1,1,0": 0.55, "1,1,1": 0.90}},
    {"name": "Y", "parents": ["H", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.35, "0,1,0": 0.14, "0,1,1": 0.21,
              "1,0,0": 0.45, "1,0,1": 0.55, "1,1,0": 0.34, "1,1,1": 0.41}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "adjust": ["H"]},
  "analyses": ["tau_rw", "nde", "nie", "assumptions", "plugin_total", "plugin_total()", "plugin_nde",
               "plugin_nde()", "positivity"],
  "sample_size": 100000,
  "seed": 1,
  "bootstrap": 200
})json"},
        {"fig2", R"json({
  "schema_version": 1,
  "name": "fig2",
  "description": "Vaccination changes later healthcare seeking H2, which confounds behaviour and outcome.",
  "nodes": [
    {"name": "H1", "prob": 0.4},
    {"name": "A", "parents": ["H1"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "H2", "parents": ["H1", "A"], "prob": {"0,0": 0.10, "0,1": 0.60, "1,0": 0.35, "1,1": 0.85}},
    {"name": "B", "parents": ["H1", "H2", "A"],
     "prob": {"0,0,0": 0.10, "0,0,1": 0.40, "0,1,0": 0.60, "0,1,1": 0.90,
              "1,0,0": 0.20, "1,0,1": 0.50, "1,1,0": 0.70, "1,1,1": 0.95}},
    {"name": "Y", "parents": ["H1", "H2", "A", "B"],
     "prob": {"0,0,0,0": 0.20, "0,0,0,1": 0.30, "0,0,1,0": 0.08, "0,0,1,1": 0.18,
              "0,1,0,0": 0.35, "0,1,0,1": 0.45, "0,1,1,0": 0.23, "0,1,1,1": 0.33,
              "1,0,0,0": 0.25, "1,0,0,1": 0.35, "1,0,1,0": 0.13, "1,0,1,1": 0.23,
              "1,1,0,0": 0.40, "1,1,0,1": 0.50, "1,1,1,0": 0.28, "1,1,1,1": 0.38}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "adjust": ["H1"]},
  "analyses": ["tau_rw", "nde", "nie", "assumptions", "plugin_total", "plugin_nde", "plugin_nde(H1,H2)"],
  "sample_size": 100000,
  "seed": 1,
  "bootstrap": 200
})json"},
        {"fig3-panel1", R"json({
  "schema_version": 1,
  "name": "fig3-panel1",
  "description": "Alternative infection outcome R shares behaviour B with the outcome of interest.",
  "nodes": [
    {"name": "H", "prob": 0.4},
    {"name": "A", "parents": ["H"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "B", "parents": ["H", "A"], "prob": {"0,0": 0.20, "0,1": 0.60, "1,0": 0.40, "1,1": 0.80}},
    {"name": "Y", "parents": ["H", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.35, "0,1,0": 0.14, "0,1,1": 0.21,
              "1,0,0": 0.40, "1,0,1": 0.50, "1,1,0": 0.29, "1,1,1": 0.36}},
    {"name": "R", "parents": ["H", "B"], "prob": {"0,0": 0.10, "0,1": 0.25, "1,0": 0.20, "1,1": 0.35}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "probe": "R", "condition": ["H"],
            "behaviour": ["B"]},
  "analyses": ["tau_rw", "alt_outcome", "alt_outcome()", "panel"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"fig3-panel1-noedge", R"json({
  "schema_version": 1,
  "name": "fig3-panel1-noedge",
  "description": "As fig3-panel1 with vaccination not affecting behaviour.",
  "nodes": [
    {"name": "H", "prob": 0.4},
    {"name": "A", "parents": ["H"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "B", "parents": ["H"], "prob": {"0": 0.30, "1": 0.50}},
    {"name": "Y", "parents": ["H", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.35, "0,1,0": 0.14, "0,1,1": 0.21,
              "1,0,0": 0.40, "1,0,1": 0.50, "1,1,0": 0.29, "1,1,1": 0.36}},
    {"name": "R", "parents": ["H", "B"], "prob": {"0,0": 0.10, "0,1": 0.25, "1,0": 0.20, "1,1": 0.35}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "probe": "R", "condition": ["H"],
            "behaviour": ["B"]},
  "analyses": ["tau_rw", "alt_outcome", "alt_outcome()", "panel"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"fig3-panel1-yr", R"json({
  "schema_version": 1,
  "name": "fig3-panel1-yr",
  "description": "No vaccine effect on behaviour, but Y protects against R; conditioning on Y opens A -> Y <- B -> R.",
  "nodes": [
    {"name": "H", "prob": 0.4},
    {"name": "A", "parents": ["H"], "prob": {"0": 0.2, "1": 0.8}},
    {"name": "B", "parents": ["H"], "prob": {"0": 0.30, "1": 0.50}},
    {"name": "Y", "parents": ["H", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.45, "0,1,0": 0.05, "0,1,1": 0.15,
              "1,0,0": 0.40, "1,0,1": 0.60, "1,1,0": 0.15, "1,1,1": 0.30}},
    {"name": "R", "parents": ["H", "B", "Y"],
     "prob": {"0,0,0": 0.15, "0,0,1": 0.02, "0,1,0": 0.35, "0,1,1": 0.05,
              "1,0,0": 0.25, "1,0,1": 0.05, "1,1,0": 0.45, "1,1,1": 0.10}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "probe": "R", "condition": ["H"],
            "behaviour": ["B"]},
  "analyses": ["alt_outcome", "alt_outcome(H,Y)", "panel"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"fig3-panel2", R"json({
  "schema_version": 1,
  "name": "fig3-panel2",
  "description": "Behaviour B1 matters for both pathogens; B2 only for the pathogen of interest.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B1", "parents": ["A"], "prob": {"0": 0.30, "1": 0.60}},
    {"name": "B2", "parents": ["A"], "prob": {"0": 0.40, "1": 0.65}},
    {"name": "Y", "parents": ["A", "B1", "B2"],
     "prob": {"0,0,0": 0.20, "0,0,1": 0.28, "0,1,0": 0.28, "0,1,1": 0.36,
              "1,0,0": 0.10, "1,0,1": 0.15, "1,1,0": 0.15, "1,1,1": 0.20}},
    {"name": "R", "parents": ["B1"], "prob": {"0": 0.10, "1": 0.30}}
  ],
  "roles": {"exposure": "A", "outcome": "Y", "probe": "R", "behaviour": ["B1", "B2"]},
  "analyses": ["tau_rw", "alt_outcome", "panel"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"fig3-panel3", R"json({
  "schema_version": 1,
  "name": "fig3-panel3",
  "description": "Behaviour B2 matters only for the alternative pathogen.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B1", "parents": ["A"], "prob": {"0": 0.30, "1": 0.60}},
    {"name": "B2", "parents": ["A"], "prob": {"0": 0.40, "1": 0.65}},
    {"name": "Y", "parents": ["A", "B1"], "prob": {"0,0": 0.20, "0,1": 0.30, "1,0": 0.10, "1,1": 0.16}},
    {"name": "R", "parents": ["B1", "B2"], "prob": {"0,0": 0.08, "0,1": 0.20, "1,0": 0.20, "1,1": 0.32}}
  ],
  "roles": {"exposure": "A", "outcome": "Y", "probe": "R", "behaviour": ["B1", "B2"]},
  "analyses": ["tau_rw", "alt_outcome", "panel"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"figS1", R"json({
  "schema_version": 1,
  "name": "figS1",
  "description": "Two behaviours: mask use BM and social contacts BSC.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "BM", "parents": ["A"], "prob": {"0": 0.60, "1": 0.35}},
    {"name": "BSC", "parents": ["A"], "prob": {"0": 0.30, "1": 0.60}},
    {"name": "Y", "parents": ["A", "BM", "BSC"],
     "prob": {"0,0,0": 0.30, "0,0,1": 0.40, "0,1,0": 0.20, "0,1,1": 0.30,
              "1,0,0": 0.18, "1,0,1": 0.26, "1,1,0": 0.11, "1,1,1": 0.18}}
  ],
  "roles": {"exposure": "A", "outcome": "Y", "mask": "BM", "contacts": "BSC"},
  "analyses": ["tau_rw", "pse"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"figS2-blinded", R"json({
  "schema_version": 1,
  "name": "figS2-blinded",
  "description": "Perceived protection P carries the whole effect of vaccination on behaviour; blinding sets P = -1.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "P", "parents": ["A"], "support": [-1, 0, 1], "noise": [1.0], "table": {"0": [0], "1": [1]}},
    {"name": "B", "parents": ["P"], "prob": {"-1": 0.45, "0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["A", "B"], "prob": {"0,0": 0.25, "0,1": 0.35, "1,0": 0.14, "1,1": 0.21}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "perception": "P"},
  "analyses": ["tau_rw", "nde", "nie", "tau_vt", "assumptions"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"negctrl-pop", R"json({
  "schema_version": 1,
  "name": "negctrl-pop",
  "description": "Units with S = 1 mount no immune response, so vaccination reaches Y only through behaviour.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "S", "prob": 0.3},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["S", "A", "B"],
     "prob": {"0,0,0": 0.25, "0,0,1": 0.35, "0,1,0": 0.14, "0,1,1": 0.21,
              "1,0,0": 0.25, "1,0,1": 0.35, "1,1,0": 0.25, "1,1,1": 0.35}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y", "subgroup": "S"},
  "analyses": ["tau_rw", "nde", "negctrl", "negctrl(B)"],
  "sample_size": 100000,
  "seed": 1
})json"},
        {"interference-demo", R"json({
  "schema_version": 1,
  "name": "interference-demo",
  "description": "Table 1 units in households of sizes 2, 3 and 4; vaccinated housemates lower the outcome risk.",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.30, "1": 0.70}},
    {"name": "Y", "parents": ["A", "B"], "prob": {"0,0": 0.25, "0,1": 0.35, "1,0": 0.14, "1,1": 0.21}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y"},
  "analyses": ["tau_rw", "nde", "interf_total", "interf_total(groups)", "interf_nde", "interf_spillover"],
  "groups": {"sizes": [2, 3, 4], "summary": "fraction", "alpha": 0.5, "y_coef": -0.08},
  "sample_size": 100000,
  "seed": 1
})json"},
    };
    return table;
}

}  // namespace

std::vector<std::string> list_builtin() {
    std::vector<std::string> names;
    for (const auto& [name, _] : sources()) names.push_back(name);
    return names;
}

std::optional<std::string> builtin_source(const std::string& name) {
    auto it = sources().find(name);
    if (it == sources().end()) return std::nullopt;
    return it->second;
}

}  // namespace vaxmed
