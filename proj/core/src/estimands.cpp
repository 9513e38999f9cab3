#include "vaxmed/estimands.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "vaxmed/errors.hpp"

namespace vaxmed {

EstimandValue make_estimand(std::string name, double risk_treated, double risk_control) {
    EstimandValue v;
    v.name = std::move(name);
    v.risk_treated = risk_treated;
    v.risk_control = risk_control;
    v.difference = risk_treated - risk_control;
    if (risk_control > 0.0) v.ve = 1.0 - risk_treated / risk_control;
    return v;
}

std::string display_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", p);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string display_ve(const std::optional<double>& ve) {
    if (!ve) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", *ve * 100.0);
    std::string s(buf);
    if (s == "-0.0%") s = "0.0%";
    return s;
}

namespace {

void require_binary(const StructuralModel& model, const std::string& node, const char* role) {
    const auto& s = model.node(node).support;
    if (std::set<int>(s.begin(), s.end()) != std::set<int>{0, 1})
        throw InputError(std::string(role) + " '" + node + "' must be binary {0,1}");
}

void require_distinct(std::initializer_list<std::string> names) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) throw InputError("node '" + n + "' is given more than one role");
    }
}

CounterfactualQuery set(const std::string& target, std::vector<QueryAssignment> assignments) {
    return CounterfactualQuery{target, std::move(assignments)};
}

double expect(const StructuralModel& model, const CounterfactualQuery& q, double cap) {
    return analytic_expectation(model, q, cap);
}

}  // namespace

EstimandValue total_effect(const StructuralModel& model, const std::string& a, const std::string& y, double cap) {
    require_distinct({a, y});
    require_binary(model, a, "exposure");
    require_binary(model, y, "outcome");
    const double treated = expect(model, set(y, {{a, 1}}), cap);
    const double control = expect(model, set(y, {{a, 0}}), cap);
    return make_estimand("tau_rw", treated, control);
}

EstimandValue natural_direct_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                    const std::string& y, double cap) {
    require_distinct({a, b, y});
    require_binary(model, a, "exposure");
    require_binary(model, y, "outcome");
    model.index_of(b);
    const double treated = expect(model, set(y, {{a, 1}, {b, set(b, {{a, 0}})}}), cap);
    const double control = expect(model, set(y, {{a, 0}}), cap);
    return make_estimand("nde", treated, control);
}

EstimandValue natural_indirect_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                      const std::string& y, double cap) {
    require_distinct({a, b, y});
    require_binary(model, a, "exposure");
    require_binary(model, y, "outcome");
    model.index_of(b);
    const double treated = expect(model, set(y, {{a, 1}, {b, set(b, {{a, 1}})}}), cap);
    const double control = expect(model, set(y, {{a, 1}, {b, set(b, {{a, 0}})}}), cap);
    return make_estimand("nie", treated, control);
}

EstimandValue controlled_direct_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                       const std::string& y, int b_level, double cap) {
    require_distinct({a, b, y});
    require_binary(model, a, "exposure");
    require_binary(model, y, "outcome");
    if (!model.in_support(model.index_of(b), b_level))
        throw InputError("mediator level " + std::to_string(b_level) + " is outside the support of '" + b + "'");
    const double treated = expect(model, set(y, {{a, 1}, {b, b_level}}), cap);
    const double control = expect(model, set(y, {{a, 0}, {b, b_level}}), cap);
    return make_estimand("cde(" + std::to_string(b_level) + ")", treated, control);
}

EstimandValue trial_estimand(const StructuralModel& model, const std::string& a, const std::string& p,
                             const std::string& y, double cap) {
    require_distinct({a, p, y});
    require_binary(model, a, "exposure");
    require_binary(model, y, "outcome");
    if (!model.dag().has_node(p)) throw InputError("trial estimand needs a perception node '" + p + "'");
    const auto& s = model.node(p).support;
    if (std::set<int>(s.begin(), s.end()) != std::set<int>{-1, 0, 1})
        throw InputError("perception node '" + p + "' must have support {-1,0,1}");
    if (!model.dag().has_edge(a, p)) throw InputError("perception node '" + p + "' must be a child of '" + a + "'");
    for (const auto& reader : model.dag().children(p)) {
        if (reader != y && model.dag().has_edge(a, reader))
            throw InputError("'" + reader + "' reads both '" + p + "' and '" + a +
                             "'; the exposure must act on behaviour only through perception");
    }
    const double treated = expect(model, set(y, {{a, 1}, {p, -1}}), cap);
    const double control = expect(model, set(y, {{a, 0}, {p, -1}}), cap);
    return make_estimand("tau_vt", treated, control);
}

PathSpecificEffects path_specific_effects(const StructuralModel& model, const std::string& a,
                                          const std::string& b_mask, const std::string& b_contacts,
                                          const std::string& y, double cap) {
    require_distinct({a, b_mask, b_contacts, y});
    const auto& g = model.dag();
    for (const auto& [from, to] : std::initializer_list<std::pair<std::string, std::string>>{
             {a, b_mask}, {a, b_contacts}, {b_mask, y}, {b_contacts, y}, {a, y}}) {
        if (!g.has_edge(from, to)) throw InputError("path-specific roles need edge " + from + "->" + to);
    }
    if (g.has_edge(b_mask, b_contacts) || g.has_edge(b_contacts, b_mask))
        throw InputError("path-specific roles forbid an edge between '" + b_mask + "' and '" + b_contacts + "'");

    // E[Y^{a, B_SC^{sc}, B_M^{m}}]
    auto world = [&](int a_level, int sc_level, int m_level) {
        return expect(model,
                      set(y, {{a, a_level},
                              {b_contacts, set(b_contacts, {{a, sc_level}})},
                              {b_mask, set(b_mask, {{a, m_level}})}}),
                      cap);
    };
    const double y1_sc1_m1 = world(1, 1, 1);
    const double y1_sc1_m0 = world(1, 1, 0);
    const double y1_sc0_m1 = world(1, 0, 1);
    const double y0_sc1_m0 = world(0, 1, 0);
    const double y0_sc0_m0 = world(0, 0, 0);

    PathSpecificEffects out;
    out.mask_blocked = make_estimand("pse_mask_blocked", y1_sc1_m0, y0_sc0_m0);
    out.contacts_blocked = make_estimand("pse_contacts_blocked", y1_sc0_m1, y0_sc0_m0);
    out.via_mask = make_estimand("pse_via_mask", y1_sc1_m1, y1_sc1_m0);
    out.via_contacts = make_estimand("pse_via_contacts", y0_sc1_m0, y0_sc0_m0);
    out.direct = make_estimand("pse_direct", y1_sc1_m0, y0_sc1_m0);
    out.total = total_effect(model, a, y, cap);
    out.residual =
        out.total.difference - (out.via_mask.difference + out.via_contacts.difference + out.direct.difference);
    return out;
}

}  // namespace vaxmed
