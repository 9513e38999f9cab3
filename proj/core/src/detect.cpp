#include "vaxmed/detect.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "vaxmed/errors.hpp"

namespace vaxmed {

std::string AssociationResult::verdict() const {
    if (status == AssociationStatus::InsufficientData) return "insufficient-data";
    return association ? "association" : "no-association";
}

namespace {

const std::vector<int>& binary(const Dataset& data, const std::string& name, const char* role) {
    if (!data.observable(name)) throw InputError(std::string(role) + " column '" + name + "' is not observable");
    const auto& col = data.column(name);
    for (int v : col)
        if (v != 0 && v != 1) throw InputError(std::string(role) + " column '" + name + "' must be binary {0,1}");
    return col;
}

struct ArmTally {
    double n[2] = {0, 0};
    double events[2] = {0, 0};
};

}  // namespace

AssociationResult alt_outcome_test(const Dataset& data, const std::string& a, const std::string& r,
                                   const std::vector<std::string>& cond, double z_threshold) {
    if (a == r) throw InputError("exposure and probe outcome must differ");
    for (const auto& c : cond) {
        if (c == a || c == r) throw InputError("conditioning set must not contain the exposure or the probe");
        if (!data.observable(c)) throw InputError("conditioning column '" + c + "' is not observable");
    }
    const auto& ac = binary(data, a, "exposure");
    const auto& rc = binary(data, r, "probe outcome");
    std::vector<const std::vector<int>*> cc;
    for (const auto& c : cond) cc.push_back(&data.column(c));

    std::map<std::vector<int>, ArmTally> strata;
    std::vector<int> key(cond.size());
    for (std::size_t u = 0; u < data.rows(); ++u) {
        for (std::size_t k = 0; k < cc.size(); ++k) key[k] = (*cc[k])[u];
        auto& t = strata[key];
        t.n[ac[u]] += 1;
        t.events[ac[u]] += rc[u];
    }

    AssociationResult out;
    out.z_threshold = z_threshold;
    out.units = data.rows();
    double total = 0.0;
    for (const auto& [k, t] : strata) {
        if (t.n[0] == 0 || t.n[1] == 0) {
            out.excluded_strata.push_back(k);
            continue;
        }
        total += t.n[0] + t.n[1];
    }
    if (total == 0.0) {
        out.status = AssociationStatus::InsufficientData;
        return out;
    }
    double diff = 0.0;
    double var = 0.0;
    for (const auto& [k, t] : strata) {
        if (t.n[0] == 0 || t.n[1] == 0) continue;
        const double w = (t.n[0] + t.n[1]) / total;
        const double p1 = t.events[1] / t.n[1];
        const double p0 = t.events[0] / t.n[0];
        diff += w * (p1 - p0);
        var += w * w * (p1 * (1 - p1) / t.n[1] + p0 * (1 - p0) / t.n[0]);
    }
    out.difference = diff;
    out.se = std::sqrt(var);
    out.association = std::abs(diff) > z_threshold * out.se;
    return out;
}

AssociationResult negative_control_population_test(const Dataset& data, const std::string& a, const std::string& y,
                                                   const std::string& flag, const std::vector<std::string>& cond,
                                                   double z_threshold, std::size_t min_units) {
    const auto& fc = binary(data, flag, "subgroup flag");
    std::vector<std::size_t> rows;
    for (std::size_t u = 0; u < data.rows(); ++u)
        if (fc[u] == 1) rows.push_back(u);
    if (rows.size() < min_units || rows.empty()) {
        AssociationResult out;
        out.status = AssociationStatus::InsufficientData;
        out.z_threshold = z_threshold;
        out.units = rows.size();
        return out;
    }
    return alt_outcome_test(data.subset(rows), a, y, cond, z_threshold);
}

AnalyticContrast analytic_contrast(const StructuralModel& model, const std::string& a, const std::string& r,
                                   const std::vector<std::string>& cond, const std::optional<std::string>& flag,
                                   double cap) {
    const auto ai = model.index_of(a);
    const auto ri = model.index_of(r);
    const std::optional<std::size_t> fi = flag ? std::optional(model.index_of(*flag)) : std::nullopt;
    std::vector<std::size_t> ci;
    for (const auto& c : cond) ci.push_back(model.index_of(c));
    for (auto i : {ai, ri}) {
        if (model.nodes()[i].support != std::vector<int>{0, 1})
            throw InputError("node '" + model.nodes()[i].name + "' must be binary {0,1}");
    }

    struct Mass {
        CompensatedSum n[2];
        CompensatedSum events[2];
    };
    std::map<std::vector<int>, Mass> strata;
    std::vector<int> key(cond.size());
    Values values;
    const std::vector<std::optional<int>> none;
    for_each_noise(
        model,
        [&](const NoiseConfig& cfg) {
            model.evaluate_into(cfg.index, none, values);
            if (fi && values[*fi] != 1) return;
            for (std::size_t k = 0; k < ci.size(); ++k) key[k] = values[ci[k]];
            auto& m = strata[key];
            m.n[values[ai]].add(cfg.probability);
            if (values[ri] == 1) m.events[values[ai]].add(cfg.probability);
        },
        cap);

    AnalyticContrast out;
    double total = 0.0;
    for (const auto& [k, m] : strata) {
        if (m.n[0].value() > 0 && m.n[1].value() > 0) total += m.n[0].value() + m.n[1].value();
    }
    for (const auto& [k, m] : strata) {
        const double n0 = m.n[0].value();
        const double n1 = m.n[1].value();
        if (n0 <= 0 || n1 <= 0) continue;
        StratumContrast s;
        s.stratum = k;
        s.weight = (n0 + n1) / total;
        s.difference = m.events[1].value() / n1 - m.events[0].value() / n0;
        out.pooled += s.weight * s.difference;
        out.strata.push_back(std::move(s));
    }
    return out;
}

const char* to_string(PanelConclusion c) {
    switch (c) {
        case PanelConclusion::BehaviourRelevantToOutcome: return "behaviour-relevant-to-outcome";
        case PanelConclusion::Inconclusive: return "inconclusive";
        case PanelConclusion::NoDirectedPath: return "no-directed-path";
    }
    return "?";
}

PanelInterpretation panel_interpretation(const CausalDag& dag, const std::string& a,
                                         const std::vector<std::string>& b_nodes, const std::string& y,
                                         const std::string& r, const std::vector<std::string>& cond) {
    if (!dag.is_acyclic()) throw InputError("operation requires an acyclic graph");
    const auto source = dag.index_of(a);
    const auto target = dag.index_of(r);
    dag.index_of(y);
    const auto y_ancestors = dag.ancestors(y);
    std::vector<bool> blocked(dag.size(), false);
    for (const auto& c : cond) blocked[dag.index_of(c)] = true;
    std::vector<bool> relevant(dag.size(), false);
    for (const auto& b : b_nodes) {
        const auto bi = dag.index_of(b);
        if (y_ancestors.count(b)) relevant[bi] = true;
    }

    PanelInterpretation out;
    std::vector<std::size_t> path{source};
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == target) {
            std::vector<std::string> names;
            bool through_relevant = false;
            for (auto w : path) {
                names.push_back(dag.nodes()[w]);
                if (relevant[w]) through_relevant = true;
            }
            if (!through_relevant) out.paths_avoiding_relevant_behaviour.push_back(names);
            out.open_paths.push_back(std::move(names));
            return;
        }
        for (auto c : dag.children_of(v)) {
            if (c != target && blocked[c]) continue;
            path.push_back(c);
            walk(c);
            path.pop_back();
        }
    };
    walk(source);

    if (out.open_paths.empty()) {
        out.conclusion = PanelConclusion::NoDirectedPath;
    } else if (out.paths_avoiding_relevant_behaviour.empty()) {
        out.conclusion = PanelConclusion::BehaviourRelevantToOutcome;
    } else {
        out.conclusion = PanelConclusion::Inconclusive;
    }
    return out;
}

std::vector<std::string> invalid_conditioning(const CausalDag& dag, const std::string& a,
                                              const std::vector<std::string>& cond) {
    const auto desc = dag.descendants(a);
    std::vector<std::string> out;
    for (const auto& c : cond)
        if (desc.count(c)) out.push_back(c);
    return out;
}

}  // namespace vaxmed
