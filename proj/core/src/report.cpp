#include "vaxmed/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "vaxmed/detect.hpp"
#include "vaxmed/errors.hpp"
#include "vaxmed/estimands.hpp"
#include "vaxmed/estimation.hpp"
#include "vaxmed/graph.hpp"
#include "vaxmed/interference.hpp"
#include "vaxmed/rng.hpp"
#include "vaxmed/version.hpp"

namespace vaxmed {

bool Report::has_errors() const {
    return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.error; });
}

namespace {

// Stream identifiers for derive_seed; fixed so reports stay reproducible.
enum Stream : std::uint64_t {
    kSampleStream = 1,
    kBootstrapStream = 2,
    kMisclassStream = 3,
    kMonteCarloStream = 100,
};

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
    return out;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string describe_violations(const CausalDag& dag, const AssumptionReport& rep) {
    std::vector<std::string> parts;
    for (int k = 1; k <= 4; ++k) {
        const auto& e = rep[k];
        if (e.verdict != Verdict::Violated) continue;
        std::string w = k == 4 ? join(e.witness, ",") : format_path(dag, e.witness);
        parts.push_back("A" + std::to_string(k) + " violated (" + w + ")");
    }
    return parts.empty() ? "" : "non-identified: " + join(parts, "; ");
}

class Runner {
public:
    Runner(const Scenario& sc, const RunOptions& opt)
        : sc_(sc), model_(sc.model()), seed_(opt.seed.value_or(sc.seed)), n_(opt.sample_size.value_or(sc.sample_size)) {}

    Report run(bool keep_data) {
        Report report;
        report.scenario = sc_.name;
        report.version = kVersion;
        report.seed = seed_;
        report.sample_size = n_;
        for (std::size_t k = 0; k < sc_.analyses.size(); ++k) {
            const auto& text = sc_.analyses[k];
            std::vector<ReportRow> rows;
            try {
                rows = analyse(text, k);
            } catch (const std::exception& e) {
                ReportRow r;
                r.analysis = text;
                r.flags = std::string("error: ") + e.what();
                r.scale = RowScale::None;
                r.error = true;
                rows = {r};
            }
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
        if (keep_data) report.data = data();
        return report;
    }

private:
    const Dataset& data() {
        if (!data_) data_ = sample_units(model_, n_, derive_seed(seed_, kSampleStream));
        return *data_;
    }

    std::uint64_t stream_seed(std::size_t analysis, std::uint64_t stream) const {
        return derive_seed(derive_seed(seed_, stream), analysis);
    }

    NodeList args_or(const AnalysisRequest& req, const NodeList& fallback) const {
        return req.args ? *req.args : fallback;
    }

    // Monte Carlo check of an analytic contrast, independent draws per arm.
    std::pair<MonteCarloEstimate, MonteCarloEstimate> monte_carlo(const std::string& treated,
                                                                 const std::string& control, std::size_t k) const {
        const auto s = stream_seed(k, kMonteCarloStream);
        return {monte_carlo_expectation(model_, parse_query(treated), n_, derive_seed(s, 1)),
                monte_carlo_expectation(model_, parse_query(control), n_, derive_seed(s, 0))};
    }

    std::vector<ReportRow> estimand_rows(const std::string& name, const EstimandValue& v, const std::string& treated,
                                         const std::string& control, std::size_t k, const std::string& flags = "") {
        const auto [mc1, mc0] = monte_carlo(treated, control, k);
        std::vector<ReportRow> rows;
        ReportRow main{name, v.difference, mc1.mean - mc0.mean, std::hypot(mc1.se, mc0.se), flags};
        rows.push_back(main);
        rows.push_back({name + ".risk_treated", v.risk_treated, mc1.mean, mc1.se, treated});
        rows.push_back({name + ".risk_control", v.risk_control, mc0.mean, mc0.se, control});
        ReportRow ve{name + ".ve", v.ve, std::nullopt, std::nullopt, v.ve ? "" : "control risk is zero"};
        ve.scale = RowScale::Percent;
        rows.push_back(ve);
        return rows;
    }

    std::vector<ReportRow> analyse(const std::string& text, std::size_t k) {
        const auto req = parse_analysis(text);
        const auto& r = sc_.roles;
        const std::string& a = r.exposure;
        const std::string& b = r.mediator;
        const std::string& y = r.outcome;
        const std::string y_a1 = y + "[" + a + "=1]";
        const std::string y_a0 = y + "[" + a + "=0]";
        const std::string y_cross = y + "[" + a + "=1," + b + "=" + b + "[" + a + "=0]]";

        if (req.kind == "tau_rw") return estimand_rows(text, total_effect(model_, a, y), y_a1, y_a0, k);
        if (req.kind == "nde") {
            const auto flags = describe_violations(model_.dag(), check_nde_assumptions(model_.dag(), a, b, y, NodeSet(r.adjust.begin(), r.adjust.end())));
            return estimand_rows(text, natural_direct_effect(model_, a, b, y), y_cross, y_a0, k, flags);
        }
        if (req.kind == "nie") return estimand_rows(text, natural_indirect_effect(model_, a, b, y), y_a1, y_cross, k);
        if (req.kind == "cde") {
            const int level = std::stoi(req.args->front());
            const auto lv = std::to_string(level);
            return estimand_rows(text, controlled_direct_effect(model_, a, b, y, level),
                                 y + "[" + a + "=1," + b + "=" + lv + "]", y + "[" + a + "=0," + b + "=" + lv + "]", k);
        }
        if (req.kind == "tau_vt") {
            const auto& p = r.perception;
            return estimand_rows(text, trial_estimand(model_, a, p, y), y + "[" + a + "=1," + p + "=-1]",
                                 y + "[" + a + "=0," + p + "=-1]", k);
        }
        if (req.kind == "pse") return pse_rows(text);
        if (req.kind == "assumptions") return assumption_rows(text);
        if (req.kind == "plugin_nde" || req.kind == "plugin_total") return plugin_rows(text, req, k);
        if (req.kind == "misclassified_nde") return misclassified_rows(text, req, k);
        if (req.kind == "positivity") {
            const auto l = args_or(req, r.adjust);
            const auto flags = positivity_report(data(), a, b, l);
            std::vector<std::string> parts;
            for (const auto& f : flags) parts.push_back(f.describe(l));
            ReportRow row{text, std::nullopt, static_cast<double>(flags.size()), std::nullopt,
                          flags.empty() ? "ok" : join(parts, "; ")};
            row.scale = RowScale::Count;
            return {row};
        }
        if (req.kind == "alt_outcome") {
            const auto cond = args_or(req, r.condition);
            const auto contrast = analytic_contrast(model_, a, r.probe, cond);
            const auto test = alt_outcome_test(data(), a, r.probe, cond, sc_.z_threshold);
            std::string flags = test.verdict();
            const auto bad = invalid_conditioning(model_.dag(), a, cond);
            if (!bad.empty()) flags += "; invalid conditioning on exposure descendants: " + join(bad, ",");
            if (!test.excluded_strata.empty())
                flags += "; " + std::to_string(test.excluded_strata.size()) + " strata missing an exposure arm";
            return {{text, contrast.pooled, test.difference, test.se, flags}};
        }
        if (req.kind == "panel") {
            const auto p = panel_interpretation(model_.dag(), a, r.behaviour, y, r.probe, r.condition);
            std::string flags = to_string(p.conclusion);
            for (const auto& path : p.paths_avoiding_relevant_behaviour)
                flags += "; path avoiding outcome-relevant behaviour: " + format_path(model_.dag(), path);
            const auto bad = invalid_conditioning(model_.dag(), a, r.condition);
            if (!bad.empty()) flags += "; invalid conditioning on exposure descendants: " + join(bad, ",");
            ReportRow row{text, std::nullopt, std::nullopt, std::nullopt, flags};
            row.scale = RowScale::None;
            return {row};
        }
        if (req.kind == "negctrl") {
            const auto cond = args_or(req, r.adjust);
            const auto contrast = analytic_contrast(model_, a, y, cond, r.subgroup);
            const auto test =
                negative_control_population_test(data(), a, y, r.subgroup, cond, sc_.z_threshold, sc_.min_subgroup);
            std::string flags = test.verdict();
            if (test.status == AssociationStatus::Ok && test.association)
                flags += ": unmeasured confounding or vaccine effects through other paths";
            if (test.status == AssociationStatus::InsufficientData)
                return {{text, contrast.pooled, std::nullopt, std::nullopt,
                         flags + " (" + std::to_string(test.units) + " flagged units)"}};
            return {{text, contrast.pooled, test.difference, test.se, flags}};
        }
        if (req.kind == "interf_total" || req.kind == "interf_nde" || req.kind == "interf_spillover") {
            const auto gm = sc_.grouped_model();
            const auto kind = req.kind == "interf_total" ? EffectKind::Total
                              : req.kind == "interf_nde" ? EffectKind::Nde
                                                         : EffectKind::Spillover;
            const auto weighting = req.args && req.args->front() == "groups" ? Weighting::Groups : Weighting::Units;
            const double value = average_effects(gm, kind, weighting, sc_.groups->alpha);
            std::string flags = std::string("weighting=") + to_string(weighting) + "; alpha=" + number(sc_.groups->alpha);
            if (kind == EffectKind::Spillover) flags += "; versus all others unvaccinated";
            return {{text, value, std::nullopt, std::nullopt, flags}};
        }
        throw InputError("unknown analysis '" + req.kind + "'");
    }

    std::vector<ReportRow> pse_rows(const std::string& text) {
        const auto& r = sc_.roles;
        const auto p = path_specific_effects(model_, r.exposure, r.mask, r.contacts, r.outcome);
        std::vector<ReportRow> rows;
        rows.push_back({text, p.total.difference, std::nullopt, std::nullopt,
                        "decomposition residual " + number(p.residual)});
        for (const auto* v : {&p.mask_blocked, &p.contacts_blocked, &p.via_mask, &p.via_contacts, &p.direct}) {
            rows.push_back({text + "." + v->name, v->difference, std::nullopt, std::nullopt, ""});
        }
        ReportRow res{text + ".residual", p.residual, std::nullopt, std::nullopt, "total minus three-term sum"};
        rows.push_back(res);
        return rows;
    }

    std::vector<ReportRow> assumption_rows(const std::string& text) {
        const auto& r = sc_.roles;
        const auto& dag = model_.dag();
        const auto rep = check_nde_assumptions(dag, r.exposure, r.mediator, r.outcome, NodeSet(r.adjust.begin(), r.adjust.end()));
        std::vector<ReportRow> rows;
        ReportRow main{text, std::nullopt, std::nullopt, std::nullopt,
                       rep.summary() + (r.adjust.empty() ? "" : " given {" + join(r.adjust, ",") + "}")};
        main.scale = RowScale::None;
        rows.push_back(main);
        for (int k = 1; k <= 4; ++k) {
            const auto& e = rep[k];
            std::string flags = to_string(e.verdict);
            if (!e.witness.empty())
                flags += " (" + (k == 4 ? join(e.witness, ",") : format_path(dag, e.witness)) + ")";
            ReportRow row{text + ".A" + std::to_string(k), std::nullopt, std::nullopt, std::nullopt, flags};
            row.scale = RowScale::None;
            rows.push_back(row);
        }
        return rows;
    }

    std::vector<ReportRow> plugin_rows(const std::string& text, const AnalysisRequest& req, std::size_t k) {
        const auto& r = sc_.roles;
        const auto l = args_or(req, r.adjust);
        const BootstrapOptions boot{sc_.bootstrap, stream_seed(k, kBootstrapStream)};
        const bool nde = req.kind == "plugin_nde";
        const double oracle = nde ? natural_direct_effect(model_, r.exposure, r.mediator, r.outcome).difference
                                  : total_effect(model_, r.exposure, r.outcome).difference;
        const double limit = nde ? plugin_nde_limit(model_, r.exposure, r.mediator, r.outcome, l)
                                 : plugin_total_limit(model_, r.exposure, r.outcome, l);
        const auto est = nde ? plugin_nde(data(), r.exposure, r.mediator, r.outcome, l, boot)
                             : plugin_total(data(), r.exposure, r.outcome, l, boot);
        std::vector<std::string> flags{"L={" + join(l, ",") + "}"};
        if (std::abs(limit - oracle) > 1e-9)
            flags.push_back("inconsistent: probability limit " + number(limit) + " vs target " + number(oracle));
        for (const auto& f : est.flags) flags.push_back("positivity: " + f.describe(l));
        return {{text, oracle, est.estimate, est.se, join(flags, "; ")}};
    }

    std::vector<ReportRow> misclassified_rows(const std::string& text, const AnalysisRequest& req, std::size_t k) {
        const auto& r = sc_.roles;
        const double flip = std::stod(req.args->front());
        std::string observed = r.mediator + "_observed";
        while (model_.dag().has_node(observed)) observed += "_";
        const auto corrupted = with_misclassified_copy(model_, r.mediator, observed, flip);
        const double limit = plugin_nde_limit(corrupted, r.exposure, observed, r.outcome, r.adjust);
        const double truth = natural_direct_effect(model_, r.exposure, r.mediator, r.outcome).difference;
        auto noisy = misclassify_mediator(data(), r.mediator, flip, stream_seed(k, kMisclassStream));
        const BootstrapOptions boot{sc_.bootstrap, stream_seed(k, kBootstrapStream)};
        const auto est = plugin_nde(noisy, r.exposure, r.mediator, r.outcome, r.adjust, boot);
        return {{text, limit, est.estimate, est.se, "flip=" + number(flip) + "; true nde " + number(truth)}};
    }

    const Scenario& sc_;
    StructuralModel model_;
    std::uint64_t seed_;
    std::size_t n_;
    std::optional<Dataset> data_;
};

std::string table_value(const std::optional<double>& v, RowScale scale) {
    if (!v) return "";
    switch (scale) {
        case RowScale::Probability: return display_probability(*v);
        case RowScale::Percent: return display_ve(v);
        case RowScale::Count: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.0f", *v);
            return buf;
        }
        case RowScale::None: return number(*v);
    }
    return "";
}

std::string table_se(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

std::string csv_value(const std::optional<double>& v) {
    if (!v) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_header(std::ostream& os, const Report& report) {
    os << "# scenario: " << report.scenario << "\n";
    os << "# version: " << report.version << "\n";
    os << "# seed: " << report.seed << "\n";
    os << "# n: " << report.sample_size << "\n";
}

}  // namespace

Report run(const Scenario& scenario, const RunOptions& options) {
    Runner runner(scenario, options);
    return runner.run(options.keep_data);
}

void write_table(std::ostream& os, const Report& report) {
    write_header(os, report);
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"analysis", "analytic", "estimate", "se", "flags"});
    for (const auto& r : report.rows)
        cells.push_back({r.analysis, table_value(r.analytic, r.scale), table_value(r.estimate, r.scale), table_se(r.se),
                         r.flags});
    std::array<std::size_t, 4> width{};
    for (const auto& row : cells)
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < 4; ++c) {
            std::string cell = row[c];
            const std::size_t pad = width[c] - cell.size();
            line += c == 0 ? cell + std::string(pad, ' ') : std::string(pad, ' ') + cell;
            line += "  ";
        }
        line += row[4];
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
}

void write_csv(std::ostream& os, const Report& report) {
    write_header(os, report);
    os << "analysis,analytic,estimate,se,flags\n";
    for (const auto& r : report.rows) {
        os << csv_quote(r.analysis) << ',' << csv_value(r.analytic) << ',' << csv_value(r.estimate) << ','
           << csv_value(r.se) << ',' << csv_quote(r.flags) << "\n";
    }
}

}  // namespace vaxmed
