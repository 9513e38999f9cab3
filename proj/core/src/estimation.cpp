#include "vaxmed/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vaxmed/errors.hpp"
#include "vaxmed/rng.hpp"

namespace vaxmed {

std::string PositivityFlag::describe(const NodeList& l) const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < l.size() && i < stratum.size(); ++i) os << l[i] << "=" << stratum[i] << ",";
    os << "A=" << a;
    if (b) os << ",B=" << *b;
    os << ") empty; stratum n=" << stratum_units << ", arm n=" << arm_units;
    return os.str();
}

namespace {

// Weighted counts over (stratum, a, b, y) with binary a, b, y. Counts are
// doubles so the same functionals run on sample tallies, bootstrap
// replicates and exact probabilities.
struct CellTable {
    std::vector<std::vector<int>> strata;
    std::vector<double> counts;  // index ((s * 2 + a) * 2 + b) * 2 + y

    static std::size_t cell(std::size_t s, int a, int b, int y) {
        return ((s * 2 + static_cast<std::size_t>(a)) * 2 + static_cast<std::size_t>(b)) * 2 + static_cast<std::size_t>(y);
    }
    double at(std::size_t s, int a, int b, int y) const { return counts[cell(s, a, b, y)]; }
    double arm(std::size_t s, int a) const {
        double t = 0;
        for (int b = 0; b < 2; ++b)
            for (int y = 0; y < 2; ++y) t += at(s, a, b, y);
        return t;
    }
    double mediator_cell(std::size_t s, int a, int b) const { return at(s, a, b, 0) + at(s, a, b, 1); }
    double total() const {
        double t = 0;
        for (double c : counts) t += c;
        return t;
    }
};

const std::vector<int>& binary_column(const Dataset& data, const std::string& name, const char* role) {
    if (!data.observable(name)) throw InputError(std::string(role) + " column '" + name + "' is not observable");
    const auto& col = data.column(name);
    for (int v : col) {
        if (v != 0 && v != 1) throw InputError(std::string(role) + " column '" + name + "' must be binary {0,1}");
    }
    return col;
}

void check_roles(const Dataset& data, const std::vector<std::string>& roles, const NodeList& l) {
    std::vector<std::string> seen;
    for (const auto& r : roles) {
        if (std::find(seen.begin(), seen.end(), r) != seen.end())
            throw InputError("node '" + r + "' is given more than one role");
        seen.push_back(r);
    }
    for (const auto& v : l) {
        if (std::find(seen.begin(), seen.end(), v) != seen.end())
            throw InputError("node '" + v + "' cannot be both a role and in the adjustment set");
        if (!data.observable(v)) throw InputError("adjustment column '" + v + "' is not observable");
        seen.push_back(v);
    }
}

// b may be empty, in which case every unit lands in b = 0.
CellTable tabulate(const Dataset& data, const std::string& a, const std::string& b, const std::string& y,
                   const NodeList& l) {
    const auto& ac = binary_column(data, a, "exposure");
    const auto& yc = binary_column(data, y, "outcome");
    const std::vector<int>* bc = b.empty() ? nullptr : &binary_column(data, b, "mediator");
    std::vector<const std::vector<int>*> lc;
    for (const auto& v : l) lc.push_back(&data.column(v));

    std::map<std::vector<int>, std::vector<double>> by_stratum;
    std::vector<int> key(l.size());
    // Cache the last stratum to avoid a map lookup per unit for small l.
    std::vector<double>* last = nullptr;
    std::vector<int> last_key;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t k = 0; k < lc.size(); ++k) key[k] = (*lc[k])[r];
        if (last == nullptr || key != last_key) {
            auto [it, _] = by_stratum.try_emplace(key, std::vector<double>(8, 0.0));
            last = &it->second;
            last_key = key;
        }
        const int bv = bc ? (*bc)[r] : 0;
        (*last)[(ac[r] * 2 + bv) * 2 + yc[r]] += 1.0;
    }
    CellTable t;
    for (auto& [k, counts] : by_stratum) {
        t.strata.push_back(k);
        t.counts.insert(t.counts.end(), counts.begin(), counts.end());
    }
    return t;
}

struct Functional {
    double value = 0.0;
    std::size_t cells_used = 0;
};

std::optional<Functional> nde_functional(const CellTable& t) {
    const double n = t.total();
    double weighted = 0.0;
    double weight = 0.0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < t.strata.size(); ++s) {
        const double n_control = t.arm(s, 0);
        if (n_control <= 0.0 || t.arm(s, 1) <= 0.0) continue;
        double inner = 0.0;
        double mass = 0.0;
        std::size_t terms = 0;
        for (int b = 0; b < 2; ++b) {
            const double n0 = t.mediator_cell(s, 0, b);
            const double n1 = t.mediator_cell(s, 1, b);
            if (n0 <= 0.0 || n1 <= 0.0) continue;
            const double p_b = n0 / n_control;
            inner += (t.at(s, 1, b, 1) / n1 - t.at(s, 0, b, 1) / n0) * p_b;
            mass += p_b;
            ++terms;
        }
        if (terms == 0) continue;
        const double w = (t.arm(s, 0) + t.arm(s, 1)) / n;
        weighted += w * inner / mass;
        weight += w;
        used += terms;
    }
    if (used == 0) return std::nullopt;
    return Functional{weighted / weight, used};
}

std::optional<Functional> total_functional(const CellTable& t) {
    const double n = t.total();
    double weighted = 0.0;
    double weight = 0.0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < t.strata.size(); ++s) {
        const double n0 = t.arm(s, 0);
        const double n1 = t.arm(s, 1);
        if (n0 <= 0.0 || n1 <= 0.0) continue;
        const double y1 = t.at(s, 1, 0, 1) + t.at(s, 1, 1, 1);
        const double y0 = t.at(s, 0, 0, 1) + t.at(s, 0, 1, 1);
        const double w = (n0 + n1) / n;
        weighted += w * (y1 / n1 - y0 / n0);
        weight += w;
        ++used;
    }
    if (used == 0) return std::nullopt;
    return Functional{weighted / weight, used};
}

std::vector<PositivityFlag> flags_for(const CellTable& t, bool with_mediator) {
    std::vector<PositivityFlag> out;
    for (std::size_t s = 0; s < t.strata.size(); ++s) {
        const auto stratum_units = static_cast<std::size_t>(t.arm(s, 0) + t.arm(s, 1));
        for (int a = 0; a < 2; ++a) {
            const auto arm_units = static_cast<std::size_t>(t.arm(s, a));
            if (arm_units == 0) {
                out.push_back({t.strata[s], a, std::nullopt, stratum_units, 0});
                continue;
            }
            if (!with_mediator) continue;
            for (int b = 0; b < 2; ++b) {
                if (t.mediator_cell(s, a, b) <= 0.0) out.push_back({t.strata[s], a, b, stratum_units, arm_units});
            }
        }
    }
    return out;
}

// Resampling n units with replacement yields multinomial(n, p_hat) cell
// counts, so a replicate is drawn directly on the cell table by sequential
// conditional binomials. Replicate r uses seed derive_seed(seed, r).
template <class F>
double bootstrap_se(const CellTable& t, const F& functional, const BootstrapOptions& boot) {
    if (boot.replicates < 2) return 0.0;
    const auto n = static_cast<std::uint64_t>(std::llround(t.total()));
    CellTable rep = t;
    std::vector<double> values;
    values.reserve(boot.replicates);
    for (std::size_t r = 0; r < boot.replicates; ++r) {
        Rng rng(derive_seed(boot.seed, r));
        std::uint64_t remaining = n;
        double mass = static_cast<double>(n);
        for (std::size_t c = 0; c < t.counts.size(); ++c) {
            if (remaining == 0 || t.counts[c] <= 0.0) {
                rep.counts[c] = 0.0;
                continue;
            }
            const double p = std::min(1.0, t.counts[c] / mass);
            const auto k = rng.binomial(remaining, p);
            rep.counts[c] = static_cast<double>(k);
            remaining -= k;
            mass -= t.counts[c];
        }
        if (auto f = functional(rep)) values.push_back(f->value);
    }
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

CellTable tabulate_model(const StructuralModel& model, const std::string& a, const std::string& b,
                         const std::string& y, const NodeList& l, double cap) {
    const auto ai = model.index_of(a);
    const auto yi = model.index_of(y);
    const std::optional<std::size_t> bi = b.empty() ? std::nullopt : std::optional(model.index_of(b));
    std::vector<std::size_t> li;
    for (const auto& v : l) li.push_back(model.index_of(v));
    for (auto i : {ai, yi}) {
        if (model.nodes()[i].support != std::vector<int>{0, 1})
            throw InputError("node '" + model.nodes()[i].name + "' must be binary {0,1}");
    }
    std::map<std::vector<int>, std::vector<double>> by_stratum;
    std::vector<int> key(l.size());
    Values values;
    const std::vector<std::optional<int>> none;
    for_each_noise(
        model,
        [&](const NoiseConfig& cfg) {
            model.evaluate_into(cfg.index, none, values);
            for (std::size_t k = 0; k < li.size(); ++k) key[k] = values[li[k]];
            auto [it, _] = by_stratum.try_emplace(key, std::vector<double>(8, 0.0));
            const int bv = bi ? values[*bi] : 0;
            it->second[(values[ai] * 2 + bv) * 2 + values[yi]] += cfg.probability;
        },
        cap);
    CellTable t;
    for (auto& [k, counts] : by_stratum) {
        t.strata.push_back(k);
        t.counts.insert(t.counts.end(), counts.begin(), counts.end());
    }
    return t;
}

}  // namespace

PluginEstimate plugin_nde(const Dataset& data, const std::string& a, const std::string& b, const std::string& y,
                          const NodeList& l, const BootstrapOptions& boot) {
    check_roles(data, {a, b, y}, l);
    const auto table = tabulate(data, a, b, y, l);
    const auto point = nde_functional(table);
    if (!point) throw EstimationError("plug-in NDE: every (stratum, exposure, mediator) cell needed is empty");
    PluginEstimate out;
    out.estimate = point->value;
    out.cells_used = point->cells_used;
    out.flags = flags_for(table, true);
    out.replicates = boot.replicates;
    out.se = bootstrap_se(table, nde_functional, boot);
    return out;
}

PluginEstimate plugin_total(const Dataset& data, const std::string& a, const std::string& y, const NodeList& l,
                            const BootstrapOptions& boot) {
    check_roles(data, {a, y}, l);
    const auto table = tabulate(data, a, "", y, l);
    const auto point = total_functional(table);
    if (!point) throw EstimationError("plug-in total effect: no stratum has both exposure arms");
    PluginEstimate out;
    out.estimate = point->value;
    out.cells_used = point->cells_used;
    out.flags = flags_for(table, false);
    out.replicates = boot.replicates;
    out.se = bootstrap_se(table, total_functional, boot);
    return out;
}

Dataset misclassify_mediator(const Dataset& data, const std::string& b, double flip_prob, std::uint64_t seed) {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw InputError("flip probability must lie in [0,1]");
    auto values = binary_column(data, b, "mediator");
    constexpr std::size_t kBlock = 1 << 16;
    for (std::size_t start = 0; start < values.size(); start += kBlock) {
        Rng rng(derive_seed(seed, start / kBlock));
        const std::size_t stop = std::min(values.size(), start + kBlock);
        for (std::size_t r = start; r < stop; ++r) {
            if (rng.bernoulli(flip_prob)) values[r] = 1 - values[r];
        }
    }
    Dataset out = data;
    out.replace_column(b, std::move(values));
    return out;
}

std::vector<PositivityFlag> positivity_report(const Dataset& data, const std::string& a, const std::string& b,
                                              const NodeList& l) {
    check_roles(data, {a, b}, l);
    // Outcome is irrelevant for positivity; tabulate against the exposure.
    const auto& ac = binary_column(data, a, "exposure");
    const auto& bc = binary_column(data, b, "mediator");
    std::vector<const std::vector<int>*> lc;
    for (const auto& v : l) lc.push_back(&data.column(v));
    std::map<std::vector<int>, std::vector<double>> by_stratum;
    std::vector<int> key(l.size());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t k = 0; k < lc.size(); ++k) key[k] = (*lc[k])[r];
        auto [it, _] = by_stratum.try_emplace(key, std::vector<double>(8, 0.0));
        it->second[(ac[r] * 2 + bc[r]) * 2] += 1.0;
    }
    CellTable t;
    for (auto& [k, counts] : by_stratum) {
        t.strata.push_back(k);
        t.counts.insert(t.counts.end(), counts.begin(), counts.end());
    }
    return flags_for(t, true);
}

double plugin_nde_limit(const StructuralModel& model, const std::string& a, const std::string& b,
                        const std::string& y, const NodeList& l, double cap) {
    const auto point = nde_functional(tabulate_model(model, a, b, y, l, cap));
    if (!point) throw EstimationError("plug-in NDE limit: no usable cells in the model's observational law");
    return point->value;
}

double plugin_total_limit(const StructuralModel& model, const std::string& a, const std::string& y,
                          const NodeList& l, double cap) {
    const auto point = total_functional(tabulate_model(model, a, "", y, l, cap));
    if (!point) throw EstimationError("plug-in total limit: no usable cells in the model's observational law");
    return point->value;
}

}  // namespace vaxmed
