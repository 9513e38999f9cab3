#include "vaxmed/interference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vaxmed/errors.hpp"
#include "vaxmed/rng.hpp"

namespace vaxmed {

const char* to_string(SummaryKind kind) { return kind == SummaryKind::Count ? "count" : "fraction"; }

SummaryKind parse_summary_kind(const std::string& text) {
    if (text == "count") return SummaryKind::Count;
    if (text == "fraction") return SummaryKind::Fraction;
    throw InputError("unknown group summary '" + text + "' (expected count or fraction)");
}

const char* to_string(EffectKind kind) {
    switch (kind) {
        case EffectKind::Total: return "total";
        case EffectKind::Nde: return "nde";
        case EffectKind::Spillover: return "spillover";
    }
    return "?";
}

const char* to_string(Weighting weighting) { return weighting == Weighting::Units ? "units" : "groups"; }

namespace {

std::vector<double> achievable_summaries(std::size_t size, SummaryKind kind) {
    std::vector<double> out;
    const std::size_t others = size - 1;
    for (std::size_t k = 0; k <= others; ++k) {
        if (kind == SummaryKind::Count) {
            out.push_back(static_cast<double>(k));
        } else {
            out.push_back(others == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(others));
        }
    }
    return out;
}

GroupedModel::Cells make_cells(std::vector<double> cuts, double resolution) {
    cuts.push_back(0.0);
    cuts.push_back(resolution);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    GroupedModel::Cells cells;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        cells.point.push_back(cuts[k]);
        cells.probability.push_back((cuts[k + 1] - cuts[k]) / resolution);
    }
    return cells;
}

}  // namespace

GroupedModel::GroupedModel(std::vector<std::size_t> group_sizes, UnitTemplate unit, SummaryKind summary)
    : sizes_(std::move(group_sizes)), unit_(unit), summary_(summary) {
    if (sizes_.empty()) throw InputError("grouped model needs at least one group");
    if (unit_.resolution <= 0) throw InputError("grouped model needs a positive threshold resolution");
    if (!unit_.mediator_reads_group && unit_.b_coef != 0.0)
        throw InputError("mediator coefficient is nonzero but mediator_reads_group is off");
    const double res = unit_.resolution;
    for (auto size : sizes_) {
        if (size == 0) throw InputError("group sizes must be at least 1");
        std::vector<double> b_cuts;
        std::vector<double> y_cuts;
        for (double s : achievable_summaries(size, summary_)) {
            for (int a = 0; a < 2; ++a) {
                const double pb = unit_.pr_b[a] + unit_.b_coef * s;
                if (pb < -1e-12 || pb > 1 + 1e-12)
                    throw InputError("mediator probability leaves [0,1] for group size " + std::to_string(size));
                b_cuts.push_back(b_threshold(a, s));
                for (int b = 0; b < 2; ++b) {
                    const double py = unit_.pr_y[a][b] + unit_.y_coef * s;
                    if (py < -1e-12 || py > 1 + 1e-12)
                        throw InputError("outcome probability leaves [0,1] for group size " + std::to_string(size));
                    y_cuts.push_back(y_threshold(a, b, s));
                }
            }
        }
        b_cells_.push_back(make_cells(std::move(b_cuts), res));
        y_cells_.push_back(make_cells(std::move(y_cuts), res));
    }
}

std::size_t GroupedModel::group_size(std::size_t i) const {
    if (i >= sizes_.size()) throw InputError("group index " + std::to_string(i) + " out of range");
    return sizes_[i];
}

double GroupedModel::summary(std::size_t i, const AssignmentVector& others) const {
    const auto size = group_size(i);
    if (others.size() + 1 != size)
        throw InputError("others' assignment has length " + std::to_string(others.size()) + ", expected " +
                         std::to_string(size - 1));
    double count = 0;
    for (int v : others) {
        if (v != 0 && v != 1) throw InputError("assignments must be 0 or 1");
        count += v;
    }
    if (summary_ == SummaryKind::Count) return count;
    return size == 1 ? 0.0 : count / static_cast<double>(size - 1);
}

double GroupedModel::b_threshold(int own, double s) const {
    const double p = std::clamp(unit_.pr_b[own] + unit_.b_coef * s, 0.0, 1.0);
    return std::round(p * unit_.resolution);
}

double GroupedModel::y_threshold(int own, int b, double s) const {
    const double p = std::clamp(unit_.pr_y[own][b] + unit_.y_coef * s, 0.0, 1.0);
    return std::round(p * unit_.resolution);
}

int GroupedModel::mediator(int own, double s, double u_b) const { return u_b < b_threshold(own, s) ? 1 : 0; }

int GroupedModel::outcome(int own, int b, double s, double u_y) const { return u_y < y_threshold(own, b, s) ? 1 : 0; }

namespace {

AssignmentVector others_of(const AssignmentVector& a_i, std::size_t j) {
    AssignmentVector out;
    for (std::size_t k = 0; k < a_i.size(); ++k)
        if (k != j) out.push_back(a_i[k]);
    return out;
}

void check_unit(const GroupedModel& gm, std::size_t i, std::size_t j) {
    if (j >= gm.group_size(i))
        throw InputError("unit index " + std::to_string(j) + " out of range for group " + std::to_string(i));
}

// E over one unit's noise of f(u_b, u_y).
double expect_unit(const GroupedModel& gm, std::size_t i, const std::function<int(double, double)>& f) {
    const auto& bc = gm.mediator_cells(i);
    const auto& yc = gm.outcome_cells(i);
    CompensatedSum sum;
    for (std::size_t kb = 0; kb < bc.point.size(); ++kb) {
        for (std::size_t ky = 0; ky < yc.point.size(); ++ky) {
            const int v = f(bc.point[kb], yc.point[ky]);
            if (v != 0) sum.add(v * bc.probability[kb] * yc.probability[ky]);
        }
    }
    return sum.value();
}

// Unit outcome with own assignment `own` and the mediator at its value
// under own assignment `mediator_own` (the same world when they agree).
int unit_outcome(const GroupedModel& gm, int own, int mediator_own, double s, double u_b, double u_y) {
    const int b = gm.mediator(mediator_own, s, u_b);
    return gm.outcome(own, b, s, u_y);
}

void require_no_group_mediator(const GroupedModel& gm) {
    if (gm.unit().mediator_reads_group)
        throw InputError("individual NDE under interference is undefined when the mediator reads the group "
                         "assignment; the contrast assumes behaviour is not affected by interference");
}

}  // namespace

int group_potential_outcome(const GroupedModel& gm, std::size_t i, std::size_t j, const AssignmentVector& a_i,
                            const GroupNoise& noise) {
    check_unit(gm, i, j);
    if (a_i.size() != gm.group_size(i)) throw InputError("assignment vector length differs from group size");
    if (noise.size() != gm.group_size(i)) throw InputError("group noise length differs from group size");
    const double s = gm.summary(i, others_of(a_i, j));
    const int own = a_i[j];
    if (own != 0 && own != 1) throw InputError("assignments must be 0 or 1");
    return unit_outcome(gm, own, own, s, noise[j].u_b, noise[j].u_y);
}

double individual_total_effect(const GroupedModel& gm, std::size_t i, std::size_t j,
                               const AssignmentVector& a_minus_j) {
    check_unit(gm, i, j);
    const double s = gm.summary(i, a_minus_j);
    return expect_unit(gm, i, [&](double ub, double uy) {
        return unit_outcome(gm, 1, 1, s, ub, uy) - unit_outcome(gm, 0, 0, s, ub, uy);
    });
}

double individual_nde_interf(const GroupedModel& gm, std::size_t i, std::size_t j,
                             const AssignmentVector& a_minus_j) {
    require_no_group_mediator(gm);
    check_unit(gm, i, j);
    const double s = gm.summary(i, a_minus_j);
    return expect_unit(gm, i, [&](double ub, double uy) {
        return unit_outcome(gm, 1, 0, s, ub, uy) - unit_outcome(gm, 0, 0, s, ub, uy);
    });
}

double spillover_effect(const GroupedModel& gm, std::size_t i, std::size_t j, const AssignmentVector& a_minus_j,
                        const AssignmentVector& a_minus_j_star) {
    check_unit(gm, i, j);
    const double s = gm.summary(i, a_minus_j);
    const double s_star = gm.summary(i, a_minus_j_star);
    return expect_unit(gm, i, [&](double ub, double uy) {
        return unit_outcome(gm, 0, 0, s, ub, uy) - unit_outcome(gm, 0, 0, s_star, ub, uy);
    });
}

double average_effects(const GroupedModel& gm, EffectKind kind, Weighting weighting, double alpha, double cap) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("coverage alpha must lie in [0,1]");
    if (kind == EffectKind::Nde) require_no_group_mediator(gm);
    double work = 0.0;
    for (std::size_t i = 0; i < gm.groups(); ++i) {
        const auto n = gm.group_size(i);
        work += static_cast<double>(n) * std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n - 1, 1000)));
    }
    if (work > cap) throw CapacityError("assignment enumeration over the groups exceeds the cap; reduce group sizes");

    CompensatedSum unit_sum;
    CompensatedSum group_sum;
    std::size_t units = 0;
    for (std::size_t i = 0; i < gm.groups(); ++i) {
        const auto n = gm.group_size(i);
        const AssignmentVector none(n - 1, 0);
        CompensatedSum within;
        for (std::size_t j = 0; j < n; ++j) {
            CompensatedSum effect;
            const std::size_t vectors = std::size_t{1} << (n - 1);
            for (std::size_t mask = 0; mask < vectors; ++mask) {
                AssignmentVector others(n - 1);
                double weight = 1.0;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    others[k] = static_cast<int>((mask >> k) & 1U);
                    weight *= others[k] ? alpha : 1.0 - alpha;
                }
                if (weight == 0.0) continue;
                double value = 0.0;
                switch (kind) {
                    case EffectKind::Total: value = individual_total_effect(gm, i, j, others); break;
                    case EffectKind::Nde: value = individual_nde_interf(gm, i, j, others); break;
                    case EffectKind::Spillover: value = spillover_effect(gm, i, j, others, none); break;
                }
                effect.add(weight * value);
            }
            unit_sum.add(effect.value());
            within.add(effect.value());
            ++units;
        }
        group_sum.add(within.value() / static_cast<double>(n));
    }
    if (weighting == Weighting::Units) return unit_sum.value() / static_cast<double>(units);
    return group_sum.value() / static_cast<double>(gm.groups());
}

MonteCarloEstimate monte_carlo_individual(const GroupedModel& gm, EffectKind kind, std::size_t i, std::size_t j,
                                          const AssignmentVector& a_minus_j, const AssignmentVector& a_star,
                                          std::size_t n, std::uint64_t seed) {
    check_unit(gm, i, j);
    if (n < 2) throw InputError("Monte Carlo needs at least two draws");
    if (kind == EffectKind::Nde) require_no_group_mediator(gm);
    const auto size = gm.group_size(i);
    auto with_own = [&](const AssignmentVector& others, int own) {
        AssignmentVector a_i(others);
        a_i.insert(a_i.begin() + static_cast<std::ptrdiff_t>(j), own);
        return a_i;
    };
    if (a_minus_j.size() + 1 != size) throw InputError("others' assignment has the wrong length");
    const auto treated = with_own(a_minus_j, 1);
    const auto control = with_own(a_minus_j, 0);
    AssignmentVector star_control;
    if (kind == EffectKind::Spillover) {
        if (a_star.size() + 1 != size) throw InputError("comparison assignment has the wrong length");
        star_control = with_own(a_star, 0);
    }
    const double s = gm.summary(i, a_minus_j);
    const double res = gm.unit().resolution;

    Rng rng(derive_seed(seed, i * 1'000'003ULL + j));
    GroupNoise noise(size);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (auto& u : noise) {
            u.u_b = rng.uniform() * res;
            u.u_y = rng.uniform() * res;
        }
        double v = 0.0;
        switch (kind) {
            case EffectKind::Total:
                v = group_potential_outcome(gm, i, j, treated, noise) - group_potential_outcome(gm, i, j, control, noise);
                break;
            case EffectKind::Nde:
                v = unit_outcome(gm, 1, 0, s, noise[j].u_b, noise[j].u_y) -
                    group_potential_outcome(gm, i, j, control, noise);
                break;
            case EffectKind::Spillover:
                v = group_potential_outcome(gm, i, j, control, noise) -
                    group_potential_outcome(gm, i, j, star_control, noise);
                break;
        }
        sum += v;
        sum_sq += v * v;
    }
    MonteCarloEstimate out;
    out.draws = n;
    out.mean = sum / static_cast<double>(n);
    const double var = (sum_sq - static_cast<double>(n) * out.mean * out.mean) / static_cast<double>(n - 1);
    out.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    return out;
}

StructuralModel unit_model(const UnitTemplate& unit, const std::string& a, const std::string& b,
                           const std::string& y) {
    return StructuralModel({
        bernoulli_node(a, {}, {0.5}, Coupling::Monotone, unit.resolution),
        bernoulli_node(b, {a}, {unit.pr_b[0], unit.pr_b[1]}, Coupling::Monotone, unit.resolution),
        bernoulli_node(y, {a, b}, {unit.pr_y[0][0], unit.pr_y[0][1], unit.pr_y[1][0], unit.pr_y[1][1]},
                       Coupling::Monotone, unit.resolution),
    });
}

}  // namespace vaxmed
