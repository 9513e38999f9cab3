#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vaxmed/scm.hpp"

namespace vaxmed {

// Permutation-invariant statistic of the other group members' assignments.
enum class SummaryKind { Count, Fraction };

const char* to_string(SummaryKind kind);
SummaryKind parse_summary_kind(const std::string& text);

// Per-unit structural equations under partial interference. With latent
// uniforms U_B, U_Y per unit and s the group summary of the others:
//   B = 1 iff U_B < pr_b[a] + b_coef * s   (b_coef needs mediator_reads_group)
//   Y = 1 iff U_Y < pr_y[a][b] + y_coef * s
// Thresholds are rounded to multiples of 1/resolution, as in bernoulli_node.
struct UnitTemplate {
    std::array<double, 2> pr_b{0.0, 0.0};
    std::array<std::array<double, 2>, 2> pr_y{};
    double y_coef = 0.0;
    double b_coef = 0.0;
    bool mediator_reads_group = false;
    int resolution = 1000;
};

// Latent uniforms of one unit, in resolution units: [0, resolution).
struct UnitNoise {
    double u_b = 0.0;
    double u_y = 0.0;
};

using GroupNoise = std::vector<UnitNoise>;
using AssignmentVector = std::vector<int>;

// Population partitioned into groups; units and groups are 0-indexed.
class GroupedModel {
public:
    GroupedModel(std::vector<std::size_t> group_sizes, UnitTemplate unit, SummaryKind summary);

    std::size_t groups() const { return sizes_.size(); }
    std::size_t group_size(std::size_t i) const;
    const UnitTemplate& unit() const { return unit_; }
    SummaryKind summary_kind() const { return summary_; }

    // Summary of the others' assignments (length n_i - 1).
    double summary(std::size_t i, const AssignmentVector& others) const;
    int mediator(int own, double s, double u_b) const;
    int outcome(int own, int b, double s, double u_y) const;

    // Noise cells of one unit in group i: left endpoints and probabilities.
    struct Cells {
        std::vector<double> point;
        std::vector<double> probability;
    };
    const Cells& mediator_cells(std::size_t i) const { return b_cells_[i]; }
    const Cells& outcome_cells(std::size_t i) const { return y_cells_[i]; }

private:
    double b_threshold(int own, double s) const;
    double y_threshold(int own, int b, double s) const;

    std::vector<std::size_t> sizes_;
    UnitTemplate unit_;
    SummaryKind summary_;
    std::vector<Cells> b_cells_;
    std::vector<Cells> y_cells_;
};

// Y_{i,j} under the full assignment vector a_i (length n_i).
int group_potential_outcome(const GroupedModel& gm, std::size_t i, std::size_t j, const AssignmentVector& a_i,
                            const GroupNoise& noise);

// E[Y_{i,j}^{a_{-j}, a_j=1} - Y_{i,j}^{a_{-j}, a_j=0}].
double individual_total_effect(const GroupedModel& gm, std::size_t i, std::size_t j,
                               const AssignmentVector& a_minus_j);

// E[Y_{i,j}^{a_{-j}, a_j=1, B_{i,j}^{a_j=0}} - Y_{i,j}^{a_{-j}, a_j=0}]. Undefined
// (InputError) when the mediator reads the group assignment.
double individual_nde_interf(const GroupedModel& gm, std::size_t i, std::size_t j,
                             const AssignmentVector& a_minus_j);

// E[Y_{i,j}^{a_{-j}, a_j=0} - Y_{i,j}^{a*_{-j}, a_j=0}].
double spillover_effect(const GroupedModel& gm, std::size_t i, std::size_t j, const AssignmentVector& a_minus_j,
                        const AssignmentVector& a_minus_j_star);

enum class EffectKind { Total, Nde, Spillover };
enum class Weighting { Units, Groups };

const char* to_string(EffectKind kind);
const char* to_string(Weighting weighting);

inline constexpr double kDefaultAssignmentCap = 1e7;

// Average of the per-unit effect with others' assignments drawn i.i.d.
// Bernoulli(alpha) and exhaustively enumerated. Spillover contrasts that
// draw against all others unvaccinated. Weighting Units averages over all
// units; Groups averages group means.
double average_effects(const GroupedModel& gm, EffectKind kind, Weighting weighting, double alpha,
                       double cap = kDefaultAssignmentCap);

// Monte Carlo counterpart of the individual effects, drawing the whole
// group's noise per replicate. `a_star` is used only for Spillover.
MonteCarloEstimate monte_carlo_individual(const GroupedModel& gm, EffectKind kind, std::size_t i, std::size_t j,
                                          const AssignmentVector& a_minus_j, const AssignmentVector& a_star,
                                          std::size_t n, std::uint64_t seed);

// The no-interference unit model: A ~ Bernoulli(1/2), B <- A, Y <- (A, B)
// with the template's probabilities (group coefficients ignored).
StructuralModel unit_model(const UnitTemplate& unit, const std::string& a = "A", const std::string& b = "B",
                           const std::string& y = "Y");

}  // namespace vaxmed
