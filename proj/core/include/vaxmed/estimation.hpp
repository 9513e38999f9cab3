#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vaxmed/dataset.hpp"
#include "vaxmed/scm.hpp"

namespace vaxmed {

using NodeList = std::vector<std::string>;

// An empty exposure arm (b unset) or an empty exposure-mediator cell within
// one adjustment stratum.
struct PositivityFlag {
    std::vector<int> stratum;  // values of the adjustment set, in order
    int a = 0;
    std::optional<int> b;
    std::size_t stratum_units = 0;
    std::size_t arm_units = 0;  // units with A = a in the stratum

    std::string describe(const NodeList& l) const;
    bool operator==(const PositivityFlag&) const = default;
};

struct PluginEstimate {
    double estimate = 0.0;
    double se = 0.0;  // nonparametric bootstrap
    std::size_t cells_used = 0;
    std::size_t replicates = 0;
    std::vector<PositivityFlag> flags;

    bool reliable() const { return flags.empty(); }
};

struct BootstrapOptions {
    std::size_t replicates = 500;
    std::uint64_t seed = 0;
};

// Mediation-formula plug-in for the natural direct effect:
//   sum_{b,l} (E[Y|A=1,B=b,L=l] - E[Y|A=0,B=b,L=l]) Pr(B=b|A=0,L=l) Pr(L=l).
// Empty cells raise positivity flags; the affected terms are dropped and the
// remaining mediator and stratum weights renormalised (available-case).
// Throws EstimationError when no term is usable.
PluginEstimate plugin_nde(const Dataset& data, const std::string& a, const std::string& b, const std::string& y,
                          const NodeList& l, const BootstrapOptions& boot = {});

// Standardised contrast sum_l (E[Y|A=1,L=l] - E[Y|A=0,L=l]) Pr(L=l).
PluginEstimate plugin_total(const Dataset& data, const std::string& a, const std::string& y, const NodeList& l,
                            const BootstrapOptions& boot = {});

// Copy of the data with b flipped independently per unit with probability
// flip_prob (non-differential misclassification).
Dataset misclassify_mediator(const Dataset& data, const std::string& b, double flip_prob, std::uint64_t seed);

std::vector<PositivityFlag> positivity_report(const Dataset& data, const std::string& a, const std::string& b,
                                              const NodeList& l);

// Probability limits of the two plug-ins: the same functionals evaluated on
// the model's exact observational distribution, obtained by enumeration.
double plugin_nde_limit(const StructuralModel& model, const std::string& a, const std::string& b,
                        const std::string& y, const NodeList& l, double cap = kDefaultEnumerationCap);
double plugin_total_limit(const StructuralModel& model, const std::string& a, const std::string& y,
                          const NodeList& l, double cap = kDefaultEnumerationCap);

}  // namespace vaxmed
