#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vaxmed/dataset.hpp"
#include "vaxmed/graph.hpp"
#include "vaxmed/scm.hpp"

namespace vaxmed {

enum class AssociationStatus { Ok, InsufficientData };

// Stratum-pooled risk difference of a probe outcome across exposure arms.
struct AssociationResult {
    AssociationStatus status = AssociationStatus::Ok;
    double difference = 0.0;
    double se = 0.0;
    double z_threshold = 3.0;
    bool association = false;  // |difference| > z_threshold * se
    std::size_t units = 0;
    std::vector<std::vector<int>> excluded_strata;  // missing an exposure arm

    std::string verdict() const;
};

inline constexpr double kDefaultZThreshold = 3.0;
inline constexpr std::size_t kDefaultMinSubgroup = 200;

// E[R|A=1,cond] - E[R|A=0,cond] per stratum, pooled by stratum frequency,
// with a normal-approximation standard error.
AssociationResult alt_outcome_test(const Dataset& data, const std::string& a, const std::string& r,
                                   const std::vector<std::string>& cond, double z_threshold = kDefaultZThreshold);

// A-Y association among units whose binary `flag` column is 1 (e.g. no
// immune response to the vaccine). Fewer than `min_units` flagged units
// gives an InsufficientData result.
AssociationResult negative_control_population_test(const Dataset& data, const std::string& a, const std::string& y,
                                                   const std::string& flag, const std::vector<std::string>& cond,
                                                   double z_threshold = kDefaultZThreshold,
                                                   std::size_t min_units = kDefaultMinSubgroup);

// Exact counterpart of alt_outcome_test on the model's observational law.
struct StratumContrast {
    std::vector<int> stratum;
    double weight = 0.0;  // Pr(cond = stratum), within the flagged subgroup if any
    double difference = 0.0;
};

struct AnalyticContrast {
    double pooled = 0.0;
    std::vector<StratumContrast> strata;  // strata with both exposure arms present
};

// Restricts to units whose binary `flag` node is 1 when given.
AnalyticContrast analytic_contrast(const StructuralModel& model, const std::string& a, const std::string& r,
                                   const std::vector<std::string>& cond,
                                   const std::optional<std::string>& flag = std::nullopt,
                                   double cap = kDefaultEnumerationCap);

enum class PanelConclusion {
    BehaviourRelevantToOutcome,  // every open A -> ... -> R path runs through behaviour that affects Y
    Inconclusive,                // some open path avoids behaviour that affects Y
    NoDirectedPath,              // A has no open causal path to R
};

const char* to_string(PanelConclusion c);

struct PanelInterpretation {
    PanelConclusion conclusion = PanelConclusion::NoDirectedPath;
    std::vector<std::vector<std::string>> open_paths;
    std::vector<std::vector<std::string>> paths_avoiding_relevant_behaviour;
};

// What an A-R association licenses about behaviour relevant for Y, read
// purely from the graph.
PanelInterpretation panel_interpretation(const CausalDag& dag, const std::string& a,
                                         const std::vector<std::string>& b_nodes, const std::string& y,
                                         const std::string& r, const std::vector<std::string>& cond);

// Conditioning nodes that descend from the exposure; conditioning on them
// (e.g. on Y when Y affects R) can open collider paths between A and R.
std::vector<std::string> invalid_conditioning(const CausalDag& dag, const std::string& a,
                                              const std::vector<std::string>& cond);

}  // namespace vaxmed
