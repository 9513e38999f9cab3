#pragma once

#include <optional>
#include <string>

#include "vaxmed/scm.hpp"

namespace vaxmed {

// A contrast of two expected potential outcomes on the risk-difference
// scale, with vaccine effectiveness 1 - treated/control as a derived field.
struct EstimandValue {
    std::string name;
    double risk_treated = 0.0;
    double risk_control = 0.0;
    double difference = 0.0;
    std::optional<double> ve;  // empty when risk_control == 0
};

EstimandValue make_estimand(std::string name, double risk_treated, double risk_control);

// Display helpers: probabilities to two decimals, VE as a percentage to one.
std::string display_probability(double p);
std::string display_ve(const std::optional<double>& ve);

// tau_rw = E[Y^{a=1}] - E[Y^{a=0}].
EstimandValue total_effect(const StructuralModel& model, const std::string& a, const std::string& y,
                           double cap = kDefaultEnumerationCap);

// nde = E[Y^{a=1, B^{a=0}}] - E[Y^{a=0}].
EstimandValue natural_direct_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                    const std::string& y, double cap = kDefaultEnumerationCap);

// nie = E[Y^{a=1, B^{a=1}}] - E[Y^{a=1, B^{a=0}}], so nde + nie = tau_rw.
EstimandValue natural_indirect_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                      const std::string& y, double cap = kDefaultEnumerationCap);

// cde(b) = E[Y^{a=1, b}] - E[Y^{a=0, b}].
EstimandValue controlled_direct_effect(const StructuralModel& model, const std::string& a, const std::string& b,
                                       const std::string& y, int b_level, double cap = kDefaultEnumerationCap);

// Blinded-trial contrast E[Y^{a=1, p=-1}] - E[Y^{a=0, p=-1}] for a
// perception node p with support {-1, 0, 1} that carries all of a's effect
// on behaviour.
EstimandValue trial_estimand(const StructuralModel& model, const std::string& a, const std::string& p,
                             const std::string& y, double cap = kDefaultEnumerationCap);

// Effects for two behaviour mediators (mask use and social contacts). The
// three decomposition terms telescope to the total effect; `residual` is
// total.difference minus their sum, computed from independent queries.
struct PathSpecificEffects {
    EstimandValue mask_blocked;      // Y(1, SC^1, M^0) - Y(0, SC^0, M^0)
    EstimandValue contacts_blocked;  // Y(1, SC^0, M^1) - Y(0, SC^0, M^0)
    EstimandValue via_mask;          // Y(1, SC^1, M^1) - Y(1, SC^1, M^0)
    EstimandValue via_contacts;      // Y(0, SC^1, M^0) - Y(0, SC^0, M^0)
    EstimandValue direct;            // Y(1, SC^1, M^0) - Y(0, SC^1, M^0)
    EstimandValue total;
    double residual = 0.0;
};

PathSpecificEffects path_specific_effects(const StructuralModel& model, const std::string& a,
                                          const std::string& b_mask, const std::string& b_contacts,
                                          const std::string& y, double cap = kDefaultEnumerationCap);

}  // namespace vaxmed
