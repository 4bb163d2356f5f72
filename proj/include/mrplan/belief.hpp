#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrplan/core.hpp"

namespace mrplan {

// A context counts as feasible while its mass stays above this threshold.
inline constexpr double kSupportEps = 1e-12;

/// Shared probability distribution over contexts. Immutable by convention;
/// updates return a new value.
struct Belief {
    std::vector<std::string> context_ids;
    std::vector<double> probs;

    static Belief from_scenario(const Scenario& s);
    double prob(const std::string& context_id) const;
    std::string argmax() const;
};

struct Observation {
    std::vector<std::string> context_set;
    std::optional<std::string> landmark;  // absent for non-landmark steps
};

struct InconsistentObservationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Joint observation made by `robots_present` robots at a landmark: the
/// unique cell of the effective partition tier that contains the scenario's
/// true context. Below every tier's requirement the observation is
/// uninformative (the full context set).
Observation observe(const Scenario& s, const std::string& landmark_id, int robots_present);

/// Bayes update: posterior proportional to the prior restricted to the
/// observed context set. Uninformative observations leave the belief
/// unchanged.
Belief update_belief(const Belief& b, const Observation& omega);

/// Number of contexts with positive probability, minus one.
int entropy(const Belief& b);

/// Expectation (under b) of the entropy drop from a joint observation by k
/// robots at the landmark. Zero when k is below every tier.
double expected_entropy_reduction(const Belief& b, const LandmarkSpec& lm, int k);

/// The partition of the finest tier whose min_robots <= k, or nullptr.
const Tier* effective_tier(const LandmarkSpec& lm, int k);

}  // namespace mrplan
