#include "mrplan/belief.hpp"

#include <algorithm>

namespace mrplan {

Belief Belief::from_scenario(const Scenario& s) {
    Belief b;
    for (const auto& c : s.contexts) {
        b.context_ids.push_back(c.id);
        auto it = s.initial_belief.find(c.id);
        b.probs.push_back(it == s.initial_belief.end() ? 0.0 : it->second);
    }
    return b;
}

double Belief::prob(const std::string& context_id) const {
    for (size_t i = 0; i < context_ids.size(); ++i)
        if (context_ids[i] == context_id) return probs[i];
    return 0.0;
}

std::string Belief::argmax() const {
    size_t best = 0;
    for (size_t i = 1; i < probs.size(); ++i)
        if (probs[i] > probs[best]) best = i;
    return context_ids[best];
}

const Tier* effective_tier(const LandmarkSpec& lm, int k) {
    const Tier* best = nullptr;
    for (const auto& t : lm.tiers)
        if (t.min_robots <= k) best = &t;  // tiers sorted ascending; keep finest
    return best;
}

Observation observe(const Scenario& s, const std::string& landmark_id, int robots_present) {
    const LandmarkSpec* lm = s.find_landmark(landmark_id);
    if (!lm) throw ModelError("observe: unknown landmark '" + landmark_id + "'");
    const Tier* tier = effective_tier(*lm, robots_present);
    if (!tier) return Observation{s.context_ids(), landmark_id};
    for (const auto& cell : tier->partition) {
        if (std::find(cell.begin(), cell.end(), s.true_context) != cell.end())
            return Observation{cell, landmark_id};
    }
    throw ModelError("observe: landmark '" + landmark_id + "' partition does not cover true context");
}

Belief update_belief(const Belief& b, const Observation& omega) {
    Belief out = b;
    double mass = 0.0;
    for (size_t i = 0; i < b.context_ids.size(); ++i) {
        bool in_omega = std::find(omega.context_set.begin(), omega.context_set.end(),
                                  b.context_ids[i]) != omega.context_set.end();
        if (!in_omega) out.probs[i] = 0.0;
        mass += out.probs[i];
    }
    if (mass <= 0.0)
        throw InconsistentObservationError(
            "update_belief: observation excludes the entire belief support");
    // Uninformative: every supported context survived; return b bitwise unchanged.
    bool same_support = true;
    for (size_t i = 0; i < b.probs.size(); ++i)
        if (b.probs[i] > 0.0 && out.probs[i] == 0.0) same_support = false;
    if (same_support) return b;
    for (double& p : out.probs) p /= mass;
    return out;
}

int entropy(const Belief& b) {
    int n = 0;
    for (double p : b.probs)
        if (p > kSupportEps) ++n;
    return n - 1;
}

double expected_entropy_reduction(const Belief& b, const LandmarkSpec& lm, int k) {
    const Tier* tier = effective_tier(lm, k);
    if (!tier) return 0.0;
    int h = entropy(b);
    if (h <= 0) return 0.0;
    double expected = 0.0;
    for (size_t i = 0; i < b.context_ids.size(); ++i) {
        if (b.probs[i] <= kSupportEps) continue;
        for (const auto& cell : tier->partition) {
            if (std::find(cell.begin(), cell.end(), b.context_ids[i]) == cell.end()) continue;
            Belief posterior = update_belief(b, Observation{cell, lm.id});
            expected += b.probs[i] * (h - entropy(posterior));
            break;
        }
    }
    return expected;
}

}  // namespace mrplan
