#pragma once

#include <map>
#include <set>
#include <string>

#include "relalign/pnid.hpp"

namespace relalign {

struct RelaxedModel {
    ProcessModel base;
    // Same markings and universe as base, with the relaxed net.
    ProcessModel model;
    std::set<std::string> correlation_transitions;
    // Projected transition id -> (base transition id, kept roles).
    std::map<std::string, ProjectionTag> projection_index;

    bool is_correlation(const std::string& t) const { return correlation_transitions.count(t) > 0; }
    // Base transition of a relaxed-net transition (itself for base transitions).
    const std::string& base_of(const std::string& t) const;
};

// Adds a projected copy t|R per multi-role transition t and non-empty proper
// role subset R, plus per correlation place p one shadow place p|{r} per type
// position and the silent pair create^p / destroy^p.
RelaxedModel build_relaxed_model(const ProcessModel& m);

std::string shadow_place_name(const Place& p, std::size_t position);
std::string create_transition_name(const std::string& place);
std::string destroy_transition_name(const std::string& place);

// Every firing sequence of m with at most `depth` firings is a firing sequence
// of its relaxed model.
bool language_inclusion_check(const ProcessModel& m, std::size_t depth);

}  // namespace relalign
