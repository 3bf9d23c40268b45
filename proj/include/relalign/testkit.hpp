#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relalign/log.hpp"
#include "relalign/pnid.hpp"

namespace relalign {

enum class IssueKind { mi_e, in_e, mi_o, in_o, mi_p, in_p };

std::string_view to_string(IssueKind k);
IssueKind issue_kind_from_string(std::string_view text);
const std::vector<IssueKind>& all_issue_kinds();

struct IssueSpec {
    IssueKind kind = IssueKind::mi_e;
    // "id:<event>", "activity:<name>", "role:<role>" or a bare event id or activity.
    std::string target;
    // in_o: "object" to replace and "with"; mi_o: "object" to drop.
    std::map<std::string, std::string> params;
};

// Random firings followed by a breadth-first completion to the final marking.
// Throws NoRunFound.
ExecutionPoset generate_run(const ProcessModel& m, std::uint64_t seed, std::size_t max_firings,
                            std::size_t completion_states = 200000);

// Visible firings become events (id = firing id, objects = obj of the mode),
// silent firings are dropped and the run order is kept. Activities listed in
// `recorders` get that recorder tag.
SystemLog run_to_log(const ProcessModel& m, const ExecutionPoset& run,
                     const std::map<std::string, std::string>& recorders = {});

// Events matched by a target selector, in log order. Throws TargetNotFound.
std::vector<std::string> resolve_target(const SystemLog& s, const std::string& target);

// Throws TargetNotFound when the target resolves to nothing the issue kind
// can be applied to.
SystemLog inject(const SystemLog& s, const IssueSpec& spec, std::uint64_t seed);

struct RandomInstanceOptions {
    int max_transitions = 6;
    int max_roles = 3;
    int max_events = 6;
    int max_run = 6;
};

struct RandomInstance {
    ProcessModel model;
    SystemLog log;
    ExecutionPoset run;  // the run the log was derived from, before noise
};

// Small random net whose final marking is reached by a random run, and a
// noisy log of that run.
RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts = {});

}  // namespace relalign
