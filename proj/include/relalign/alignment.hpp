#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relalign/log.hpp"
#include "relalign/pnid.hpp"
#include "relalign/rational.hpp"
#include "relalign/relaxed_model.hpp"

namespace relalign {

enum class MoveKind { sync, log, model, relaxed_sync, relaxed_log, relaxed_model, substitute_sync, correlation_silent };

std::string_view to_string(MoveKind kind);
MoveKind move_kind_from_string(std::string_view text);

bool is_sync_family(MoveKind k);
bool is_log_family(MoveKind k);
bool is_model_family(MoveKind k);  // includes correlation_silent
bool has_event(MoveKind k);
bool has_firing(MoveKind k);

struct Move {
    std::string id;
    MoveKind kind = MoveKind::sync;
    std::optional<Event> event;
    std::optional<TransitionFiring> firing;
    std::set<std::string> substituted_roles;
    Rational cost;
    // Filled by the search: label of the fired transition, its base
    // transition and whether it is silent.
    std::optional<std::string> label;
    std::string base_transition;
    bool silent = false;
};

struct Alignment {
    std::vector<Move> moves;  // emission order
    Poset order;
    Rational total_cost;
    bool relaxed = false;

    const Move& move(const std::string& id) const;
};

enum class CostScheme { standard, relaxed };

struct CostParams {
    Rational epsilon{1, 1024};
    CostScheme scheme = CostScheme::standard;
    // Multipliers on deviating moves; 1 reproduces the unweighted costs.
    Rational log_weight{1};
    Rational model_weight{1};
};

// Among equally cheap alignments with the same number of deviating moves.
enum class TieBreak { none, fewer_log_moves, fewer_model_moves };

struct SearchOptions {
    std::size_t max_states = 5'000'000;
    bool strict_final = false;
    // Canonical "<role>#k" names a fresh variable may mint besides log objects.
    int canonical_fresh = 1;
    TieBreak tie_break = TieBreak::none;
};

// Everything a cost function needs to know about a move.
struct MoveShape {
    MoveKind kind = MoveKind::sync;
    bool silent = false;
    bool correlation = false;
    int var_count = 0;     // |Var(t)| of the base transition; |O(e)| for pure log moves
    int object_count = 0;  // |O| of the move
    int substituted = 0;   // number of swapped objects on a substitute move
};

Rational move_cost_standard(const MoveShape& mv, const CostParams& params);
Rational move_cost_relaxed(const MoveShape& mv, const CostParams& params);
Rational move_cost(const MoveShape& mv, const CostParams& params);

// Activity equals the label and objects coincide; with substituted roles R the
// objects outside R coincide and inside R are disjoint with equal counts per role.
bool potential_match(const Event& e, const std::string& label, const ObjectMultiset& firing_objects,
                     const std::set<std::string>& substituted_roles, const ObjectUniverse& u);
bool potential_match(const Event& e, const std::optional<std::string>& label, const TransitionFiring& f,
                     const std::set<std::string>& substituted_roles, const ObjectUniverse& u);

// Final marking the alignment must reach: m_f in strict mode, otherwise m_f
// restricted to tokens with an active object plus the m_i tokens made only of
// inactive objects. Active objects are log objects and persistent objects.
Marking final_target(const SystemLog& l, const ProcessModel& m, bool strict);

Alignment align(const SystemLog& l, const ProcessModel& m, const CostParams& params = {},
                const SearchOptions& opts = {});
Alignment relaxed_align(const SystemLog& l, const ProcessModel& m, CostParams params = {},
                        const std::set<std::string>& substitutable_roles = {}, const SearchOptions& opts = {});

// Projections of an alignment on its log side and on its firings.
SystemLog alignment_log(const Alignment& al, const SystemLog& l);
ExecutionPoset alignment_run(const Alignment& al);

struct Verification {
    bool ok = true;
    std::vector<std::string> violations;
};

// Independent re-check of an alignment: move shapes and matches, the log
// projection (a relaxed version of l when relaxed), the run projection (an
// execution poset of M or M~), order consistency of matched pairs and the
// total cost.
Verification verify_alignment(const Alignment& al, const SystemLog& l, const ProcessModel& m, bool relaxed,
                              const CostParams& params = {}, const SearchOptions& opts = {});

// Pairs of sync-family moves whose log order and run order disagree.
std::vector<std::pair<std::string, std::string>> order_contradictions(const Alignment& al, const SystemLog& l);

// Independent exhaustive optimum: explores the whole bounded product graph
// and relaxes edges until no cost improves. For tests on small instances.
Alignment brute_force_align(const SystemLog& l, const ProcessModel& m, const CostParams& params, bool relaxed,
                            std::size_t bound, const std::set<std::string>& substitutable_roles = {},
                            const SearchOptions& opts = {});

}  // namespace relalign
