#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relalign/objects.hpp"
#include "relalign/poset.hpp"

namespace relalign {

struct Variable {
    std::string name;
    std::string role;
    bool fresh = false;
};

using VarSeq = std::vector<std::string>;
using Token = std::vector<std::string>;

struct Arc {
    std::string place;
    std::vector<VarSeq> vars;  // multiset of variable sequences, one per consumed/produced token
};

// Set on places and transitions that come from a projection of another net.
struct ProjectionTag {
    std::string base;
    std::set<std::string> kept_roles;
};

struct Place {
    std::string id;
    std::vector<std::string> type;  // role sequence
    std::optional<ProjectionTag> projection;
};

struct Transition {
    std::string id;
    std::optional<std::string> label;  // empty for silent transitions
    std::vector<Arc> inputs;
    std::vector<Arc> outputs;
    std::optional<ProjectionTag> projection;

    bool silent() const { return !label.has_value(); }
};

// Place-wise multiset of object tuples.
class Marking {
public:
    using Bag = std::map<Token, int>;

    void add(const std::string& place, const Token& tok, int count = 1);
    // Throws UnderflowError when fewer than `count` copies are present.
    void remove(const std::string& place, const Token& tok, int count = 1);
    int count(const std::string& place, const Token& tok) const;
    const std::map<std::string, Bag>& places() const { return tokens_; }
    bool empty() const { return tokens_.empty(); }
    std::set<std::string> objects() const;
    bool operator==(const Marking&) const = default;
    bool operator<(const Marking& o) const { return tokens_ < o.tokens_; }
    std::string to_string() const;

private:
    std::map<std::string, Bag> tokens_;
};

using Mode = std::map<std::string, std::string>;

class Tpnid {
public:
    void add_variable(Variable v);
    void add_place(Place p);
    void add_transition(Transition t);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Place>& places() const { return places_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    const Variable& variable(const std::string& name) const;
    const Place& place(const std::string& id) const;
    const Transition& transition(const std::string& id) const;
    bool has_variable(const std::string& name) const { return var_index_.count(name) > 0; }
    bool has_place(const std::string& id) const { return place_index_.count(id) > 0; }
    bool has_transition(const std::string& id) const { return trans_index_.count(id) > 0; }

    // Distinct variable names on the arcs of t (its Var(t)).
    std::vector<std::string> vars_of(const Transition& t) const;
    std::set<std::string> roles_of(const Transition& t) const;

    // Throws ModelError on structural violations (typing, fresh inputs, dangling ids).
    void validate() const;

private:
    std::vector<Variable> variables_;
    std::vector<Place> places_;
    std::vector<Transition> transitions_;
    std::map<std::string, std::size_t> var_index_;
    std::map<std::string, std::size_t> place_index_;
    std::map<std::string, std::size_t> trans_index_;
};

struct ProcessModel {
    Tpnid net;
    Marking initial;
    Marking final;
    ObjectUniverse universe;
};

struct TransitionFiring {
    std::string id;
    std::string transition;
    Mode mode;

    // obj(t_mode): bound object of every variable of the transition.
    ObjectMultiset involved() const;
};

struct ExecutionPoset {
    Poset run;
    std::map<std::string, TransitionFiring> firings;
};

// Modes binding input variables to present tokens; fresh variables get the
// lowest "<role>#k" not present in the marking.
std::vector<Mode> enabled_modes(const ProcessModel& m, const Marking& marking, const std::string& t);

// Checks the token condition of one mode (fresh objects must be absent from the marking).
bool is_enabled(const ProcessModel& m, const Marking& marking, const std::string& t, const Mode& mode);

// Throws NotEnabled.
Marking fire(const ProcessModel& m, const Marking& marking, const TransitionFiring& firing);

// True iff every linear extension of run fires from the initial marking to
// `target` (the model's final marking when absent). Walks each down-set once.
bool is_execution_poset(const ProcessModel& m, const ExecutionPoset& run,
                        const std::optional<Marking>& target = std::nullopt);

// Orders firings that share an object (or involve none) in sequence order
// and closes the result. Firing ids must be unique.
ExecutionPoset execution_poset_from_sequence(const std::vector<TransitionFiring>& seq);

// Assigns ids "t#k" (k-th firing of t) in sequence order.
void number_firings(std::vector<TransitionFiring>& seq);

ProcessModel project_net(const ProcessModel& m, const ObjectMultiset& objs);
ProcessModel project_net_roles(const ProcessModel& m, const std::set<std::string>& roles);

std::string projected_name(const std::string& base, const std::set<std::string>& kept_roles);

}  // namespace relalign
