#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relalign/objects.hpp"
#include "relalign/poset.hpp"

namespace relalign {

struct Event {
    std::string id;
    std::string activity;
    ObjectMultiset objects;
    std::optional<double> timestamp;
    std::optional<std::string> recorder;
    // Set on relaxation fragments: the id of the recorded event and its full object multiset.
    std::optional<std::string> parent;
    std::optional<ObjectMultiset> projection_of;

    const std::string& root() const { return parent ? *parent : id; }
};

class SystemLog {
public:
    SystemLog() = default;
    // Throws Error for duplicate ids, empty object sets or objects without a
    // role; CycleError for an inconsistent order.
    SystemLog(ObjectUniverse universe, std::vector<Event> events, const std::vector<IdPair>& order);

    const std::vector<Event>& events() const { return events_; }
    const Event& event(const std::string& id) const;
    bool has_event(const std::string& id) const { return index_.count(id) > 0; }
    const Poset& order() const { return order_; }
    const ObjectUniverse& universe() const { return universe_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }
    // True when events carry at least two distinct recorder tags.
    bool multi_recorder() const;

private:
    ObjectUniverse universe_;
    std::vector<Event> events_;
    std::map<std::string, std::size_t> index_;
    Poset order_;
};

SystemLog project_log(const SystemLog& l, const ObjectMultiset& objs);

// Replaces event `e` by one concurrent fragment per part. Parts must be
// non-empty, at least two, sum to the event's objects and never split copies
// of one object between parts. Throws BadPartition.
SystemLog relax_event(const SystemLog& l, const std::string& e, const std::vector<ObjectMultiset>& partition);

enum class OrderCheck {
    exact,    // per-object traces must coincide
    refines,  // the candidate may order more than the original
};

bool is_relaxed_version(const SystemLog& original, const SystemLog& candidate, OrderCheck mode = OrderCheck::exact);

// e1 before e2 iff t2 - t1 > tolerance.
Poset derive_order_from_timestamps(const std::vector<std::pair<std::string, double>>& events, double tolerance);

}  // namespace relalign
