#include "relalign/log.hpp"

#include <set>

#include "relalign/errors.hpp"

namespace relalign {

SystemLog::SystemLog(ObjectUniverse universe, std::vector<Event> events, const std::vector<IdPair>& order)
    : universe_(std::move(universe)), events_(std::move(events)) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const Event& e = events_[i];
        if (!index_.emplace(e.id, i).second) throw Error("duplicate event id " + e.id);
        if (e.objects.empty()) throw Error("event " + e.id + " has no objects");
        for (const auto& [o, _] : e.objects.entries()) universe_.require_role_of(o);
        ids.push_back(e.id);
    }
    for (const auto& [a, b] : order)
        if (!index_.count(a) || !index_.count(b)) throw Error("order pair references unknown event " + a + "/" + b);
    order_ = Poset::from_pairs(std::move(ids), order);
}

const Event& SystemLog::event(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown event " + id);
    return events_[it->second];
}

bool SystemLog::multi_recorder() const {
    std::set<std::string> tags;
    for (const auto& e : events_)
        if (e.recorder) tags.insert(*e.recorder);
    return tags.size() >= 2;
}

SystemLog project_log(const SystemLog& l, const ObjectMultiset& objs) {
    std::vector<Event> kept;
    std::set<std::string> ids;
    for (const auto& e : l.events()) {
        auto common = multiset_min(e.objects, objs);
        if (common.empty()) continue;
        Event f = e;
        f.objects = common;
        kept.push_back(std::move(f));
        ids.insert(e.id);
    }
    std::vector<IdPair> pairs;
    for (const auto& pr : l.order().order())
        if (ids.count(pr.first) && ids.count(pr.second)) pairs.push_back(pr);
    return SystemLog(l.universe(), std::move(kept), pairs);
}

SystemLog relax_event(const SystemLog& l, const std::string& eid, const std::vector<ObjectMultiset>& partition) {
    const Event& e = l.event(eid);
    if (partition.size() < 2) throw BadPartition("relaxing " + eid + " needs at least two parts");
    ObjectMultiset sum;
    std::set<std::string> seen;
    for (const auto& part : partition) {
        if (part.empty()) throw BadPartition("empty part for " + eid);
        for (const auto& [o, _] : part.entries())
            if (!seen.insert(o).second) throw BadPartition("object " + o + " split across parts of " + eid);
        sum = sum + part;
    }
    if (!(sum == e.objects)) throw BadPartition("parts do not sum to the objects of " + eid);

    const std::string root = e.root();
    const ObjectMultiset original = e.projection_of ? *e.projection_of : e.objects;
    int next_index = 1;
    auto used = [&](const std::string& id) { return l.has_event(id); };
    std::vector<Event> events;
    std::vector<std::string> fragment_ids;
    for (const auto& x : l.events()) {
        if (x.id != eid) {
            events.push_back(x);
            continue;
        }
        for (const auto& part : partition) {
            std::string fid;
            do {
                fid = root + "#" + std::to_string(next_index++);
            } while (used(fid));
            Event f = x;
            f.id = fid;
            f.objects = part;
            f.parent = root;
            f.projection_of = original;
            fragment_ids.push_back(fid);
            events.push_back(std::move(f));
        }
    }
    std::vector<IdPair> pairs;
    for (const auto& [a, b] : l.order().order()) {
        if (a == eid) {
            for (const auto& f : fragment_ids) pairs.emplace_back(f, b);
        } else if (b == eid) {
            for (const auto& f : fragment_ids) pairs.emplace_back(a, f);
        } else {
            pairs.emplace_back(a, b);
        }
    }
    return SystemLog(l.universe(), std::move(events), pairs);
}

bool is_relaxed_version(const SystemLog& original, const SystemLog& candidate, OrderCheck mode) {
    std::map<std::string, ObjectMultiset> sums;
    for (const auto& c : candidate.events()) {
        const std::string& root = c.root();
        if (!original.has_event(root)) return false;
        if (original.event(root).activity != c.activity) return false;
        sums[root] = sums[root] + c.objects;
    }
    if (sums.size() != original.size()) return false;
    for (const auto& e : original.events()) {
        auto it = sums.find(e.id);
        if (it == sums.end() || !(it->second == e.objects)) return false;
    }

    std::set<std::string> objects;
    for (const auto& e : original.events())
        for (const auto& [o, _] : e.objects.entries()) objects.insert(o);
    for (const auto& o : objects) {
        ObjectMultiset single;
        single.add(o, 1 << 20);
        auto po = project_log(original, single);
        auto pc = project_log(candidate, single);
        if (po.size() != pc.size()) return false;
        std::map<std::string, std::string> root_of;
        std::set<std::string> roots;
        for (const auto& c : pc.events()) {
            root_of[c.id] = c.root();
            if (!roots.insert(c.root()).second) return false;
            if (!(c.objects == po.event(c.root()).objects)) return false;
        }
        for (const auto& a : pc.events()) {
            for (const auto& b : pc.events()) {
                bool in_candidate = pc.order().less(a.id, b.id);
                bool in_original = po.order().less(root_of[a.id], root_of[b.id]);
                if (in_original && !in_candidate) return false;
                if (mode == OrderCheck::exact && in_candidate && !in_original) return false;
            }
        }
    }
    return true;
}

Poset derive_order_from_timestamps(const std::vector<std::pair<std::string, double>>& events, double tolerance) {
    std::vector<std::string> ids;
    std::vector<IdPair> pairs;
    for (const auto& [id, t] : events) ids.push_back(id);
    for (const auto& [a, ta] : events)
        for (const auto& [b, tb] : events)
            if (tb - ta > tolerance) pairs.emplace_back(a, b);
    return Poset::from_pairs(std::move(ids), pairs);
}

}  // namespace relalign
