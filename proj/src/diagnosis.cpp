#include "relalign/diagnosis.hpp"

#include <algorithm>

namespace relalign {

namespace {

bool visible_model(const Move& mv) { return is_model_family(mv.kind) && mv.kind != MoveKind::correlation_silent && !mv.silent; }

bool deviating(const Move& mv) {
    return is_log_family(mv.kind) || visible_model(mv) || mv.kind == MoveKind::substitute_sync;
}

std::string activity_of(const Move& mv) {
    if (mv.event) return mv.event->activity;
    return mv.label.value_or("");
}

ObjectMultiset objects_of(const Move& mv) {
    if (mv.event) return mv.event->objects;
    if (mv.firing) return mv.firing->involved();
    return {};
}

std::set<std::string> role_set(const ObjectUniverse& u, const ObjectMultiset& objs) {
    std::set<std::string> out;
    for (const auto& [o, _] : objs.entries())
        if (auto r = u.role_of(o)) out.insert(*r);
    return out;
}

// Same multiset outside one role; inside it disjoint with equal counts.
bool one_role_swap(const ObjectUniverse& u, const ObjectMultiset& a, const ObjectMultiset& b) {
    if (a == b || a.size() != b.size()) return false;
    std::set<std::string> differ;
    const ObjectMultiset both = a + b;
    for (const auto& [o, _] : both.entries())
        if (a.count(o) != b.count(o)) {
            auto r = u.role_of(o);
            if (!r) return false;
            differ.insert(*r);
        }
    if (differ.size() != 1) return false;
    auto ra = restrict_to_roles(u, a, differ);
    auto rb = restrict_to_roles(u, b, differ);
    return ra.size() == rb.size() && multiset_min(ra, rb).empty();
}

bool strict_sub(const ObjectMultiset& a, const ObjectMultiset& b) { return a <= b && !(a == b); }

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::missing_event: return "missing_event";
        case Category::incorrect_event: return "incorrect_event";
        case Category::missing_object: return "missing_object";
        case Category::incorrect_object: return "incorrect_object";
        case Category::missing_position: return "missing_position";
        case Category::incorrect_position: return "incorrect_position";
        case Category::unclassified: return "unclassified";
    }
    return "?";
}

std::vector<CongruenceTriple> congruence_of(const Alignment& al) {
    std::vector<CongruenceTriple> out;
    for (const auto& mv : al.moves) {
        if (is_sync_family(mv.kind)) out.push_back({mv.id, mv.event->id, mv.firing->id});
        else if (is_log_family(mv.kind)) out.push_back({mv.id, mv.event->id, std::nullopt});
        else if (visible_model(mv)) out.push_back({mv.id, std::nullopt, mv.firing->id});
    }
    return out;
}

std::vector<std::string> congruence_violations(const Alignment& al, const std::vector<CongruenceTriple>& triples) {
    std::map<std::string, int> events, firings;
    for (const auto& mv : al.moves) {
        if (mv.event) events[mv.event->id] += 0;
        if (mv.firing && !mv.silent && mv.kind != MoveKind::correlation_silent) firings[mv.firing->id] += 0;
    }
    std::vector<std::string> bad;
    for (const auto& t : triples) {
        if (!t.log_side && !t.model_side) bad.push_back(t.move_id);
        if (t.log_side) {
            auto it = events.find(*t.log_side);
            if (it == events.end()) bad.push_back(*t.log_side);
            else ++it->second;
        }
        if (t.model_side) {
            auto it = firings.find(*t.model_side);
            if (it == firings.end()) bad.push_back(*t.model_side);
            else ++it->second;
        }
    }
    for (const auto* side : {&events, &firings})
        for (const auto& [id, n] : *side)
            if (n != 1) bad.push_back(id);
    return bad;
}

std::vector<DeviationRecord> classify(const Alignment& al, const SystemLog& l, const ProcessModel& m) {
    const ObjectUniverse u = m.universe.merged(l.universe());
    auto base_roles = [&](const Move& mv) {
        if (mv.firing) {
            const std::string& t = mv.base_transition.empty() ? mv.firing->transition : mv.base_transition;
            if (m.net.has_transition(t)) return m.net.roles_of(m.net.transition(t));
        }
        if (mv.event) {
            const Event& root = l.has_event(mv.event->root()) ? l.event(mv.event->root()) : *mv.event;
            return role_set(u, root.objects);
        }
        return std::set<std::string>{};
    };

    std::vector<DeviationRecord> out;
    for (const auto& mv : al.moves) {
        if (!deviating(mv)) continue;
        DeviationRecord rec;
        rec.move_id = mv.id;
        const std::string act = activity_of(mv);
        const ObjectMultiset objs = objects_of(mv);
        const std::set<std::string> roles = base_roles(mv);

        if (mv.kind == MoveKind::substitute_sync) {
            rec.candidates.insert(Category::incorrect_object);
            // Two events of one activity that traded objects read the same as
            // two events that traded places.
            for (const auto& other : al.moves)
                if (&other != &mv && other.kind == MoveKind::substitute_sync && activity_of(other) == act &&
                    other.event->objects == mv.firing->involved() && other.firing->involved() == objs)
                    rec.candidates.insert(Category::incorrect_position);
            for (const auto& r : roles)
                if (!mv.substituted_roles.count(r)) rec.agreeing_roles.insert(r);
        } else {
            bool log_side = is_log_family(mv.kind);
            for (const auto& other : al.moves) {
                if (&other == &mv || activity_of(other) != act) continue;
                bool opposite = log_side ? visible_model(other) : is_log_family(other.kind);
                if (!opposite) continue;
                const ObjectMultiset oo = objects_of(other);
                if (oo == objs) rec.candidates.insert(Category::incorrect_position);
                if (one_role_swap(u, objs, oo)) rec.candidates.insert(Category::incorrect_object);
                const ObjectMultiset& logged = log_side ? objs : oo;
                const ObjectMultiset& modeled = log_side ? oo : objs;
                if (strict_sub(logged, modeled)) rec.candidates.insert(Category::missing_object);
            }
            if (log_side) {
                // Fragments of the same event that did synchronize.
                std::set<std::string> synced;
                for (const auto& other : al.moves)
                    if (is_sync_family(other.kind) && other.event->root() == mv.event->root())
                        for (const auto& r : role_set(u, other.event->objects)) synced.insert(r);
                if (!synced.empty()) rec.candidates.insert(Category::incorrect_object);
                if (rec.candidates.empty()) rec.candidates.insert(Category::incorrect_event);
                rec.agreeing_roles = synced;
            } else {
                std::set<std::string> kept = role_set(u, objs);
                if (mv.kind == MoveKind::relaxed_model) {
                    for (const auto& other : al.moves) {
                        if (!is_sync_family(other.kind) || other.event->parent) continue;
                        if (other.base_transition != mv.base_transition) continue;
                        std::set<std::string> cover = role_set(u, other.firing->involved());
                        cover.insert(kept.begin(), kept.end());
                        if (std::includes(cover.begin(), cover.end(), roles.begin(), roles.end()))
                            rec.candidates.insert(Category::missing_object);
                    }
                }
                if (rec.candidates.empty()) rec.candidates.insert(Category::missing_event);
                rec.agreeing_roles = kept;
            }
        }
        std::erase_if(rec.agreeing_roles, [&](const std::string& r) { return !roles.count(r); });
        for (const auto& r : roles)
            if (!rec.agreeing_roles.count(r)) rec.disagreeing_roles.insert(r);
        rec.likelihood_rank = static_cast<int>(rec.agreeing_roles.size());
        rec.category = rec.candidates.size() == 1 ? *rec.candidates.begin() : Category::unclassified;
        out.push_back(std::move(rec));
    }

    if (l.multi_recorder()) {
        std::set<std::string> flagged;
        for (const auto& a : al.moves) {
            if (!is_sync_family(a.kind)) continue;
            for (const auto& b : al.moves) {
                if (!is_sync_family(b.kind) || &a == &b || flagged.count(b.id)) continue;
                const std::string& ra = a.event->root();
                const std::string& rb = b.event->root();
                if (ra == rb || !l.has_event(ra) || !l.has_event(rb)) continue;
                if (!l.order().concurrent(ra, rb) || !al.order.less(a.id, b.id)) continue;
                if (l.event(ra).recorder == l.event(rb).recorder) continue;
                DeviationRecord rec;
                rec.move_id = b.id;
                rec.category = Category::missing_position;
                rec.candidates = {Category::missing_position};
                rec.agreeing_roles = base_roles(b);
                rec.likelihood_rank = static_cast<int>(rec.agreeing_roles.size());
                flagged.insert(b.id);
                out.push_back(std::move(rec));
            }
        }
    }
    return out;
}

namespace {

std::string signature(const Move& mv) {
    std::string s(to_string(mv.kind));
    if (mv.event) s += "|" + mv.event->id;
    if (mv.firing) s += "|" + mv.label.value_or("") + mv.firing->involved().to_string();
    return s;
}

ObjectMultiset touched(const Move& mv, const SystemLog& l) {
    if (mv.event && l.has_event(mv.event->root())) return l.event(mv.event->root()).objects;
    return objects_of(mv);
}

}  // namespace

void merge_alternative(std::vector<DeviationRecord>& records, const Alignment& al, const Alignment& alt,
                       const SystemLog& l, const ProcessModel& m) {
    std::map<std::string, int> mine, theirs;
    for (const auto& mv : al.moves)
        if (deviating(mv)) ++mine[signature(mv)];
    for (const auto& mv : alt.moves)
        if (deviating(mv)) ++theirs[signature(mv)];

    std::vector<std::pair<ObjectMultiset, std::set<Category>>> alt_only;
    auto alt_recs = classify(alt, l, m);
    std::map<std::string, int> seen;
    for (const auto& mv : alt.moves) {
        if (!deviating(mv)) continue;
        auto sig = signature(mv);
        if (++seen[sig] <= mine[sig]) continue;
        for (const auto& r : alt_recs)
            if (r.move_id == mv.id) alt_only.emplace_back(touched(mv, l), r.candidates);
    }
    if (alt_only.empty()) return;

    seen.clear();
    for (const auto& mv : al.moves) {
        if (!deviating(mv)) continue;
        auto sig = signature(mv);
        if (++seen[sig] <= theirs[sig]) continue;
        const ObjectMultiset objs = touched(mv, l);
        for (auto& r : records) {
            if (r.move_id != mv.id) continue;
            for (const auto& [other, cands] : alt_only)
                if (!multiset_min(objs, other).empty()) r.candidates.insert(cands.begin(), cands.end());
            r.category = r.candidates.size() == 1 ? *r.candidates.begin() : Category::unclassified;
        }
    }
}

TrustReport trust_report(const Alignment& al, const ObjectUniverse& u) {
    TrustReport rep;
    for (const auto& mv : al.moves) {
        if (mv.kind == MoveKind::correlation_silent || (!mv.event && mv.silent)) continue;
        const std::string act = activity_of(mv);
        const ObjectMultiset objs = objects_of(mv);
        std::map<std::string, std::pair<int, int>> per_role;  // role -> (synced, total)
        for (const auto& [o, c] : objs.entries()) {
            auto r = u.role_of(o);
            if (!r) continue;
            auto& [synced, total] = per_role[*r];
            total += c;
            bool ok = is_sync_family(mv.kind) && !mv.substituted_roles.count(*r);
            if (ok) synced += c;
        }
        for (const auto& [r, st] : per_role) {
            TrustCounts& tc = rep.entries[{r, act}];
            switch (mv.kind) {
                case MoveKind::sync: ++tc.sync; break;
                case MoveKind::relaxed_sync: ++tc.relaxed_sync; break;
                case MoveKind::substitute_sync: ++tc.substitute; break;
                case MoveKind::log:
                case MoveKind::relaxed_log: ++tc.log; break;
                default: ++tc.model; break;
            }
            tc.synced_weight += Rational(st.first);
            tc.total_weight += Rational(st.second);
        }
    }
    return rep;
}

Diagnosis diagnose(const SystemLog& l, const ProcessModel& m, const CostParams& params,
                   const std::set<std::string>& substitutable_roles, const SearchOptions& opts) {
    Diagnosis d;
    d.alignment = relaxed_align(l, m, params, substitutable_roles, opts);
    d.records = classify(d.alignment, l, m);
    for (auto tb : {TieBreak::fewer_log_moves, TieBreak::fewer_model_moves}) {
        if (tb == opts.tie_break) continue;
        SearchOptions o = opts;
        o.tie_break = tb;
        Alignment alt = relaxed_align(l, m, params, substitutable_roles, o);
        merge_alternative(d.records, d.alignment, alt, l, m);
        d.alternatives.push_back(std::move(alt));
    }
    d.trust = trust_report(d.alignment, m.universe.merged(l.universe()));
    return d;
}

}  // namespace relalign
