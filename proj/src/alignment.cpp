#include "relalign/alignment.hpp"

#include <algorithm>

#include "relalign/errors.hpp"

namespace relalign {

std::string_view to_string(MoveKind kind) {
    switch (kind) {
        case MoveKind::sync: return "sync";
        case MoveKind::log: return "log";
        case MoveKind::model: return "model";
        case MoveKind::relaxed_sync: return "relaxed_sync";
        case MoveKind::relaxed_log: return "relaxed_log";
        case MoveKind::relaxed_model: return "relaxed_model";
        case MoveKind::substitute_sync: return "substitute_sync";
        case MoveKind::correlation_silent: return "correlation_silent";
    }
    return "sync";
}

MoveKind move_kind_from_string(std::string_view text) {
    for (auto k : {MoveKind::sync, MoveKind::log, MoveKind::model, MoveKind::relaxed_sync, MoveKind::relaxed_log,
                   MoveKind::relaxed_model, MoveKind::substitute_sync, MoveKind::correlation_silent})
        if (to_string(k) == text) return k;
    throw Error("unknown move kind '" + std::string(text) + "'");
}

bool is_sync_family(MoveKind k) {
    return k == MoveKind::sync || k == MoveKind::relaxed_sync || k == MoveKind::substitute_sync;
}
bool is_log_family(MoveKind k) { return k == MoveKind::log || k == MoveKind::relaxed_log; }
bool is_model_family(MoveKind k) {
    return k == MoveKind::model || k == MoveKind::relaxed_model || k == MoveKind::correlation_silent;
}
bool has_event(MoveKind k) { return is_sync_family(k) || is_log_family(k); }
bool has_firing(MoveKind k) { return is_sync_family(k) || is_model_family(k); }

const Move& Alignment::move(const std::string& id) const {
    for (const auto& m : moves)
        if (m.id == id) return m;
    throw Error("unknown move " + id);
}

Rational move_cost_standard(const MoveShape& mv, const CostParams& params) {
    const Rational eps2 = params.epsilon * params.epsilon;
    if (is_sync_family(mv.kind)) return params.epsilon * Rational(mv.substituted);
    if (is_log_family(mv.kind)) return params.log_weight;
    if (mv.correlation || mv.silent) return eps2;
    return params.model_weight;
}

Rational move_cost_relaxed(const MoveShape& mv, const CostParams& params) {
    const Rational& eps = params.epsilon;
    if (mv.correlation) return eps * eps;
    Rational slack = eps * Rational(mv.var_count - mv.object_count);
    if (is_sync_family(mv.kind)) return slack + eps * Rational(mv.substituted);
    if (is_model_family(mv.kind) && mv.silent) return slack + eps * eps;
    Rational base = Rational(mv.object_count) + slack;
    return base * (is_log_family(mv.kind) ? params.log_weight : params.model_weight);
}

Rational move_cost(const MoveShape& mv, const CostParams& params) {
    return params.scheme == CostScheme::relaxed ? move_cost_relaxed(mv, params) : move_cost_standard(mv, params);
}

bool potential_match(const Event& e, const std::string& label, const ObjectMultiset& fo,
                     const std::set<std::string>& roles, const ObjectUniverse& u) {
    if (e.activity != label) return false;
    if (roles.empty()) return e.objects == fo;
    ObjectMultiset keep_e, keep_f;
    for (const auto& [o, c] : e.objects.entries()) {
        auto r = u.role_of(o);
        if (!r || !roles.count(*r)) keep_e.add(o, c);
    }
    for (const auto& [o, c] : fo.entries()) {
        auto r = u.role_of(o);
        if (!r || !roles.count(*r)) keep_f.add(o, c);
    }
    if (!(keep_e == keep_f)) return false;
    for (const auto& r : roles) {
        auto pe = restrict_to_roles(u, e.objects, {r});
        auto pf = restrict_to_roles(u, fo, {r});
        if (pe.size() != pf.size() || pe.empty()) return false;
        if (!multiset_min(pe, pf).empty()) return false;
    }
    return true;
}

bool potential_match(const Event& e, const std::optional<std::string>& label, const TransitionFiring& f,
                     const std::set<std::string>& roles, const ObjectUniverse& u) {
    return label && potential_match(e, *label, f.involved(), roles, u);
}

Marking final_target(const SystemLog& l, const ProcessModel& m, bool strict) {
    if (strict) return m.final;
    std::set<std::string> active;
    for (const auto& e : l.events())
        for (const auto& [o, _] : e.objects.entries()) active.insert(o);
    for (const auto& [o, _] : m.universe.objects().entries()) {
        auto r = m.universe.role_of(o);
        if (r && m.universe.role(*r).kind == RoleKind::persistent) active.insert(o);
    }
    auto touches = [&](const Token& t) {
        return std::any_of(t.begin(), t.end(), [&](const std::string& o) { return active.count(o) > 0; });
    };
    Marking out;
    for (const auto& [place, bag] : m.final.places())
        for (const auto& [tok, c] : bag)
            if (touches(tok)) out.add(place, tok, c);
    for (const auto& [place, bag] : m.initial.places())
        for (const auto& [tok, c] : bag)
            if (!touches(tok)) out.add(place, tok, c);
    return out;
}

SystemLog alignment_log(const Alignment& al, const SystemLog& l) {
    std::vector<Event> events;
    std::map<std::string, std::string> event_of_move;
    for (const auto& mv : al.moves) {
        if (!mv.event) continue;
        events.push_back(*mv.event);
        event_of_move[mv.id] = mv.event->id;
    }
    std::vector<IdPair> pairs;
    for (const auto& [a, b] : al.order.order()) {
        auto ia = event_of_move.find(a);
        auto ib = event_of_move.find(b);
        if (ia != event_of_move.end() && ib != event_of_move.end()) pairs.emplace_back(ia->second, ib->second);
    }
    return SystemLog(l.universe(), std::move(events), pairs);
}

ExecutionPoset alignment_run(const Alignment& al) {
    ExecutionPoset run;
    std::vector<std::string> ids;
    std::map<std::string, std::string> firing_of_move;
    for (const auto& mv : al.moves) {
        if (!mv.firing) continue;
        ids.push_back(mv.firing->id);
        run.firings.emplace(mv.firing->id, *mv.firing);
        firing_of_move[mv.id] = mv.firing->id;
    }
    std::vector<IdPair> pairs;
    for (const auto& [a, b] : al.order.order()) {
        auto ia = firing_of_move.find(a);
        auto ib = firing_of_move.find(b);
        if (ia != firing_of_move.end() && ib != firing_of_move.end()) pairs.emplace_back(ia->second, ib->second);
    }
    run.run = Poset::from_pairs(std::move(ids), pairs);
    return run;
}

std::vector<std::pair<std::string, std::string>> order_contradictions(const Alignment& al, const SystemLog& l) {
    std::vector<TransitionFiring> seq;
    for (const auto& mv : al.moves)
        if (mv.firing) seq.push_back(*mv.firing);
    auto run = execution_poset_from_sequence(seq);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& a : al.moves) {
        if (!is_sync_family(a.kind)) continue;
        for (const auto& b : al.moves) {
            if (!is_sync_family(b.kind) || a.id == b.id) continue;
            const auto& ra = a.event->root();
            const auto& rb = b.event->root();
            if (ra == rb || !l.order().less(ra, rb)) continue;
            if (run.run.less(b.firing->id, a.firing->id)) out.emplace_back(a.id, b.id);
        }
    }
    return out;
}

Verification verify_alignment(const Alignment& al, const SystemLog& l, const ProcessModel& m, bool relaxed,
                              const CostParams& params_in, const SearchOptions& opts) {
    Verification v;
    CostParams params = params_in;
    params.scheme = relaxed ? CostScheme::relaxed : CostScheme::standard;
    auto fail = [&](std::string msg) {
        v.ok = false;
        v.violations.push_back(std::move(msg));
    };
    RelaxedModel rm = build_relaxed_model(m);
    const ProcessModel& net_model = relaxed ? rm.model : m;
    const Tpnid& net = net_model.net;

    Rational total;
    std::set<std::string> ids;
    for (const auto& mv : al.moves) {
        if (!ids.insert(mv.id).second) fail("duplicate move id " + mv.id);
        if (has_event(mv.kind) != mv.event.has_value() || has_firing(mv.kind) != mv.firing.has_value()) {
            fail("move " + mv.id + " has the wrong shape for its kind");
            continue;
        }
        if (!relaxed && (mv.kind == MoveKind::relaxed_sync || mv.kind == MoveKind::relaxed_log ||
                         mv.kind == MoveKind::relaxed_model || mv.kind == MoveKind::substitute_sync ||
                         mv.kind == MoveKind::correlation_silent)) {
            fail("relaxed move " + mv.id + " in a regular alignment");
            continue;
        }
        MoveShape shape;
        shape.kind = mv.kind;
        const Transition* t = nullptr;
        if (mv.firing) {
            if (!net.has_transition(mv.firing->transition)) {
                fail("move " + mv.id + " fires unknown transition " + mv.firing->transition);
                continue;
            }
            t = &net.transition(mv.firing->transition);
            shape.silent = t->silent();
            shape.correlation = rm.is_correlation(t->id);
            if (!shape.correlation) shape.var_count = static_cast<int>(m.net.vars_of(m.net.transition(rm.base_of(t->id))).size());
            shape.object_count = mv.firing->involved().size();
            bool projected = t->projection.has_value() && !shape.correlation;
            if (mv.kind == MoveKind::correlation_silent && !shape.correlation)
                fail("move " + mv.id + " is marked silent correlation but fires " + t->id);
            if (mv.kind == MoveKind::model && (projected || shape.correlation))
                fail("model move " + mv.id + " fires a relaxed transition");
            if (mv.kind == MoveKind::relaxed_model && !projected)
                fail("relaxed model move " + mv.id + " fires a base transition");
        }
        if (mv.event) {
            const Event& e = *mv.event;
            bool fragment = e.parent.has_value();
            const std::string& root = e.root();
            if (!l.has_event(root)) {
                fail("move " + mv.id + " references unknown event " + root);
                continue;
            }
            const Event& orig = l.event(root);
            shape.object_count = e.objects.size();
            if (is_log_family(mv.kind)) shape.var_count = orig.objects.size();
            if (mv.kind == MoveKind::log && fragment) fail("log move " + mv.id + " on a fragment");
            if (mv.kind == MoveKind::sync) {
                if (fragment || (t && t->projection)) fail("sync move " + mv.id + " is not a full match");
                if (!potential_match(e, t->label, *mv.firing, {}, l.universe())) fail("sync move " + mv.id + " does not match");
            }
            if (mv.kind == MoveKind::relaxed_sync) {
                if (!fragment && !(t && t->projection)) fail("relaxed sync " + mv.id + " relaxes nothing");
                if (!potential_match(e, t->label, *mv.firing, {}, l.universe()))
                    fail("relaxed sync " + mv.id + " does not match");
            }
            if (mv.kind == MoveKind::substitute_sync) {
                if (mv.substituted_roles.empty() ||
                    !potential_match(e, t->label, *mv.firing, mv.substituted_roles, l.universe()))
                    fail("substitute sync " + mv.id + " does not match");
                shape.substituted = restrict_to_roles(l.universe(), e.objects, mv.substituted_roles).size();
            }
        }
        Rational c = move_cost(shape, params);
        if (!(c == mv.cost)) fail("move " + mv.id + " costs " + mv.cost.to_string() + ", expected " + c.to_string());
        total += c;
    }
    if (!(total == al.total_cost)) fail("total cost " + al.total_cost.to_string() + " != " + total.to_string());

    try {
        auto al_log = alignment_log(al, l);
        if (!is_relaxed_version(l, al_log, OrderCheck::refines)) fail("log projection is not a relaxed version of the log");
        if (!relaxed)
            for (const auto& e : al_log.events())
                if (e.parent) fail("regular alignment splits event " + e.root());
        std::map<std::string, std::vector<std::string>> parts;
        for (const auto& e : al_log.events()) parts[e.root()].push_back(e.id);
        for (const auto& [x, y] : l.order().order())
            for (const auto& a : parts[x])
                for (const auto& b : parts[y])
                    if (!al_log.order().less(a, b)) fail("log order " + x + " < " + y + " is lost");
    } catch (const Error& ex) {
        fail(std::string("log projection: ") + ex.what());
    }
    try {
        auto run = alignment_run(al);
        if (!is_execution_poset(net_model, run, final_target(l, m, opts.strict_final)))
            fail("run projection is not an execution poset");
    } catch (const Error& ex) {
        fail(std::string("run projection: ") + ex.what());
    }
    for (const auto& [a, b] : order_contradictions(al, l)) fail("matched pairs " + a + " and " + b + " disagree on order");
    return v;
}

}  // namespace relalign
