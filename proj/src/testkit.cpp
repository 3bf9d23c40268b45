#include "relalign/testkit.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "relalign/errors.hpp"

namespace relalign {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

// Hands out "<role><k>" names that were never used before in this run.
class FreshNames {
public:
    explicit FreshNames(const ProcessModel& m) {
        for (const auto& [o, _] : m.universe.objects().entries()) used_.insert(o);
        for (const auto& o : m.initial.objects()) used_.insert(o);
        for (const auto& o : m.final.objects()) used_.insert(o);
    }

    std::string next(const std::string& role) {
        for (int k = 1;; ++k) {
            auto name = role + std::to_string(k);
            if (used_.insert(name).second) return name;
        }
    }

private:
    std::set<std::string> used_;
};

struct Choice {
    std::string transition;
    Mode mode;
};

std::vector<Choice> all_choices(const ProcessModel& m, const Marking& mk, bool allow_fresh) {
    std::vector<Choice> out;
    for (const auto& t : m.net.transitions()) {
        bool has_fresh = false;
        for (const auto& v : m.net.vars_of(t)) has_fresh = has_fresh || m.net.variable(v).fresh;
        if (has_fresh && !allow_fresh) continue;
        for (auto& md : enabled_modes(m, mk, t.id)) out.push_back({t.id, std::move(md)});
    }
    return out;
}

void rename_fresh(const ProcessModel& m, Choice& c, FreshNames& names) {
    for (const auto& v : m.net.vars_of(m.net.transition(c.transition))) {
        const Variable& var = m.net.variable(v);
        if (var.fresh) c.mode[v] = names.next(var.role);
    }
}

}  // namespace

std::string_view to_string(IssueKind k) {
    switch (k) {
        case IssueKind::mi_e: return "mi_e";
        case IssueKind::in_e: return "in_e";
        case IssueKind::mi_o: return "mi_o";
        case IssueKind::in_o: return "in_o";
        case IssueKind::mi_p: return "mi_p";
        case IssueKind::in_p: return "in_p";
    }
    return "?";
}

IssueKind issue_kind_from_string(std::string_view text) {
    for (auto k : all_issue_kinds())
        if (to_string(k) == text) return k;
    throw Error("unknown issue kind " + std::string(text));
}

const std::vector<IssueKind>& all_issue_kinds() {
    static const std::vector<IssueKind> kinds{IssueKind::mi_e, IssueKind::in_e, IssueKind::mi_o,
                                              IssueKind::in_o, IssueKind::mi_p, IssueKind::in_p};
    return kinds;
}

ExecutionPoset generate_run(const ProcessModel& m, std::uint64_t seed, std::size_t max_firings,
                            std::size_t completion_states) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 20; ++attempt) {
        FreshNames names(m);
        std::vector<TransitionFiring> seq;
        Marking mk = m.initial;
        std::size_t prefix = max_firings == 0 ? 0 : pick(rng, max_firings + 1);
        if (attempt >= 10) prefix /= 2;
        if (attempt == 19) prefix = 0;
        for (std::size_t i = 0; i < prefix; ++i) {
            auto choices = all_choices(m, mk, true);
            if (choices.empty()) break;
            Choice c = choices[pick(rng, choices.size())];
            rename_fresh(m, c, names);
            TransitionFiring f{"", c.transition, c.mode};
            mk = fire(m, mk, f);
            seq.push_back(std::move(f));
        }

        // Shortest completion without minting new objects.
        std::size_t left = max_firings - seq.size();
        std::map<Marking, std::pair<int, TransitionFiring>> parent;
        std::vector<Marking> order{mk};
        std::vector<std::size_t> depth{0};
        parent.emplace(mk, std::make_pair(-1, TransitionFiring{}));
        int found = -1;
        for (std::size_t i = 0; i < order.size() && found < 0; ++i) {
            if (order[i] == m.final) {
                found = static_cast<int>(i);
                break;
            }
            if (depth[i] >= left || order.size() > completion_states) continue;
            for (auto& c : all_choices(m, order[i], false)) {
                TransitionFiring f{"", c.transition, c.mode};
                Marking next = fire(m, order[i], f);
                if (parent.count(next)) continue;
                parent.emplace(next, std::make_pair(static_cast<int>(i), f));
                order.push_back(next);
                depth.push_back(depth[i] + 1);
            }
        }
        if (found < 0) continue;
        std::vector<TransitionFiring> tail;
        for (int i = found; i > 0;) {
            const auto& [prev, f] = parent.at(order[static_cast<std::size_t>(i)]);
            tail.push_back(f);
            i = prev;
        }
        std::reverse(tail.begin(), tail.end());
        seq.insert(seq.end(), tail.begin(), tail.end());
        number_firings(seq);
        return execution_poset_from_sequence(seq);
    }
    throw NoRunFound("no run to the final marking within " + std::to_string(max_firings) + " firings");
}

SystemLog run_to_log(const ProcessModel& m, const ExecutionPoset& run,
                     const std::map<std::string, std::string>& recorders) {
    ObjectUniverse u = m.universe;
    std::vector<Event> events;
    std::set<std::string> keep;
    for (const auto& id : run.run.elements()) {
        const TransitionFiring& f = run.firings.at(id);
        const Transition& t = m.net.transition(f.transition);
        if (t.silent()) continue;
        Event e;
        e.id = f.id;
        e.activity = *t.label;
        e.objects = f.involved();
        if (e.objects.empty()) continue;
        auto rec = recorders.find(e.activity);
        if (rec != recorders.end()) e.recorder = rec->second;
        for (const auto& [v, o] : f.mode)
            if (!u.objects().count(o)) u.add_object(o, m.net.variable(v).role);
        keep.insert(e.id);
        events.push_back(std::move(e));
    }
    Poset order = project(run.run, keep);
    return SystemLog(std::move(u), std::move(events), covering_relation(order));
}

std::vector<std::string> resolve_target(const SystemLog& s, const std::string& target) {
    std::vector<std::string> out;
    auto colon = target.find(':');
    std::string kind = colon == std::string::npos ? "" : target.substr(0, colon);
    std::string value = colon == std::string::npos ? target : target.substr(colon + 1);
    for (const auto& e : s.events()) {
        bool hit = false;
        if (kind == "id") {
            hit = e.id == value;
        } else if (kind == "activity") {
            hit = e.activity == value;
        } else if (kind == "role") {
            for (const auto& [o, _] : e.objects.entries()) hit = hit || s.universe().role_of(o) == value;
        } else if (kind.empty()) {
            hit = value.empty() || value == "*" || e.id == value || e.activity == value;
        } else {
            throw TargetNotFound("unknown target selector " + kind);
        }
        if (hit) out.push_back(e.id);
    }
    if (out.empty()) throw TargetNotFound("target " + target + " matches no event");
    return out;
}

SystemLog inject(const SystemLog& s, const IssueSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    auto targets = resolve_target(s, spec.target);
    const auto covers = covering_relation(s.order());
    std::vector<Event> events = s.events();
    ObjectUniverse u = s.universe();
    auto param = [&](const std::string& k) {
        auto it = spec.params.find(k);
        return it == spec.params.end() ? std::string() : it->second;
    };
    auto index_of = [&](const std::string& id) {
        return static_cast<std::size_t>(
            std::find_if(events.begin(), events.end(), [&](const Event& e) { return e.id == id; }) - events.begin());
    };
    auto same_role_alternatives = [&](const Event& e, const std::string& o) {
        std::vector<std::string> alts;
        auto role = u.role_of(o);
        for (const auto& [x, _] : u.objects().entries())
            if (u.role_of(x) == role && !e.objects.count(x)) alts.push_back(x);
        return alts;
    };
    auto fail = [&]() -> SystemLog {
        throw TargetNotFound("no event in " + spec.target + " admits " + std::string(to_string(spec.kind)));
    };

    switch (spec.kind) {
        case IssueKind::mi_e: {
            std::string victim = targets[pick(rng, targets.size())];
            std::set<std::string> keep;
            for (const auto& e : events)
                if (e.id != victim) keep.insert(e.id);
            events.erase(events.begin() + static_cast<std::ptrdiff_t>(index_of(victim)));
            return SystemLog(u, std::move(events), project(s.order(), keep).order());
        }
        case IssueKind::in_e: {
            const Event& orig = s.event(targets[pick(rng, targets.size())]);
            Event copy = orig;
            int k = 1;
            do copy.id = orig.id + "_dup" + std::to_string(k++);
            while (s.has_event(copy.id));
            auto pairs = s.order().order();
            std::vector<std::string> anchors;
            for (const auto& e : events)
                if (e.id != orig.id) anchors.push_back(e.id);
            if (!anchors.empty()) {
                const std::string z = anchors[pick(rng, anchors.size())];
                for (const auto& e : events) {
                    if (e.id == z || s.order().less(e.id, z)) pairs.emplace_back(e.id, copy.id);
                    else if (s.order().less(z, e.id)) pairs.emplace_back(copy.id, e.id);
                }
            }
            copy.timestamp.reset();
            events.push_back(std::move(copy));
            return SystemLog(u, std::move(events), pairs);
        }
        case IssueKind::mi_o: {
            std::vector<std::string> ok;
            for (const auto& id : targets)
                if (s.event(id).objects.support().size() >= 2) ok.push_back(id);
            if (ok.empty()) return fail();
            Event& e = events[index_of(ok[pick(rng, ok.size())])];
            auto support = e.objects.support();
            std::vector<std::string> objs(support.begin(), support.end());
            std::string drop = param("object");
            if (drop.empty() || !support.count(drop)) drop = objs[pick(rng, objs.size())];
            ObjectMultiset rest;
            for (const auto& [o, c] : e.objects.entries())
                if (o != drop) rest.add(o, c);
            e.objects = rest;
            return SystemLog(u, std::move(events), s.order().order());
        }
        case IssueKind::in_o: {
            std::vector<std::pair<std::string, std::string>> options;  // (event, object)
            for (const auto& id : targets)
                for (const auto& o : s.event(id).objects.support())
                    if (!same_role_alternatives(s.event(id), o).empty()) options.emplace_back(id, o);
            if (options.empty()) return fail();
            auto [id, o] = options[pick(rng, options.size())];
            if (!param("object").empty() && s.event(id).objects.count(param("object"))) o = param("object");
            Event& e = events[index_of(id)];
            auto alts = same_role_alternatives(e, o);
            std::string with = param("with");
            if (with.empty() || std::find(alts.begin(), alts.end(), with) == alts.end()) {
                if (alts.empty()) return fail();
                with = alts[pick(rng, alts.size())];
            }
            ObjectMultiset next;
            for (const auto& [x, c] : e.objects.entries()) next.add(x == o ? with : x, c);
            e.objects = next;
            return SystemLog(u, std::move(events), s.order().order());
        }
        case IssueKind::mi_p: {
            // Drop covering pairs of the target, preferring those that cross
            // recorders.
            std::vector<std::string> ok;
            std::set<std::string> tset(targets.begin(), targets.end());
            auto crosses = [&](const IdPair& p) { return s.event(p.first).recorder != s.event(p.second).recorder; };
            bool any_cross = false;
            for (const auto& p : covers)
                if ((tset.count(p.first) || tset.count(p.second)) && crosses(p)) any_cross = true;
            for (const auto& id : targets)
                for (const auto& p : covers)
                    if ((p.first == id || p.second == id) && (!any_cross || crosses(p))) {
                        ok.push_back(id);
                        break;
                    }
            if (ok.empty()) return fail();
            std::string id = ok[pick(rng, ok.size())];
            std::vector<IdPair> kept;
            for (const auto& p : covers)
                if (!((p.first == id || p.second == id) && (!any_cross || crosses(p)))) kept.push_back(p);
            return SystemLog(u, std::move(events), kept);
        }
        case IssueKind::in_p: {
            // Pairs sharing an object first: swapping unrelated events changes
            // no object's trace.
            std::vector<IdPair> options, shared;
            std::set<std::string> tset(targets.begin(), targets.end());
            for (const auto& p : covers) {
                if (!tset.count(p.first) && !tset.count(p.second)) continue;
                options.push_back(p);
                if (!multiset_min(s.event(p.first).objects, s.event(p.second).objects).empty()) shared.push_back(p);
            }
            if (options.empty()) return fail();
            if (!shared.empty()) options = shared;
            auto [a, b] = options[pick(rng, options.size())];
            auto swap = [&](const std::string& x) { return x == a ? b : x == b ? a : x; };
            std::vector<IdPair> pairs;
            for (const auto& [x, y] : covers) pairs.emplace_back(swap(x), swap(y));
            auto& ea = events[index_of(a)];
            auto& eb = events[index_of(b)];
            std::swap(ea.timestamp, eb.timestamp);
            return SystemLog(u, std::move(events), pairs);
        }
    }
    return fail();
}

namespace {

std::optional<RandomInstance> try_random_instance(Rng& rng, const RandomInstanceOptions& opts) {
    const std::vector<std::string> role_names{"a", "b", "c"};
    const std::vector<std::string> labels{"A", "B", "C", "D"};
    int nroles = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(std::max(1, opts.max_roles))));
    bool spontaneous = chance(rng, 0.4);

    ProcessModel m;
    std::vector<std::vector<std::string>> places(static_cast<std::size_t>(nroles));
    for (int r = 0; r < nroles; ++r) {
        const std::string& rn = role_names[static_cast<std::size_t>(r)];
        RoleKind kind = (r == 0 && spontaneous) ? RoleKind::spontaneous
                        : chance(rng, 0.5)      ? RoleKind::expected
                                                : RoleKind::persistent;
        m.universe.add_role({rn, kind});
        m.net.add_variable({"x" + rn, rn, false});
        if (kind == RoleKind::spontaneous) m.net.add_variable({"n" + rn, rn, true});
        int np = 2 + static_cast<int>(pick(rng, 2));
        for (int j = 0; j < np; ++j) {
            std::string id = "P" + rn + std::to_string(j);
            m.net.add_place({id, {rn}, std::nullopt});
            places[static_cast<std::size_t>(r)].push_back(id);
        }
        if (kind != RoleKind::spontaneous) {
            int nobj = 1 + static_cast<int>(pick(rng, 2));
            for (int k = 1; k <= nobj; ++k) {
                std::string o = rn + std::to_string(k);
                m.universe.add_object(o, rn);
                m.initial.add(places[static_cast<std::size_t>(r)][0], {o});
            }
        }
    }
    std::string corr;
    if (nroles >= 2 && chance(rng, 0.6)) {
        corr = "Pab";
        m.net.add_place({corr, {"a", "b"}, std::nullopt});
    }

    int ntrans = 2 + static_cast<int>(pick(rng, static_cast<std::size_t>(std::max(1, opts.max_transitions - 1))));
    auto label = [&]() -> std::optional<std::string> {
        if (chance(rng, 0.2)) return std::nullopt;
        return labels[pick(rng, labels.size())];
    };
    auto place_of = [&](int r) { return places[static_cast<std::size_t>(r)][pick(rng, places[static_cast<std::size_t>(r)].size())]; };
    int made = 0;
    if (spontaneous) {
        m.net.add_transition({"t" + std::to_string(made++), std::nullopt, {}, {{places[0][0], {{"na"}}}}, std::nullopt});
    }
    bool corr_in = false, corr_out = false;
    while (made < ntrans) {
        std::string id = "t" + std::to_string(made);
        int shape = static_cast<int>(pick(rng, 5));
        Transition t{id, label(), {}, {}, std::nullopt};
        if (shape <= 1 || nroles == 1) {
            int r = static_cast<int>(pick(rng, static_cast<std::size_t>(nroles)));
            std::string v = "x" + role_names[static_cast<std::size_t>(r)];
            t.inputs.push_back({place_of(r), {{v}}});
            bool sink = r == 0 && spontaneous && chance(rng, 0.3);
            if (!sink) t.outputs.push_back({place_of(r), {{v}}});
        } else if (shape == 2 || corr.empty()) {
            int r1 = static_cast<int>(pick(rng, static_cast<std::size_t>(nroles)));
            int r2 = (r1 + 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(nroles - 1)))) % nroles;
            for (int r : {r1, r2}) {
                std::string v = "x" + role_names[static_cast<std::size_t>(r)];
                t.inputs.push_back({place_of(r), {{v}}});
                t.outputs.push_back({place_of(r), {{v}}});
            }
        } else if (shape == 3 || (corr_out && !corr_in)) {
            t.inputs.push_back({place_of(0), {{"xa"}}});
            t.inputs.push_back({place_of(1), {{"xb"}}});
            t.outputs.push_back({corr, {{"xa", "xb"}}});
            corr_out = true;
        } else {
            t.inputs.push_back({corr, {{"xa", "xb"}}});
            t.outputs.push_back({place_of(0), {{"xa"}}});
            t.outputs.push_back({place_of(1), {{"xb"}}});
            corr_in = true;
        }
        m.net.add_transition(std::move(t));
        ++made;
    }
    m.net.validate();

    // Random run; its end marking becomes the final marking. Prefer runs with
    // at least two visible firings.
    RandomInstance inst;
    int visible = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        FreshNames names(m);
        std::vector<TransitionFiring> seq;
        Marking mk = m.initial;
        int len = 2 + static_cast<int>(pick(rng, static_cast<std::size_t>(std::max(1, opts.max_run - 1))));
        visible = 0;
        for (int i = 0; i < len; ++i) {
            auto choices = all_choices(m, mk, true);
            if (choices.empty()) break;
            Choice c = choices[pick(rng, choices.size())];
            rename_fresh(m, c, names);
            TransitionFiring f{"", c.transition, c.mode};
            mk = fire(m, mk, f);
            if (!m.net.transition(c.transition).silent()) ++visible;
            seq.push_back(std::move(f));
        }
        m.final = mk;
        number_firings(seq);
        inst.run = execution_poset_from_sequence(seq);
        if (visible >= 2) break;
    }
    if (visible < 2) return std::nullopt;
    SystemLog clean = run_to_log(m, inst.run);

    // Noise.
    SystemLog l = clean;
    std::vector<IssueKind> noise{IssueKind::mi_e, IssueKind::in_e, IssueKind::mi_o, IssueKind::in_o, IssueKind::in_p};
    int rounds = static_cast<int>(pick(rng, 3));
    for (int i = 0; i < rounds && !l.empty(); ++i) {
        IssueSpec spec{noise[pick(rng, noise.size())], "*", {}};
        if (spec.kind == IssueKind::in_e && static_cast<int>(l.size()) >= opts.max_events) spec.kind = IssueKind::mi_e;
        try {
            l = inject(l, spec, rng());
        } catch (const TargetNotFound&) {
        }
    }
    while (static_cast<int>(l.size()) > opts.max_events) l = inject(l, {IssueKind::mi_e, "*", {}}, rng());
    inst.model = std::move(m);
    inst.log = std::move(l);
    return inst;
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (;;)
        if (auto inst = try_random_instance(rng, opts)) return std::move(*inst);
}

}  // namespace relalign
