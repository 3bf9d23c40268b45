// Exhaustive reference search working on the plain string-based API. Slow on
// purpose; only shares the cost functions with the main search.

#include <deque>
#include <functional>
#include <unordered_map>

#include "relalign/alignment.hpp"
#include "relalign/errors.hpp"

namespace relalign {

namespace {

using Block = std::vector<std::string>;  // distinct objects of one fragment

struct EvState {
    bool touched = false;
    std::vector<Block> blocks;
    std::vector<bool> done;

    bool finished() const {
        return touched && std::all_of(done.begin(), done.end(), [](bool b) { return b; });
    }
};

struct OState {
    Marking mk;
    std::vector<EvState> ev;
    std::set<std::string> minted;

    std::string key() const {
        std::string k = mk.to_string() + "|";
        for (const auto& e : ev) {
            if (!e.touched) {
                k += "-;";
                continue;
            }
            for (std::size_t i = 0; i < e.blocks.size(); ++i) {
                for (const auto& o : e.blocks[i]) k += o + ",";
                k += e.done[i] ? "+" : "?";
            }
            k += ";";
        }
        k += "|";
        for (const auto& o : minted) k += o + ",";
        return k;
    }
};

struct OEdge {
    int from;
    int to;
    Move move;
    int event = -1;
    int block = -1;
};

void set_partitions(const std::vector<std::string>& items, std::size_t i, std::vector<Block>& cur,
                    std::vector<std::vector<Block>>& out) {
    if (i == items.size()) {
        out.push_back(cur);
        return;
    }
    for (auto& b : cur) {
        b.push_back(items[i]);
        set_partitions(items, i + 1, cur, out);
        b.pop_back();
    }
    cur.push_back({items[i]});
    set_partitions(items, i + 1, cur, out);
    cur.pop_back();
}

}  // namespace

Alignment brute_force_align(const SystemLog& l, const ProcessModel& m, const CostParams& params_in, bool relaxed,
                            std::size_t bound, const std::set<std::string>& substitutable_roles,
                            const SearchOptions& opts) {
    CostParams params = params_in;
    params.scheme = relaxed ? CostScheme::relaxed : CostScheme::standard;
    RelaxedModel rm;
    if (relaxed) rm = build_relaxed_model(m);
    const ProcessModel& net_model = relaxed ? rm.model : m;
    const Tpnid& net = net_model.net;
    ObjectUniverse u = m.universe.merged(l.universe());
    const Marking target = final_target(l, m, opts.strict_final);
    const auto& events = l.events();

    std::set<std::string> log_objects, known;
    for (const auto& e : events)
        for (const auto& [o, _] : e.objects.entries()) log_objects.insert(o);
    auto initial_objects = m.initial.objects();
    known = log_objects;
    for (const auto& o : initial_objects) known.insert(o);
    for (const auto& o : m.final.objects()) known.insert(o);
    std::map<std::string, std::vector<std::string>> fresh_pool;
    for (const auto& v : net.variables()) {
        if (!v.fresh || fresh_pool.count(v.role)) continue;
        auto& pool = fresh_pool[v.role];
        for (const auto& o : log_objects)
            if (u.role_of(o) == v.role && !initial_objects.count(o)) pool.push_back(o);
        for (int k = 1, added = 0; added < opts.canonical_fresh; ++k) {
            auto name = fresh_object_name(v.role, k);
            if (known.count(name)) continue;
            pool.push_back(name);
            ++added;
        }
    }

    auto base_of = [&](const std::string& t) { return relaxed ? rm.base_of(t) : t; };
    auto is_corr = [&](const std::string& t) { return relaxed && rm.is_correlation(t); };
    auto is_proj = [&](const Transition& t) { return t.projection.has_value() && !is_corr(t.id); };

    // All modes of t in the marking, fresh variables ranging over the pool.
    auto modes_of = [&](const OState& s, const Transition& t) {
        std::vector<Mode> out;
        std::vector<std::string> fresh;
        for (const auto& v : net.vars_of(t))
            if (net.variable(v).fresh) fresh.push_back(v);
        std::set<std::string> seen;
        for (Mode md : enabled_modes(net_model, s.mk, t.id)) {
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == fresh.size()) {
                    for (const auto& v : fresh)
                        if (std::count_if(md.begin(), md.end(), [&](const auto& kv) { return kv.second == md[v]; }) > 1)
                            return;
                    if (!is_enabled(net_model, s.mk, t.id, md)) return;
                    std::string k;
                    for (const auto& [v, o] : md) k += v + "=" + o + ";";
                    if (seen.insert(k).second) out.push_back(md);
                    return;
                }
                for (const auto& c : fresh_pool[net.variable(fresh[i]).role]) {
                    if (s.minted.count(c)) continue;
                    md[fresh[i]] = c;
                    rec(i + 1);
                }
            };
            rec(0);
        }
        return out;
    };

    auto shape_for = [&](MoveKind kind, const Transition* t, const ObjectMultiset* frag, const Event* root,
                         int substituted, std::size_t mode_size) {
        MoveShape s;
        s.kind = kind;
        s.substituted = substituted;
        if (t) {
            s.silent = t->silent();
            s.correlation = is_corr(t->id);
            s.var_count = s.correlation ? 0 : static_cast<int>(m.net.vars_of(m.net.transition(base_of(t->id))).size());
            s.object_count = static_cast<int>(mode_size);
        }
        if (frag) {
            s.object_count = static_cast<int>(frag->size());
            if (!t) s.var_count = static_cast<int>(root->objects.size());
        }
        return s;
    };

    std::vector<OState> states;
    std::vector<std::size_t> depth;
    std::unordered_map<std::string, int> index;
    std::vector<OEdge> edges;

    OState init;
    init.mk = net_model.initial;
    init.ev.resize(events.size());
    states.push_back(init);
    depth.push_back(0);
    index[init.key()] = 0;

    auto add_state = [&](OState s, std::size_t d) {
        auto k = s.key();
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        if (states.size() >= opts.max_states) throw BudgetExceeded("oracle state budget exhausted");
        int id = static_cast<int>(states.size());
        states.push_back(std::move(s));
        depth.push_back(d);
        index[k] = id;
        return id;
    };

    std::deque<int> queue{0};
    while (!queue.empty()) {
        int si = queue.front();
        queue.pop_front();
        if (depth[static_cast<std::size_t>(si)] >= bound) continue;
        const std::size_t d = depth[static_cast<std::size_t>(si)] + 1;
        struct Fired {
            const Transition* t;
            Mode mode;
            Marking next;
            std::set<std::string> minted;
        };
        std::vector<Fired> fired;
        {
            const OState s = states[static_cast<std::size_t>(si)];
            for (const auto& t : net.transitions()) {
                if (!relaxed && t.projection) continue;
                for (const auto& md : modes_of(s, t)) {
                    TransitionFiring f{"", t.id, md};
                    Fired fr{&t, md, fire(net_model, s.mk, f), s.minted};
                    for (const auto& v : net.vars_of(t))
                        if (net.variable(v).fresh) fr.minted.insert(md.at(v));
                    fired.push_back(std::move(fr));
                }
            }
        }
        auto emit = [&](OState next, Move mv, int ev, int block) {
            bool fresh_state = !index.count(next.key());
            int to = add_state(std::move(next), d);
            edges.push_back({si, to, std::move(mv), ev, block});
            if (fresh_state) queue.push_back(to);
        };
        for (const auto& fr : fired) {
            OState next = states[static_cast<std::size_t>(si)];
            next.mk = fr.next;
            next.minted = fr.minted;
            Move mv;
            mv.kind = is_corr(fr.t->id) ? MoveKind::correlation_silent
                                        : (is_proj(*fr.t) ? MoveKind::relaxed_model : MoveKind::model);
            mv.firing = TransitionFiring{"", fr.t->id, fr.mode};
            mv.label = fr.t->label;
            mv.base_transition = base_of(fr.t->id);
            mv.silent = fr.t->silent();
            mv.cost = move_cost(shape_for(mv.kind, fr.t, nullptr, nullptr, 0, fr.mode.size()), params);
            emit(std::move(next), std::move(mv), -1, -1);
        }
        for (std::size_t ei = 0; ei < events.size(); ++ei) {
            const OState& s = states[static_cast<std::size_t>(si)];
            if (s.ev[ei].finished()) continue;
            bool ready = true;
            for (std::size_t pj = 0; pj < events.size(); ++pj)
                if (l.order().less(events[pj].id, events[ei].id) && !s.ev[pj].finished()) ready = false;
            if (!ready) continue;
            std::vector<std::vector<Block>> layouts;
            if (s.ev[ei].touched) {
                layouts.push_back(s.ev[ei].blocks);
            } else {
                auto support = events[ei].objects.support();
                Block distinct(support.begin(), support.end());
                if (relaxed) {
                    std::vector<Block> cur;
                    set_partitions(distinct, 0, cur, layouts);
                } else {
                    layouts.push_back({distinct});
                }
            }
            for (const auto& layout : layouts) {
                OState base = states[static_cast<std::size_t>(si)];
                if (!base.ev[ei].touched) {
                    base.ev[ei].touched = true;
                    base.ev[ei].blocks = layout;
                    base.ev[ei].done.assign(layout.size(), false);
                }
                for (std::size_t bi = 0; bi < layout.size(); ++bi) {
                    if (base.ev[ei].done[bi]) continue;
                    ObjectMultiset frag;
                    for (const auto& o : layout[bi]) frag.add(o, events[ei].objects.count(o));
                    bool whole = frag == events[ei].objects;
                    Event fe = events[ei];
                    fe.objects = frag;
                    OState next = base;
                    next.ev[ei].done[bi] = true;
                    {
                        Move mv;
                        mv.kind = whole ? MoveKind::log : MoveKind::relaxed_log;
                        mv.event = fe;
                        mv.cost = move_cost(shape_for(mv.kind, nullptr, &frag, &events[ei], 0, 0), params);
                        emit(next, std::move(mv), static_cast<int>(ei), static_cast<int>(bi));
                    }
                    for (const auto& fr : fired) {
                        if (fr.t->label != events[ei].activity) continue;
                        TransitionFiring f{"", fr.t->id, fr.mode};
                        ObjectMultiset fo = f.involved();
                        Move mv;
                        mv.event = fe;
                        mv.firing = f;
                        mv.label = fr.t->label;
                        mv.base_transition = base_of(fr.t->id);
                        int substituted = 0;
                        if (fo == frag) {
                            mv.kind = whole && !is_proj(*fr.t) ? MoveKind::sync : MoveKind::relaxed_sync;
                        } else {
                            std::set<std::string> differ;
                            const ObjectMultiset both = frag + fo;
                            for (const auto& [o, _] : both.entries())
                                if (frag.count(o) != fo.count(o)) {
                                    auto r = u.role_of(o);
                                    if (!r) differ.insert("");
                                    else differ.insert(*r);
                                }
                            if (differ.empty() || differ.count("")) continue;
                            bool allowed = std::all_of(differ.begin(), differ.end(),
                                                       [&](const std::string& r) { return substitutable_roles.count(r); });
                            if (!allowed || !potential_match(fe, fr.t->label, f, differ, u)) continue;
                            mv.kind = MoveKind::substitute_sync;
                            mv.substituted_roles = differ;
                            substituted = static_cast<int>(restrict_to_roles(u, frag, differ).size());
                        }
                        mv.cost = move_cost(shape_for(mv.kind, fr.t, &frag, &events[ei], substituted, fr.mode.size()),
                                            params);
                        OState n2 = next;
                        n2.mk = fr.next;
                        n2.minted = fr.minted;
                        emit(std::move(n2), std::move(mv), static_cast<int>(ei), static_cast<int>(bi));
                    }
                }
            }
        }
    }

    // Relax every edge until nothing improves.
    const std::size_t n = states.size();
    std::vector<std::optional<Rational>> dist(n);
    std::vector<int> via(n, -1);
    dist[0] = Rational(0);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t ei = 0; ei < edges.size(); ++ei) {
            const auto& e = edges[ei];
            if (!dist[static_cast<std::size_t>(e.from)]) continue;
            Rational c = *dist[static_cast<std::size_t>(e.from)] + e.move.cost;
            auto& dt = dist[static_cast<std::size_t>(e.to)];
            if (!dt || c < *dt) {
                dt = c;
                via[static_cast<std::size_t>(e.to)] = static_cast<int>(ei);
                changed = true;
            }
        }
    }

    int best = -1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = states[i];
        if (!dist[i] || !(s.mk == target)) continue;
        if (!std::all_of(s.ev.begin(), s.ev.end(), [](const EvState& e) { return e.finished(); })) continue;
        if (best < 0 || *dist[i] < *dist[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    if (best < 0) throw NoAlignment("no alignment within " + std::to_string(bound) + " moves");

    std::vector<const OEdge*> path;
    for (int s = best; s != 0; s = edges[static_cast<std::size_t>(via[static_cast<std::size_t>(s)])].from)
        path.push_back(&edges[static_cast<std::size_t>(via[static_cast<std::size_t>(s)])]);
    std::reverse(path.begin(), path.end());

    Alignment al;
    al.relaxed = relaxed;
    std::map<std::string, int> fired_count;
    std::map<int, int> frag_count;
    std::vector<std::string> ids;
    std::vector<std::set<std::string>> objs;
    std::vector<int> roots;
    for (const OEdge* e : path) {
        Move mv = e->move;
        mv.id = "m" + std::to_string(al.moves.size() + 1);
        std::set<std::string> os;
        if (mv.firing) {
            mv.firing->id = mv.firing->transition + "#" + std::to_string(++fired_count[mv.firing->transition]);
            for (const auto& [_, o] : mv.firing->mode) os.insert(o);
        }
        if (mv.event) {
            const Event& root = events[static_cast<std::size_t>(e->event)];
            if (!(mv.event->objects == root.objects)) {
                mv.event->id = root.id + "#" + std::to_string(++frag_count[e->event]);
                mv.event->parent = root.id;
                mv.event->projection_of = root.objects;
            }
            for (const auto& [o, _] : mv.event->objects.entries()) os.insert(o);
        }
        ids.push_back(mv.id);
        objs.push_back(std::move(os));
        roots.push_back(e->event);
        al.total_cost += mv.cost;
        al.moves.push_back(std::move(mv));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < objs.size(); ++i)
        for (std::size_t j = i + 1; j < objs.size(); ++j) {
            bool linked = objs[i].empty() || objs[j].empty();
            for (const auto& o : objs[i]) linked = linked || objs[j].count(o) > 0;
            if (!linked && roots[i] >= 0 && roots[j] >= 0)
                linked = l.order().less(events[static_cast<std::size_t>(roots[i])].id,
                                        events[static_cast<std::size_t>(roots[j])].id);
            if (linked) pairs.emplace_back(i, j);
        }
    al.order = Poset::from_index_pairs(std::move(ids), pairs);
    return al;
}

}  // namespace relalign
