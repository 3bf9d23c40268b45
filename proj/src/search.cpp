// Uniform-cost search over the product of log cuts and markings.
//
// Objects, places and transitions are interned; a marking is a sorted vector
// of fixed-width tokens and a search state is (remaining objects per event,
// marking, minted fresh objects), serialized into a string key for
// deduplication.

#include <array>
#include <cstdint>
#include <cstring>
#include <deque>
#include <queue>
#include <unordered_map>

#include "relalign/alignment.hpp"
#include "relalign/errors.hpp"

namespace relalign {

namespace {

constexpr int kMaxArity = 4;

struct Tok {
    std::int32_t place = 0;
    std::int32_t n = 0;
    std::array<std::int32_t, kMaxArity> o{};
    std::int32_t count = 0;

    bool same(const Tok& b) const { return place == b.place && n == b.n && o == b.o; }
    bool before(const Tok& b) const {
        if (place != b.place) return place < b.place;
        if (n != b.n) return n < b.n;
        return o < b.o;
    }
};

using PMarking = std::vector<Tok>;

struct Slot {
    int place = 0;
    int n = 0;
    std::array<int, kMaxArity> var{};
};

struct CTrans {
    const Transition* src = nullptr;
    std::string base;
    int label = -1;  // activity id, -1 when silent
    bool projected = false;
    bool correlation = false;
    int var_count = 0;  // |Var| of the base transition
    std::vector<std::string> var_names;
    std::vector<int> var_role;
    std::vector<int> fresh_vars;
    std::vector<Slot> in, out;
};

struct CEvent {
    const Event* src = nullptr;
    int activity = -1;
    std::vector<int> objs;  // distinct, ascending
    std::vector<int> mult;
    std::vector<int> preds;
    std::uint32_t full = 0;
};

struct State {
    std::vector<std::uint32_t> rem;
    PMarking mk;
    std::uint64_t minted = 0;
};

struct CMove {
    MoveKind kind = MoveKind::sync;
    int event = -1;
    std::uint32_t part = 0;
    int trans = -1;
    std::vector<int> binding;
    std::uint32_t subst_roles = 0;
    int substituted = 0;
    Rational cost;
};

struct Node {
    int parent = -1;
    CMove move;
    State state;
    Rational g;
    int dev = 0;
    int side = 0;
    int rel = 0;
};

struct QItem {
    Rational f;
    int dev;
    int side;
    int rel;
    std::uint64_t seq;
    int node;
};

struct QOrder {
    bool operator()(const QItem& a, const QItem& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.dev != b.dev) return a.dev > b.dev;
        if (a.side != b.side) return a.side > b.side;
        if (a.rel != b.rel) return a.rel > b.rel;
        return a.seq > b.seq;
    }
};

bool is_deviating(MoveKind k, bool silent) {
    if (k == MoveKind::sync || k == MoveKind::correlation_silent) return false;
    if ((k == MoveKind::model || k == MoveKind::relaxed_model) && silent) return false;
    return true;
}

bool is_relaxed_kind(MoveKind k) {
    return k == MoveKind::relaxed_sync || k == MoveKind::relaxed_log || k == MoveKind::relaxed_model ||
           k == MoveKind::substitute_sync || k == MoveKind::correlation_silent;
}

class Engine {
public:
    Engine(const SystemLog& l, const ProcessModel& m, const CostParams& params, bool relaxed,
           const std::set<std::string>& substitutable, const SearchOptions& opts)
        : log_(l), base_(m), params_(params), relaxed_(relaxed), opts_(opts) {
        if (relaxed_) rm_ = build_relaxed_model(m);
        const ProcessModel& net_model = relaxed_ ? rm_.model : m;
        model_ = &net_model;
        compile_objects();
        compile_net();
        compile_log();
        for (const auto& r : substitutable) {
            auto it = role_id_.find(r);
            if (it != role_id_.end()) subst_mask_ |= 1u << it->second;
        }
        target_ = to_packed(final_target(l, m, opts.strict_final));
    }

    Alignment run();

private:
    int intern_object(const std::string& name) {
        auto it = obj_id_.find(name);
        if (it != obj_id_.end()) return it->second;
        int id = static_cast<int>(objects_.size());
        objects_.push_back(name);
        obj_id_[name] = id;
        auto role = universe_.role_of(name);
        obj_role_.push_back(role ? role_index(*role) : -1);
        return id;
    }

    int role_index(const std::string& r) {
        auto it = role_id_.find(r);
        if (it != role_id_.end()) return it->second;
        int id = static_cast<int>(roles_.size());
        if (id >= 32) throw Error("at most 32 roles are supported");
        roles_.push_back(r);
        role_id_[r] = id;
        return id;
    }

    int activity_index(const std::string& a) {
        auto [it, inserted] = activity_id_.emplace(a, static_cast<int>(activity_id_.size()));
        return it->second;
    }

    void compile_objects() {
        universe_ = base_.universe.merged(log_.universe());
        for (const auto& r : universe_.roles()) role_index(r.name);
        for (const auto* mk : {&base_.initial, &base_.final})
            for (const auto& o : mk->objects()) intern_object(o);
        std::set<std::string> log_objects;
        for (const auto& e : log_.events())
            for (const auto& [o, _] : e.objects.entries()) {
                intern_object(o);
                log_objects.insert(o);
            }
        // Fresh candidates: log objects of a role that some fresh variable
        // mints and that are not already in the initial marking, plus a few
        // canonical names.
        std::set<std::string> fresh_roles;
        for (const auto& v : model_->net.variables())
            if (v.fresh) fresh_roles.insert(v.role);
        auto initial_objects = base_.initial.objects();
        for (const auto& r : fresh_roles) {
            int rid = role_index(r);
            auto& cands = candidates_[rid];
            for (const auto& o : log_objects)
                if (universe_.role_of(o) == r && !initial_objects.count(o)) cands.push_back(intern_object(o));
            for (int k = 1, added = 0; added < opts_.canonical_fresh; ++k) {
                auto name = fresh_object_name(r, k);
                if (obj_id_.count(name) || initial_objects.count(name)) continue;
                cands.push_back(intern_object(name));
                ++added;
            }
            for (int c : cands) {
                if (cand_bit_.count(c)) continue;
                int bit = static_cast<int>(cand_bit_.size());
                if (bit >= 64) throw Error("too many fresh object candidates");
                cand_bit_[c] = bit;
            }
        }
    }

    void compile_net() {
        const Tpnid& net = model_->net;
        for (const auto& p : net.places()) {
            if (p.type.size() > kMaxArity) throw Error("place " + p.id + " has more than 4 roles");
            place_id_[p.id] = static_cast<int>(place_names_.size());
            place_names_.push_back(p.id);
        }
        for (const auto& t : net.transitions()) {
            CTrans c;
            c.src = &t;
            c.correlation = relaxed_ && rm_.is_correlation(t.id);
            c.base = relaxed_ ? rm_.base_of(t.id) : t.id;
            c.projected = t.projection.has_value() && !c.correlation;
            c.label = t.label ? activity_index(*t.label) : -1;
            c.var_names = net.vars_of(t);
            for (const auto& v : c.var_names) {
                const Variable& var = net.variable(v);
                c.var_role.push_back(role_index(var.role));
                if (var.fresh) c.fresh_vars.push_back(static_cast<int>(c.var_role.size()) - 1);
            }
            c.var_count = c.correlation ? 0 : static_cast<int>(base_.net.vars_of(base_.net.transition(c.base)).size());
            auto slots = [&](const std::vector<Arc>& arcs, std::vector<Slot>& out) {
                for (const auto& a : arcs) {
                    for (const auto& seq : a.vars) {
                        Slot s;
                        s.place = place_id_.at(a.place);
                        s.n = static_cast<int>(seq.size());
                        for (std::size_t i = 0; i < seq.size(); ++i) {
                            auto it = std::find(c.var_names.begin(), c.var_names.end(), seq[i]);
                            s.var[i] = static_cast<int>(it - c.var_names.begin());
                        }
                        out.push_back(s);
                    }
                }
            };
            slots(t.inputs, c.in);
            slots(t.outputs, c.out);
            trans_.push_back(std::move(c));
        }
    }

    void compile_log() {
        const auto& evs = log_.events();
        std::map<std::string, int> idx;
        for (std::size_t i = 0; i < evs.size(); ++i) idx[evs[i].id] = static_cast<int>(i);
        for (const auto& e : evs) {
            CEvent c;
            c.src = &e;
            c.activity = activity_index(e.activity);
            std::vector<std::pair<int, int>> om;
            for (const auto& [o, k] : e.objects.entries()) om.emplace_back(intern_object(o), k);
            std::sort(om.begin(), om.end());
            if (om.size() > 32) throw Error("event " + e.id + " has more than 32 distinct objects");
            for (auto [o, k] : om) {
                c.objs.push_back(o);
                c.mult.push_back(k);
            }
            c.full = om.size() == 32 ? ~0u : ((1u << om.size()) - 1);
            events_.push_back(std::move(c));
        }
        for (const auto& [a, b] : log_.order().order()) events_[idx.at(b)].preds.push_back(idx.at(a));
    }

    PMarking to_packed(const Marking& mk) {
        PMarking out;
        for (const auto& [place, bag] : mk.places()) {
            auto pit = place_id_.find(place);
            if (pit == place_id_.end()) throw Error("marking uses unknown place " + place);
            for (const auto& [tok, c] : bag) {
                Tok t;
                t.place = pit->second;
                t.n = static_cast<int>(tok.size());
                for (std::size_t i = 0; i < tok.size(); ++i) t.o[i] = intern_object(tok[i]);
                t.count = c;
                insert(out, t, c);
            }
        }
        return out;
    }

    static void insert(PMarking& mk, const Tok& t, int count) {
        auto it = std::lower_bound(mk.begin(), mk.end(), t, [](const Tok& a, const Tok& b) { return a.before(b); });
        if (it != mk.end() && it->same(t)) {
            it->count += count;
        } else {
            Tok c = t;
            c.count = count;
            mk.insert(it, c);
        }
    }

    static bool remove(PMarking& mk, const Tok& t) {
        auto it = std::lower_bound(mk.begin(), mk.end(), t, [](const Tok& a, const Tok& b) { return a.before(b); });
        if (it == mk.end() || !it->same(t)) return false;
        if (--it->count == 0) mk.erase(it);
        return true;
    }

    static Tok make_tok(const Slot& s, const std::vector<int>& b) {
        Tok t;
        t.place = s.place;
        t.n = s.n;
        for (int i = 0; i < s.n; ++i) t.o[i] = b[s.var[i]];
        return t;
    }

    PMarking fire(const CTrans& t, const PMarking& mk, const std::vector<int>& b) const {
        PMarking next = mk;
        for (const auto& s : t.in)
            if (!remove(next, make_tok(s, b))) throw Error("internal: firing a disabled transition");
        for (const auto& s : t.out) insert(next, make_tok(s, b), 1);
        return next;
    }

    template <typename F>
    void enum_modes(const CTrans& t, const State& st, F&& emit) const {
        std::vector<int> b(t.var_names.size(), -1);
        std::vector<int> used(st.mk.size(), 0);
        enum_slots(t, st, 0, b, used, emit);
    }

    template <typename F>
    void enum_slots(const CTrans& t, const State& st, std::size_t i, std::vector<int>& b, std::vector<int>& used,
                    F& emit) const {
        if (i == t.in.size()) {
            enum_fresh(t, st, 0, b, emit);
            return;
        }
        const Slot& s = t.in[i];
        Tok probe;
        probe.place = s.place;
        probe.n = 0;
        auto lo = std::lower_bound(st.mk.begin(), st.mk.end(), probe,
                                   [](const Tok& a, const Tok& c) { return a.place < c.place; });
        for (auto it = lo; it != st.mk.end() && it->place == s.place; ++it) {
            std::size_t k = static_cast<std::size_t>(it - st.mk.begin());
            if (it->n != s.n || used[k] >= it->count) continue;
            int newly[kMaxArity];
            int nn = 0;
            bool ok = true;
            for (int j = 0; j < s.n; ++j) {
                int& slot = b[s.var[j]];
                if (slot == -1) {
                    slot = it->o[j];
                    newly[nn++] = s.var[j];
                } else if (slot != it->o[j]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                ++used[k];
                enum_slots(t, st, i + 1, b, used, emit);
                --used[k];
            }
            for (int j = 0; j < nn; ++j) b[newly[j]] = -1;
        }
    }

    template <typename F>
    void enum_fresh(const CTrans& t, const State& st, std::size_t i, std::vector<int>& b, F& emit) const {
        if (i == t.fresh_vars.size()) {
            emit(b);
            return;
        }
        int v = t.fresh_vars[i];
        auto it = candidates_.find(t.var_role[v]);
        if (it == candidates_.end()) return;
        for (int c : it->second) {
            if (st.minted & (std::uint64_t{1} << cand_bit_.at(c))) continue;
            if (std::find(b.begin(), b.end(), c) != b.end()) continue;
            b[v] = c;
            enum_fresh(t, st, i + 1, b, emit);
            b[v] = -1;
        }
    }

    std::string key(const State& s) const {
        std::string k;
        k.reserve(s.rem.size() * 4 + s.mk.size() * sizeof(Tok) + 8);
        k.append(reinterpret_cast<const char*>(s.rem.data()), s.rem.size() * sizeof(std::uint32_t));
        for (const auto& t : s.mk) {
            std::int32_t buf[2 + kMaxArity + 1] = {t.place, t.n};
            for (int i = 0; i < kMaxArity; ++i) buf[2 + i] = i < t.n ? t.o[i] : -1;
            buf[2 + kMaxArity] = t.count;
            k.append(reinterpret_cast<const char*>(buf), sizeof(buf));
        }
        k.append(reinterpret_cast<const char*>(&s.minted), sizeof(s.minted));
        return k;
    }

    bool goal(const State& s) const {
        for (auto r : s.rem)
            if (r) return false;
        if (s.mk.size() != target_.size()) return false;
        for (std::size_t i = 0; i < s.mk.size(); ++i)
            if (!s.mk[i].same(target_[i]) || s.mk[i].count != target_[i].count) return false;
        return true;
    }

    std::vector<int> part_objects(const CEvent& e, std::uint32_t part) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < e.objs.size(); ++i)
            if (part & (1u << i))
                for (int k = 0; k < e.mult[i]; ++k) out.push_back(e.objs[i]);
        return out;
    }

    static int popcount_mult(const CEvent& e, std::uint32_t part) {
        int n = 0;
        for (std::size_t i = 0; i < e.objs.size(); ++i)
            if (part & (1u << i)) n += e.mult[i];
        return n;
    }

    // Returns the swapped role mask (0 when not a substitute match) and the
    // number of swapped objects.
    std::pair<std::uint32_t, int> substitute_match(const std::vector<int>& p, const std::vector<int>& f) const {
        if (p.size() != f.size()) return {0, 0};
        std::uint32_t differ = 0;
        std::vector<int> pr(roles_.size(), 0), fr(roles_.size(), 0);
        std::vector<int> pn, fn;
        std::set_difference(p.begin(), p.end(), f.begin(), f.end(), std::back_inserter(pn));
        std::set_difference(f.begin(), f.end(), p.begin(), p.end(), std::back_inserter(fn));
        for (int o : pn) {
            int r = obj_role_[o];
            if (r < 0) return {0, 0};
            differ |= 1u << r;
            ++pr[r];
        }
        for (int o : fn) {
            int r = obj_role_[o];
            if (r < 0) return {0, 0};
            differ |= 1u << r;
            ++fr[r];
        }
        if (!differ || (differ & ~subst_mask_)) return {0, 0};
        int swapped = 0;
        for (std::size_t r = 0; r < roles_.size(); ++r) {
            if (!(differ & (1u << r))) continue;
            // Within a swapped role the two sides must be disjoint.
            int pe = 0, fe = 0;
            for (int o : p)
                if (obj_role_[o] == static_cast<int>(r)) ++pe;
            for (int o : f)
                if (obj_role_[o] == static_cast<int>(r)) ++fe;
            if (pe != fe || pr[r] != pe || fr[r] != fe) return {0, 0};
            swapped += pe;
        }
        return {differ, swapped};
    }

    Rational cost_of(const CMove& mv, const CTrans* t, const CEvent* e) const {
        MoveShape s;
        s.kind = mv.kind;
        if (t) {
            s.silent = t->label < 0;
            s.correlation = t->correlation;
            s.var_count = t->var_count;
            s.object_count = static_cast<int>(mv.binding.size());
        }
        if (e) {
            s.object_count = popcount_mult(*e, mv.part);
            if (!t) s.var_count = popcount_mult(*e, e->full);
        }
        s.substituted = mv.substituted;
        return move_cost(s, params_);
    }

    // Lower bound per object: the fewest deviating moves that must involve
    // the object, from the object's own remaining events and token places.
    // Computed on a one-object abstraction of the net and memoized for every
    // reachable abstract state.
    struct ObjStep {
        std::vector<int> in, out;  // places, sorted
        bool mint = false;
        int label = -1;
        bool free = false;  // silent or correlation
    };

    struct ObjBound {
        bool active = false;
        std::vector<std::pair<int, int>> events;  // (event, bit within the event)
        std::vector<std::uint32_t> preds;         // per o-event, mask of earlier o-events
        std::vector<int> event_activity;
        int cand_bit = -1;
        std::vector<int> target;
        std::unordered_map<std::string, int> dist;
    };

    static constexpr int kInf = 1 << 29;
    static constexpr std::size_t kObjStateCap = 200000;

    static std::string obj_key(std::uint32_t rem, bool minted, const std::vector<int>& places) {
        std::string k(reinterpret_cast<const char*>(&rem), sizeof(rem));
        k.push_back(minted ? 1 : 0);
        k.append(reinterpret_cast<const char*>(places.data()), places.size() * sizeof(int));
        return k;
    }

    std::vector<ObjStep> object_steps(int role) const {
        std::vector<ObjStep> steps;
        for (const auto& t : trans_) {
            std::vector<int> vars;
            for (std::size_t v = 0; v < t.var_role.size(); ++v)
                if (t.var_role[v] == role) vars.push_back(static_cast<int>(v));
            if (vars.size() > 8) continue;
            for (std::uint32_t sub = 1; sub < (1u << vars.size()); ++sub) {
                std::vector<int> bound;
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (sub & (1u << i)) bound.push_back(vars[i]);
                int fresh = 0;
                for (int v : bound)
                    if (std::find(t.fresh_vars.begin(), t.fresh_vars.end(), v) != t.fresh_vars.end()) ++fresh;
                if (fresh && bound.size() > 1) continue;
                ObjStep s;
                s.mint = fresh > 0;
                s.label = t.label;
                s.free = t.label < 0 || t.correlation;
                auto touch = [&](const Slot& sl) {
                    for (int j = 0; j < sl.n; ++j)
                        if (std::find(bound.begin(), bound.end(), sl.var[j]) != bound.end()) return true;
                    return false;
                };
                for (const auto& sl : t.in)
                    if (touch(sl)) s.in.push_back(sl.place);
                for (const auto& sl : t.out)
                    if (touch(sl)) s.out.push_back(sl.place);
                if (!s.mint && s.in.empty()) continue;
                std::sort(s.in.begin(), s.in.end());
                std::sort(s.out.begin(), s.out.end());
                steps.push_back(std::move(s));
            }
        }
        return steps;
    }

    std::vector<int> places_of(const PMarking& mk, int o) const {
        std::vector<int> out;
        for (const auto& t : mk) {
            bool has = false;
            for (int i = 0; i < t.n && !has; ++i) has = t.o[i] == o;
            if (has)
                for (int c = 0; c < t.count; ++c) out.push_back(t.place);
        }
        return out;
    }

    void build_bounds(const PMarking& initial) {
        bounds_.assign(objects_.size(), {});
        std::set<int> canonical;
        for (const auto& [role, cands] : candidates_)
            for (int c : cands)
                if (!universe_.objects().count(objects_[static_cast<std::size_t>(c)])) canonical.insert(c);
        std::map<int, std::vector<ObjStep>> steps_by_role;
        for (std::size_t o = 0; o < objects_.size(); ++o) {
            int role = obj_role_[o];
            if (role < 0 || (subst_mask_ & (1u << role)) || canonical.count(static_cast<int>(o))) continue;
            ObjBound& b = bounds_[o];
            for (std::size_t ei = 0; ei < events_.size(); ++ei) {
                const auto& objs = events_[ei].objs;
                auto it = std::find(objs.begin(), objs.end(), static_cast<int>(o));
                if (it != objs.end()) {
                    b.events.emplace_back(static_cast<int>(ei), static_cast<int>(it - objs.begin()));
                    b.event_activity.push_back(events_[ei].activity);
                }
            }
            if (b.events.size() > 20) continue;
            b.preds.assign(b.events.size(), 0);
            for (std::size_t i = 0; i < b.events.size(); ++i)
                for (std::size_t j = 0; j < b.events.size(); ++j)
                    if (log_.order().less(events_[static_cast<std::size_t>(b.events[j].first)].src->id,
                                          events_[static_cast<std::size_t>(b.events[i].first)].src->id))
                        b.preds[i] |= 1u << j;
            auto cb = cand_bit_.find(static_cast<int>(o));
            b.cand_bit = cb == cand_bit_.end() ? -1 : cb->second;
            b.target = places_of(target_, static_cast<int>(o));
            if (!steps_by_role.count(role)) steps_by_role[role] = object_steps(role);
            b.active = explore_object(b, steps_by_role[role], places_of(initial, static_cast<int>(o)));
            if (!b.active) b.dist.clear();
        }
    }

    // Forward enumeration of the abstract states, then a 0-1 shortest path
    // backwards from the goal states.
    bool explore_object(ObjBound& b, const std::vector<ObjStep>& steps, std::vector<int> start) {
        struct AState {
            std::uint32_t rem;
            bool minted;
            std::vector<int> places;
        };
        std::vector<AState> states;
        std::unordered_map<std::string, int> index;
        std::vector<std::vector<std::pair<int, int>>> rev;  // to -> (from, cost)
        const std::uint32_t full = b.events.size() == 32 ? ~0u : ((1u << b.events.size()) - 1);
        std::sort(start.begin(), start.end());
        auto add = [&](AState s) -> int {
            auto k = obj_key(s.rem, s.minted, s.places);
            auto it = index.find(k);
            if (it != index.end()) return it->second;
            int id = static_cast<int>(states.size());
            index.emplace(std::move(k), id);
            states.push_back(std::move(s));
            rev.emplace_back();
            return id;
        };
        add({full, false, start});
        for (std::size_t si = 0; si < states.size(); ++si) {
            if (states.size() > kObjStateCap) return false;
            const AState s = states[si];
            auto link = [&](AState n, int cost) {
                int to = add(std::move(n));
                rev[static_cast<std::size_t>(to)].emplace_back(static_cast<int>(si), cost);
            };
            std::vector<int> ready;
            for (std::size_t i = 0; i < b.events.size(); ++i)
                if ((s.rem & (1u << i)) && !(s.rem & b.preds[i])) ready.push_back(static_cast<int>(i));
            for (int i : ready) link({s.rem & ~(1u << i), s.minted, s.places}, 1);
            for (const auto& st : steps) {
                std::vector<int> next;
                if (st.mint) {
                    if (b.cand_bit < 0 || s.minted || !s.places.empty()) continue;
                    next = s.places;
                } else {
                    if (!std::includes(s.places.begin(), s.places.end(), st.in.begin(), st.in.end())) continue;
                    std::set_difference(s.places.begin(), s.places.end(), st.in.begin(), st.in.end(),
                                        std::back_inserter(next));
                }
                std::vector<int> merged;
                std::merge(next.begin(), next.end(), st.out.begin(), st.out.end(), std::back_inserter(merged));
                bool minted = s.minted || st.mint;
                link({s.rem, minted, merged}, st.free ? 0 : 1);
                if (st.label >= 0)
                    for (int i : ready)
                        if (b.event_activity[static_cast<std::size_t>(i)] == st.label)
                            link({s.rem & ~(1u << i), minted, merged}, 0);
            }
        }
        std::vector<int> dist(states.size(), kInf);
        std::deque<int> dq;
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i].rem == 0 && states[i].places == b.target) {
                dist[i] = 0;
                dq.push_back(static_cast<int>(i));
            }
        while (!dq.empty()) {
            int u = dq.front();
            dq.pop_front();
            for (auto [from, cost] : rev[static_cast<std::size_t>(u)]) {
                int nd = dist[static_cast<std::size_t>(u)] + cost;
                if (nd < dist[static_cast<std::size_t>(from)]) {
                    dist[static_cast<std::size_t>(from)] = nd;
                    if (cost == 0) dq.push_front(from);
                    else dq.push_back(from);
                }
            }
        }
        for (const auto& [k, id] : index) b.dist.emplace(k, dist[static_cast<std::size_t>(id)]);
        return true;
    }

    // kInf when some object can no longer reach its goal.
    int deviation_bound(const State& s) const {
        if (!use_bound_) return 0;
        int sum = 0, mx = 0;
        std::vector<std::vector<int>> places(objects_.size());
        for (const auto& t : s.mk) {
            for (int i = 0; i < t.n; ++i) {
                int o = t.o[i];
                bool dup = false;
                for (int j = 0; j < i; ++j) dup = dup || t.o[j] == o;
                if (dup || !bounds_[static_cast<std::size_t>(o)].active) continue;
                for (int c = 0; c < t.count; ++c) places[static_cast<std::size_t>(o)].push_back(t.place);
            }
        }
        for (std::size_t o = 0; o < objects_.size(); ++o) {
            const ObjBound& b = bounds_[o];
            if (!b.active) continue;
            std::uint32_t rem = 0;
            for (std::size_t i = 0; i < b.events.size(); ++i)
                if (s.rem[static_cast<std::size_t>(b.events[i].first)] & (1u << b.events[i].second)) rem |= 1u << i;
            bool minted = b.cand_bit >= 0 && (s.minted & (std::uint64_t{1} << b.cand_bit));
            auto& pl = places[o];
            std::sort(pl.begin(), pl.end());
            auto it = b.dist.find(obj_key(rem, minted, pl));
            if (it == b.dist.end()) continue;
            if (it->second >= kInf) return kInf;
            sum += it->second;
            mx = std::max(mx, it->second);
        }
        return relaxed_ ? sum : mx;
    }

    void expand(int node_index);
    void push(int parent, CMove mv, State next);
    Alignment reconstruct(int node_index) const;

    const SystemLog& log_;
    const ProcessModel& base_;
    CostParams params_;
    bool relaxed_;
    SearchOptions opts_;

    bool disfavored(MoveKind k, bool silent) const {
        switch (opts_.tie_break) {
            case TieBreak::fewer_log_moves: return is_log_family(k);
            case TieBreak::fewer_model_moves:
                return (k == MoveKind::model || k == MoveKind::relaxed_model) && !silent;
            case TieBreak::none: return false;
        }
        return false;
    }
    RelaxedModel rm_;
    const ProcessModel* model_ = nullptr;
    ObjectUniverse universe_;

    std::vector<std::string> objects_;
    std::map<std::string, int> obj_id_;
    std::vector<int> obj_role_;
    std::vector<std::string> roles_;
    std::map<std::string, int> role_id_;
    std::map<std::string, int> activity_id_;
    std::map<int, std::vector<int>> candidates_;
    std::map<int, int> cand_bit_;
    std::vector<std::string> place_names_;
    std::map<std::string, int> place_id_;
    std::vector<CTrans> trans_;
    std::vector<CEvent> events_;
    std::uint32_t subst_mask_ = 0;
    PMarking target_;
    std::vector<ObjBound> bounds_;
    bool use_bound_ = true;
    Rational min_weight_;

    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> best_;
    std::priority_queue<QItem, std::vector<QItem>, QOrder> open_;
    std::uint64_t seq_ = 0;
};

void Engine::push(int parent, CMove mv, State next) {
    const Node& p = nodes_[static_cast<std::size_t>(parent)];
    const CTrans* t = mv.trans >= 0 ? &trans_[static_cast<std::size_t>(mv.trans)] : nullptr;
    Rational g = p.g + mv.cost;
    int dev = p.dev + (is_deviating(mv.kind, t && t->label < 0) ? 1 : 0);
    int side = p.side + (disfavored(mv.kind, t && t->label < 0) ? 1 : 0);
    int rel = p.rel + (is_relaxed_kind(mv.kind) ? 1 : 0);
    auto k = key(next);
    auto it = best_.find(k);
    if (it != best_.end()) {
        const Node& old = nodes_[static_cast<std::size_t>(it->second)];
        if (std::tie(old.g, old.dev, old.side, old.rel) <= std::tie(g, dev, side, rel)) return;
    } else if (best_.size() >= opts_.max_states) {
        throw BudgetExceeded("state budget of " + std::to_string(opts_.max_states) + " exhausted");
    }
    int h = deviation_bound(next);
    if (h >= kInf) return;
    Node n{parent, std::move(mv), std::move(next), g, dev, side, rel};
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    best_[k] = idx;
    open_.push({g + min_weight_ * Rational(h), dev, side, rel, seq_++, idx});
}

void Engine::expand(int node_index) {
    const State st = nodes_[static_cast<std::size_t>(node_index)].state;

    struct Enabled {
        int trans;
        std::vector<int> binding;
        std::vector<int> objs;
    };
    std::vector<Enabled> enabled;
    for (std::size_t ti = 0; ti < trans_.size(); ++ti) {
        enum_modes(trans_[ti], st, [&](const std::vector<int>& b) {
            std::vector<int> objs = b;
            std::sort(objs.begin(), objs.end());
            enabled.push_back({static_cast<int>(ti), b, std::move(objs)});
        });
    }

    auto minted_after = [&](const CTrans& t, const std::vector<int>& b) {
        std::uint64_t m = st.minted;
        for (int v : t.fresh_vars) m |= std::uint64_t{1} << cand_bit_.at(b[v]);
        return m;
    };

    // Log-side and synchronous moves.
    for (std::size_t ei = 0; ei < events_.size(); ++ei) {
        const CEvent& e = events_[ei];
        std::uint32_t rem = st.rem[ei];
        if (!rem) continue;
        bool ready = true;
        for (int p : e.preds)
            if (st.rem[static_cast<std::size_t>(p)]) {
                ready = false;
                break;
            }
        if (!ready) continue;
        for (std::uint32_t part = rem; part; part = (part - 1) & rem) {
            bool whole = part == e.full;
            if (!relaxed_ && !whole) continue;
            std::vector<int> pobjs = part_objects(e, part);
            State next = st;
            next.rem[ei] = rem & ~part;
            {
                CMove mv;
                mv.kind = whole ? MoveKind::log : MoveKind::relaxed_log;
                mv.event = static_cast<int>(ei);
                mv.part = part;
                mv.cost = cost_of(mv, nullptr, &e);
                push(node_index, std::move(mv), next);
            }
            for (const auto& en : enabled) {
                const CTrans& t = trans_[static_cast<std::size_t>(en.trans)];
                if (t.label != e.activity) continue;
                if (!relaxed_ && t.projected) continue;
                CMove mv;
                mv.event = static_cast<int>(ei);
                mv.part = part;
                mv.trans = en.trans;
                mv.binding = en.binding;
                if (en.objs == pobjs) {
                    mv.kind = (whole && !t.projected) ? MoveKind::sync : MoveKind::relaxed_sync;
                } else if (subst_mask_) {
                    auto [roles, swapped] = substitute_match(pobjs, en.objs);
                    if (!roles) continue;
                    mv.kind = MoveKind::substitute_sync;
                    mv.subst_roles = roles;
                    mv.substituted = swapped;
                } else {
                    continue;
                }
                mv.cost = cost_of(mv, &t, &e);
                State n2 = next;
                n2.mk = fire(t, st.mk, en.binding);
                n2.minted = minted_after(t, en.binding);
                push(node_index, std::move(mv), std::move(n2));
            }
        }
    }

    // Model-side moves.
    for (const auto& en : enabled) {
        const CTrans& t = trans_[static_cast<std::size_t>(en.trans)];
        CMove mv;
        mv.kind = t.correlation ? MoveKind::correlation_silent : (t.projected ? MoveKind::relaxed_model : MoveKind::model);
        mv.trans = en.trans;
        mv.binding = en.binding;
        mv.cost = cost_of(mv, &t, nullptr);
        State next = st;
        next.mk = fire(t, st.mk, en.binding);
        next.minted = minted_after(t, en.binding);
        push(node_index, std::move(mv), std::move(next));
    }
}

Alignment Engine::run() {
    State init;
    init.rem.reserve(events_.size());
    for (const auto& e : events_) init.rem.push_back(e.full);
    init.mk = to_packed(model_->initial);
    min_weight_ = std::min(params_.log_weight, params_.model_weight);
    if (min_weight_ < Rational(0)) min_weight_ = Rational(0);
    build_bounds(init.mk);
    if (deviation_bound(init) >= kInf) throw NoAlignment("the final marking is unreachable for this log");
    nodes_.push_back(Node{-1, {}, init, Rational(0), 0, 0, 0});
    best_[key(init)] = 0;
    open_.push({Rational(0), 0, 0, 0, seq_++, 0});
    std::unordered_map<std::string, char> closed;
    while (!open_.empty()) {
        QItem item = open_.top();
        open_.pop();
        const Node& n = nodes_[static_cast<std::size_t>(item.node)];
        auto k = key(n.state);
        if (best_.at(k) != item.node) continue;
        if (!closed.emplace(k, 1).second) continue;
        if (goal(n.state)) return reconstruct(item.node);
        expand(item.node);
    }
    throw NoAlignment("the final marking is unreachable for this log");
}

Alignment Engine::reconstruct(int node_index) const {
    std::vector<const Node*> path;
    for (int i = node_index; nodes_[static_cast<std::size_t>(i)].parent >= 0; i = nodes_[static_cast<std::size_t>(i)].parent)
        path.push_back(&nodes_[static_cast<std::size_t>(i)]);
    std::reverse(path.begin(), path.end());

    Alignment al;
    al.relaxed = relaxed_;
    std::map<std::string, int> firing_count;
    std::map<int, int> fragment_count;
    std::vector<std::uint32_t> consumed(events_.size(), 0);
    std::vector<std::set<std::string>> move_objects;
    std::vector<int> move_root;
    int k = 0;
    for (const Node* n : path) {
        const CMove& cm = n->move;
        Move mv;
        mv.id = "m" + std::to_string(++k);
        mv.kind = cm.kind;
        mv.cost = cm.cost;
        std::set<std::string> objs;
        if (cm.trans >= 0) {
            const CTrans& t = trans_[static_cast<std::size_t>(cm.trans)];
            TransitionFiring f;
            f.transition = t.src->id;
            f.id = t.src->id + "#" + std::to_string(++firing_count[t.src->id]);
            for (std::size_t v = 0; v < t.var_names.size(); ++v) {
                f.mode[t.var_names[v]] = objects_[static_cast<std::size_t>(cm.binding[v])];
                objs.insert(objects_[static_cast<std::size_t>(cm.binding[v])]);
            }
            mv.firing = std::move(f);
            mv.label = t.src->label;
            mv.base_transition = t.base;
            mv.silent = t.label < 0;
            for (std::size_t r = 0; r < roles_.size(); ++r)
                if (cm.subst_roles & (1u << r)) mv.substituted_roles.insert(roles_[r]);
        }
        if (cm.event >= 0) {
            const CEvent& e = events_[static_cast<std::size_t>(cm.event)];
            Event ev = *e.src;
            bool first = consumed[static_cast<std::size_t>(cm.event)] == 0;
            consumed[static_cast<std::size_t>(cm.event)] |= cm.part;
            if (!(first && cm.part == e.full)) {
                ev.id = e.src->id + "#" + std::to_string(++fragment_count[cm.event]);
                ev.parent = e.src->id;
                ev.projection_of = e.src->objects;
                ObjectMultiset part;
                for (std::size_t i = 0; i < e.objs.size(); ++i)
                    if (cm.part & (1u << i)) part.add(objects_[static_cast<std::size_t>(e.objs[i])], e.mult[i]);
                ev.objects = part;
            }
            for (const auto& [o, _] : ev.objects.entries()) objs.insert(o);
            mv.event = std::move(ev);
        }
        move_objects.push_back(std::move(objs));
        move_root.push_back(cm.event);
        al.total_cost += mv.cost;
        al.moves.push_back(std::move(mv));
    }

    std::vector<std::string> ids;
    for (const auto& mv : al.moves) ids.push_back(mv.id);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < al.moves.size(); ++i) {
        for (std::size_t j = i + 1; j < al.moves.size(); ++j) {
            bool linked = move_objects[i].empty() || move_objects[j].empty();
            for (const auto& o : move_objects[i])
                if (!linked && move_objects[j].count(o)) linked = true;
            if (!linked && move_root[i] >= 0 && move_root[j] >= 0) {
                const auto& a = events_[static_cast<std::size_t>(move_root[i])].src->id;
                const auto& b = events_[static_cast<std::size_t>(move_root[j])].src->id;
                linked = log_.order().less(a, b);
            }
            if (linked) pairs.emplace_back(i, j);
        }
    }
    al.order = Poset::from_index_pairs(std::move(ids), pairs);
    return al;
}

}  // namespace

Alignment align(const SystemLog& l, const ProcessModel& m, const CostParams& params, const SearchOptions& opts) {
    CostParams p = params;
    p.scheme = CostScheme::standard;
    Engine engine(l, m, p, false, {}, opts);
    return engine.run();
}

Alignment relaxed_align(const SystemLog& l, const ProcessModel& m, CostParams params,
                        const std::set<std::string>& substitutable_roles, const SearchOptions& opts) {
    params.scheme = CostScheme::relaxed;
    Engine engine(l, m, params, true, substitutable_roles, opts);
    return engine.run();
}

}  // namespace relalign
