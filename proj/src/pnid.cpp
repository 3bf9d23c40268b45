#include "relalign/pnid.hpp"

#include <algorithm>
#include <deque>

#include "relalign/errors.hpp"

namespace relalign {

void Marking::add(const std::string& place, const Token& tok, int count) {
    if (count <= 0) return;
    tokens_[place][tok] += count;
}

void Marking::remove(const std::string& place, const Token& tok, int count) {
    auto pit = tokens_.find(place);
    if (pit == tokens_.end()) throw UnderflowError("no tokens in place " + place);
    auto tit = pit->second.find(tok);
    if (tit == pit->second.end() || tit->second < count) throw UnderflowError("missing token in place " + place);
    tit->second -= count;
    if (tit->second == 0) pit->second.erase(tit);
    if (pit->second.empty()) tokens_.erase(pit);
}

int Marking::count(const std::string& place, const Token& tok) const {
    auto pit = tokens_.find(place);
    if (pit == tokens_.end()) return 0;
    auto tit = pit->second.find(tok);
    return tit == pit->second.end() ? 0 : tit->second;
}

std::set<std::string> Marking::objects() const {
    std::set<std::string> out;
    for (const auto& [_, bag] : tokens_)
        for (const auto& [tok, __] : bag) out.insert(tok.begin(), tok.end());
    return out;
}

std::string Marking::to_string() const {
    std::string s = "{";
    bool first_place = true;
    for (const auto& [place, bag] : tokens_) {
        if (!first_place) s += ", ";
        first_place = false;
        s += place + ":[";
        bool first = true;
        for (const auto& [tok, c] : bag) {
            if (!first) s += ",";
            first = false;
            if (c > 1) s += std::to_string(c) + "*";
            s += "(";
            for (std::size_t i = 0; i < tok.size(); ++i) s += (i ? "," : "") + tok[i];
            s += ")";
        }
        s += "]";
    }
    return s + "}";
}

void Tpnid::add_variable(Variable v) {
    if (var_index_.count(v.name)) throw ModelError("duplicate variable " + v.name);
    var_index_[v.name] = variables_.size();
    variables_.push_back(std::move(v));
}

void Tpnid::add_place(Place p) {
    if (place_index_.count(p.id) || trans_index_.count(p.id)) throw ModelError("duplicate node id " + p.id);
    place_index_[p.id] = places_.size();
    places_.push_back(std::move(p));
}

void Tpnid::add_transition(Transition t) {
    if (place_index_.count(t.id) || trans_index_.count(t.id)) throw ModelError("duplicate node id " + t.id);
    trans_index_[t.id] = transitions_.size();
    transitions_.push_back(std::move(t));
}

const Variable& Tpnid::variable(const std::string& name) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end()) throw ModelError("unknown variable " + name);
    return variables_[it->second];
}

const Place& Tpnid::place(const std::string& id) const {
    auto it = place_index_.find(id);
    if (it == place_index_.end()) throw ModelError("unknown place " + id);
    return places_[it->second];
}

const Transition& Tpnid::transition(const std::string& id) const {
    auto it = trans_index_.find(id);
    if (it == trans_index_.end()) throw ModelError("unknown transition " + id);
    return transitions_[it->second];
}

std::vector<std::string> Tpnid::vars_of(const Transition& t) const {
    std::vector<std::string> out;
    auto visit = [&](const std::vector<Arc>& arcs) {
        for (const auto& a : arcs)
            for (const auto& seq : a.vars)
                for (const auto& v : seq)
                    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    visit(t.inputs);
    visit(t.outputs);
    return out;
}

std::set<std::string> Tpnid::roles_of(const Transition& t) const {
    std::set<std::string> out;
    for (const auto& v : vars_of(t)) out.insert(variable(v).role);
    return out;
}

void Tpnid::validate() const {
    for (const auto& t : transitions_) {
        std::set<std::string> in_vars;
        auto check_arcs = [&](const std::vector<Arc>& arcs, bool input) {
            for (const auto& a : arcs) {
                const Place& p = place(a.place);
                for (const auto& seq : a.vars) {
                    if (seq.size() != p.type.size())
                        throw ModelError("arc " + t.id + "/" + a.place + " does not match the place type");
                    for (std::size_t i = 0; i < seq.size(); ++i) {
                        const Variable& v = variable(seq[i]);
                        if (v.role != p.type[i])
                            throw ModelError("variable " + v.name + " has the wrong role on " + t.id + "/" + a.place);
                        if (input && v.fresh) throw ModelError("fresh variable " + v.name + " on input of " + t.id);
                        if (input) in_vars.insert(v.name);
                    }
                }
            }
        };
        check_arcs(t.inputs, true);
        check_arcs(t.outputs, false);
        for (const auto& a : t.outputs)
            for (const auto& seq : a.vars)
                for (const auto& v : seq)
                    if (!variable(v).fresh && !in_vars.count(v))
                        throw ModelError("output variable " + v + " of " + t.id + " is unbound");
    }
}

ObjectMultiset TransitionFiring::involved() const {
    ObjectMultiset m;
    for (const auto& [_, obj] : mode) m.add(obj);
    return m;
}

namespace {

struct Binder {
    const Tpnid& net;
    const Marking& marking;
    std::vector<std::pair<const Arc*, const VarSeq*>> slots;
    std::map<std::pair<std::string, Token>, int> used;
    Mode binding;
    std::set<Mode> out;

    void run(std::size_t i) {
        if (i == slots.size()) {
            out.insert(binding);
            return;
        }
        const auto& [arc, seq] = slots[i];
        auto pit = marking.places().find(arc->place);
        if (pit == marking.places().end()) return;
        for (const auto& [tok, cnt] : pit->second) {
            if (tok.size() != seq->size()) continue;
            auto key = std::make_pair(arc->place, tok);
            if (used[key] >= cnt) continue;
            std::vector<std::string> newly;
            bool ok = true;
            for (std::size_t k = 0; k < tok.size() && ok; ++k) {
                auto b = binding.find((*seq)[k]);
                if (b == binding.end()) {
                    binding[(*seq)[k]] = tok[k];
                    newly.push_back((*seq)[k]);
                } else if (b->second != tok[k]) {
                    ok = false;
                }
            }
            if (ok) {
                ++used[key];
                run(i + 1);
                --used[key];
            }
            for (const auto& v : newly) binding.erase(v);
        }
    }
};

void bind_fresh(const Tpnid& net, const Transition& t, const std::set<std::string>& present, Mode& mode) {
    std::set<std::string> taken = present;
    for (const auto& v : net.vars_of(t)) {
        const Variable& var = net.variable(v);
        if (!var.fresh || mode.count(v)) continue;
        for (int k = 1;; ++k) {
            auto name = fresh_object_name(var.role, k);
            if (!taken.count(name)) {
                mode[v] = name;
                taken.insert(name);
                break;
            }
        }
    }
}

Token instantiate(const VarSeq& seq, const Mode& mode) {
    Token tok;
    tok.reserve(seq.size());
    for (const auto& v : seq) {
        auto it = mode.find(v);
        if (it == mode.end()) throw NotEnabled("variable " + v + " is unbound");
        tok.push_back(it->second);
    }
    return tok;
}

}  // namespace

std::vector<Mode> enabled_modes(const ProcessModel& m, const Marking& marking, const std::string& tid) {
    const Transition& t = m.net.transition(tid);
    Binder b{m.net, marking, {}, {}, {}, {}};
    for (const auto& a : t.inputs)
        for (const auto& seq : a.vars) b.slots.emplace_back(&a, &seq);
    b.run(0);
    auto present = marking.objects();
    std::vector<Mode> out;
    for (Mode mode : b.out) {
        bind_fresh(m.net, t, present, mode);
        out.push_back(std::move(mode));
    }
    return out;
}

bool is_enabled(const ProcessModel& m, const Marking& marking, const std::string& tid, const Mode& mode) {
    const Transition& t = m.net.transition(tid);
    for (const auto& v : m.net.vars_of(t))
        if (!mode.count(v)) return false;
    std::map<std::pair<std::string, Token>, int> need;
    for (const auto& a : t.inputs)
        for (const auto& seq : a.vars) ++need[{a.place, instantiate(seq, mode)}];
    for (const auto& [key, c] : need)
        if (marking.count(key.first, key.second) < c) return false;
    auto present = marking.objects();
    std::set<std::string> fresh_seen;
    for (const auto& v : m.net.vars_of(t)) {
        if (!m.net.variable(v).fresh) continue;
        const auto& obj = mode.at(v);
        if (present.count(obj) || !fresh_seen.insert(obj).second) return false;
    }
    return true;
}

Marking fire(const ProcessModel& m, const Marking& marking, const TransitionFiring& firing) {
    if (!is_enabled(m, marking, firing.transition, firing.mode))
        throw NotEnabled("transition " + firing.transition + " is not enabled");
    const Transition& t = m.net.transition(firing.transition);
    Marking next = marking;
    for (const auto& a : t.inputs)
        for (const auto& seq : a.vars) next.remove(a.place, instantiate(seq, firing.mode));
    for (const auto& a : t.outputs)
        for (const auto& seq : a.vars) next.add(a.place, instantiate(seq, firing.mode));
    return next;
}

bool is_execution_poset(const ProcessModel& m, const ExecutionPoset& run, const std::optional<Marking>& target) {
    const Poset& p = run.run;
    const std::size_t n = p.size();
    std::vector<const TransitionFiring*> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = run.firings.find(p.elements()[i]);
        if (it == run.firings.end()) return false;
        f[i] = &it->second;
    }
    const Marking& goal = target ? *target : m.final;
    std::map<std::vector<bool>, Marking> seen;
    std::deque<std::vector<bool>> queue;
    seen.emplace(std::vector<bool>(n, false), m.initial);
    queue.emplace_back(n, false);
    while (!queue.empty()) {
        auto down = queue.front();
        queue.pop_front();
        const Marking cur = seen.at(down);
        bool full = true;
        for (std::size_t x = 0; x < n; ++x) {
            if (down[x]) continue;
            full = false;
            bool ready = true;
            for (std::size_t y = 0; y < n && ready; ++y)
                if (!down[y] && p.less_idx(y, x)) ready = false;
            if (!ready) continue;
            if (!is_enabled(m, cur, f[x]->transition, f[x]->mode)) return false;
            auto next = down;
            next[x] = true;
            if (!seen.count(next)) {
                seen.emplace(next, fire(m, cur, *f[x]));
                queue.push_back(std::move(next));
            }
        }
        if (full && !(cur == goal)) return false;
    }
    return true;
}

ExecutionPoset execution_poset_from_sequence(const std::vector<TransitionFiring>& seq) {
    ExecutionPoset out;
    std::vector<std::string> ids;
    std::vector<std::set<std::string>> objs;
    for (const auto& f : seq) {
        ids.push_back(f.id);
        objs.push_back(f.involved().support());
        if (!out.firings.emplace(f.id, f).second) throw Error("duplicate firing id " + f.id);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            bool linked = objs[i].empty() || objs[j].empty();
            for (const auto& o : objs[i])
                if (objs[j].count(o)) linked = true;
            if (linked) pairs.emplace_back(i, j);
        }
    }
    out.run = Poset::from_index_pairs(std::move(ids), pairs);
    return out;
}

void number_firings(std::vector<TransitionFiring>& seq) {
    std::map<std::string, int> next;
    for (auto& f : seq) f.id = f.transition + "#" + std::to_string(++next[f.transition]);
}

std::string projected_name(const std::string& base, const std::set<std::string>& kept_roles) {
    std::string s = base + "|{";
    bool first = true;
    for (const auto& r : kept_roles) {
        if (!first) s += ",";
        first = false;
        s += r;
    }
    return s + "}";
}

namespace {

std::vector<std::size_t> kept_positions(const std::vector<std::string>& type, const std::set<std::string>& roles) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < type.size(); ++i)
        if (roles.count(type[i])) pos.push_back(i);
    return pos;
}

template <typename Seq>
Seq pick(const Seq& s, const std::vector<std::size_t>& pos) {
    Seq out;
    for (auto i : pos) out.push_back(s[i]);
    return out;
}

Marking project_marking(const Tpnid& base, const Marking& mk, const std::set<std::string>& roles,
                        const std::map<std::string, std::string>& place_map, const ObjectMultiset* objs) {
    Marking out;
    for (const auto& [place, bag] : mk.places()) {
        auto pm = place_map.find(place);
        if (pm == place_map.end()) continue;
        auto pos = kept_positions(base.place(place).type, roles);
        for (const auto& [tok, c] : bag) {
            Token t = pick(tok, pos);
            int count = c;
            if (objs) {
                for (const auto& o : t) count = std::min(count, objs->count(o));
            }
            out.add(pm->second, t, count);
        }
    }
    return out;
}

}  // namespace

ProcessModel project_net_roles(const ProcessModel& m, const std::set<std::string>& roles) {
    ProcessModel out;
    out.universe = m.universe;
    const Tpnid& net = m.net;
    std::map<std::string, std::string> place_map;
    for (const auto& p : net.places()) {
        auto pos = kept_positions(p.type, roles);
        if (pos.empty()) continue;
        Place q = p;
        if (pos.size() != p.type.size()) {
            q.type = pick(p.type, pos);
            std::set<std::string> kept(q.type.begin(), q.type.end());
            std::string base = p.projection ? p.projection->base : p.id;
            q.id = projected_name(base, kept);
            q.projection = ProjectionTag{base, kept};
        }
        place_map[p.id] = q.id;
        if (!out.net.has_place(q.id)) out.net.add_place(std::move(q));
    }
    std::set<std::string> used_vars;
    for (const auto& t : net.transitions()) {
        auto project_arcs = [&](const std::vector<Arc>& arcs) {
            std::vector<Arc> res;
            for (const auto& a : arcs) {
                auto pm = place_map.find(a.place);
                if (pm == place_map.end()) continue;
                auto pos = kept_positions(net.place(a.place).type, roles);
                Arc b{pm->second, {}};
                for (const auto& seq : a.vars) {
                    b.vars.push_back(pick(seq, pos));
                    used_vars.insert(b.vars.back().begin(), b.vars.back().end());
                }
                res.push_back(std::move(b));
            }
            return res;
        };
        Transition u;
        u.label = t.label;
        u.inputs = project_arcs(t.inputs);
        u.outputs = project_arcs(t.outputs);
        if (u.inputs.empty() && u.outputs.empty()) continue;
        auto all_roles = net.roles_of(t);
        std::set<std::string> kept;
        for (const auto& r : all_roles)
            if (roles.count(r)) kept.insert(r);
        if (kept.size() != all_roles.size()) {
            std::string base = t.projection ? t.projection->base : t.id;
            u.id = projected_name(base, kept);
            u.projection = ProjectionTag{base, kept};
        } else {
            u.id = t.id;
            u.projection = t.projection;
        }
        out.net.add_transition(std::move(u));
    }
    for (const auto& v : net.variables())
        if (roles.count(v.role)) out.net.add_variable(v);
    out.initial = project_marking(net, m.initial, roles, place_map, nullptr);
    out.final = project_marking(net, m.final, roles, place_map, nullptr);
    return out;
}

ProcessModel project_net(const ProcessModel& m, const ObjectMultiset& objs) {
    auto roles = roles_of(m.universe, objs);
    ProcessModel out = project_net_roles(m, roles);
    std::map<std::string, std::string> place_map;
    for (const auto& p : m.net.places()) {
        auto pos = kept_positions(p.type, roles);
        if (pos.empty()) continue;
        if (pos.size() == p.type.size()) {
            place_map[p.id] = p.id;
        } else {
            std::set<std::string> kept;
            for (auto i : pos) kept.insert(p.type[i]);
            place_map[p.id] = projected_name(p.projection ? p.projection->base : p.id, kept);
        }
    }
    out.initial = project_marking(m.net, m.initial, roles, place_map, &objs);
    out.final = project_marking(m.net, m.final, roles, place_map, &objs);
    return out;
}

}  // namespace relalign
