#include "relalign/relaxed_model.hpp"

#include <algorithm>

#include "relalign/errors.hpp"

namespace relalign {

const std::string& RelaxedModel::base_of(const std::string& t) const {
    auto it = projection_index.find(t);
    return it == projection_index.end() ? t : it->second.base;
}

std::string shadow_place_name(const Place& p, std::size_t position) {
    const std::string& role = p.type[position];
    std::size_t same = static_cast<std::size_t>(std::count(p.type.begin(), p.type.end(), role));
    std::string name = projected_name(p.id, {role});
    if (same > 1) name += "@" + std::to_string(position);
    return name;
}

std::string create_transition_name(const std::string& place) { return "tau_create^" + place; }
std::string destroy_transition_name(const std::string& place) { return "tau_destroy^" + place; }

namespace {

void add_arc(std::vector<Arc>& arcs, const std::string& place, VarSeq seq) {
    for (auto& a : arcs) {
        if (a.place == place) {
            a.vars.push_back(std::move(seq));
            return;
        }
    }
    arcs.push_back({place, {std::move(seq)}});
}

std::vector<std::set<std::string>> proper_subsets(const std::set<std::string>& roles) {
    std::vector<std::string> v(roles.begin(), roles.end());
    std::vector<std::set<std::string>> out;
    const std::size_t n = v.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::set<std::string> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) s.insert(v[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

RelaxedModel build_relaxed_model(const ProcessModel& m) {
    RelaxedModel r;
    r.base = m;
    r.model.universe = m.universe;
    r.model.initial = m.initial;
    r.model.final = m.final;
    Tpnid& net = r.model.net;
    const Tpnid& base = m.net;

    for (const auto& v : base.variables()) net.add_variable(v);
    for (const auto& p : base.places()) net.add_place(p);
    for (const auto& t : base.transitions()) net.add_transition(t);

    for (const auto& p : base.places()) {
        if (p.type.size() < 2) continue;
        Transition create{create_transition_name(p.id), std::nullopt, {}, {}, std::nullopt};
        VarSeq tuple;
        for (std::size_t i = 0; i < p.type.size(); ++i) {
            std::string var = "_" + p.type[i] + std::to_string(i);
            if (!net.has_variable(var)) net.add_variable({var, p.type[i], false});
            std::string shadow = shadow_place_name(p, i);
            net.add_place({shadow, {p.type[i]}, ProjectionTag{p.id, {p.type[i]}}});
            create.inputs.push_back({shadow, {{var}}});
            tuple.push_back(var);
        }
        create.outputs.push_back({p.id, {tuple}});
        Transition destroy{destroy_transition_name(p.id), std::nullopt, create.outputs, create.inputs, std::nullopt};
        r.correlation_transitions.insert(create.id);
        r.correlation_transitions.insert(destroy.id);
        net.add_transition(std::move(create));
        net.add_transition(std::move(destroy));
    }

    for (const auto& t : base.transitions()) {
        auto roles = base.roles_of(t);
        if (roles.size() < 2) continue;
        for (const auto& kept : proper_subsets(roles)) {
            Transition u;
            u.id = projected_name(t.id, kept);
            u.label = t.label;
            u.projection = ProjectionTag{t.id, kept};
            auto project = [&](const std::vector<Arc>& arcs, std::vector<Arc>& out) {
                for (const auto& a : arcs) {
                    const Place& p = base.place(a.place);
                    std::vector<std::size_t> pos;
                    for (std::size_t i = 0; i < p.type.size(); ++i)
                        if (kept.count(p.type[i])) pos.push_back(i);
                    if (pos.empty()) continue;
                    for (const auto& seq : a.vars) {
                        if (pos.size() == p.type.size()) {
                            add_arc(out, a.place, seq);
                        } else {
                            for (auto i : pos) add_arc(out, shadow_place_name(p, i), {seq[i]});
                        }
                    }
                }
            };
            project(t.inputs, u.inputs);
            project(t.outputs, u.outputs);
            r.projection_index[u.id] = *u.projection;
            net.add_transition(std::move(u));
        }
    }
    net.validate();
    return r;
}

bool language_inclusion_check(const ProcessModel& m, std::size_t depth) {
    RelaxedModel r = build_relaxed_model(m);
    std::set<Marking> frontier{m.initial};
    std::set<Marking> seen = frontier;
    for (std::size_t k = 0; k < depth && !frontier.empty(); ++k) {
        std::set<Marking> next;
        for (const auto& mk : frontier) {
            for (const auto& t : m.net.transitions()) {
                for (const auto& mode : enabled_modes(m, mk, t.id)) {
                    TransitionFiring f{"", t.id, mode};
                    if (!is_enabled(r.model, mk, t.id, mode)) return false;
                    Marking a = fire(m, mk, f);
                    if (!(fire(r.model, mk, f) == a)) return false;
                    if (seen.insert(a).second) next.insert(a);
                }
            }
        }
        frontier = std::move(next);
    }
    return true;
}

}  // namespace relalign
