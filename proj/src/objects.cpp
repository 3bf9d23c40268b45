#include "relalign/objects.hpp"

#include <algorithm>

#include "relalign/errors.hpp"

namespace relalign {

std::string_view to_string(RoleKind kind) {
    switch (kind) {
        case RoleKind::persistent: return "persistent";
        case RoleKind::expected: return "expected";
        case RoleKind::spontaneous: return "spontaneous";
    }
    return "spontaneous";
}

RoleKind role_kind_from_string(std::string_view text) {
    if (text == "persistent") return RoleKind::persistent;
    if (text == "expected") return RoleKind::expected;
    if (text == "spontaneous") return RoleKind::spontaneous;
    throw Error("unknown role kind '" + std::string(text) + "'");
}

ObjectMultiset::ObjectMultiset(std::initializer_list<std::string> names) {
    for (const auto& n : names) add(n);
}

ObjectMultiset ObjectMultiset::from_list(const std::vector<std::string>& names) {
    ObjectMultiset m;
    for (const auto& n : names) m.add(n);
    return m;
}

void ObjectMultiset::add(const std::string& name, int count) {
    if (count <= 0) return;
    counts_[name] += count;
}

int ObjectMultiset::count(std::string_view name) const {
    auto it = counts_.find(name);
    return it == counts_.end() ? 0 : it->second;
}

int ObjectMultiset::size() const {
    int n = 0;
    for (const auto& [_, c] : counts_) n += c;
    return n;
}

std::set<std::string> ObjectMultiset::support() const {
    std::set<std::string> s;
    for (const auto& [n, _] : counts_) s.insert(n);
    return s;
}

std::vector<std::string> ObjectMultiset::to_list() const {
    std::vector<std::string> out;
    for (const auto& [n, c] : counts_)
        for (int i = 0; i < c; ++i) out.push_back(n);
    return out;
}

ObjectMultiset ObjectMultiset::operator+(const ObjectMultiset& o) const {
    ObjectMultiset r = *this;
    for (const auto& [n, c] : o.counts_) r.add(n, c);
    return r;
}

ObjectMultiset ObjectMultiset::operator-(const ObjectMultiset& o) const {
    if (!(o <= *this)) throw UnderflowError("multiset subtraction " + to_string() + " - " + o.to_string());
    ObjectMultiset r;
    for (const auto& [n, c] : counts_) r.add(n, c - o.count(n));
    return r;
}

bool ObjectMultiset::operator<=(const ObjectMultiset& o) const {
    for (const auto& [n, c] : counts_)
        if (c > o.count(n)) return false;
    return true;
}

std::string ObjectMultiset::to_string() const {
    std::string s = "[";
    bool first = true;
    for (const auto& [n, c] : counts_) {
        if (!first) s += ",";
        first = false;
        if (c > 1) s += std::to_string(c) + "*";
        s += n;
    }
    return s + "]";
}

ObjectMultiset multiset_min(const ObjectMultiset& a, const ObjectMultiset& b) {
    ObjectMultiset r;
    for (const auto& [n, c] : a.entries()) r.add(n, std::min(c, b.count(n)));
    return r;
}

void ObjectUniverse::add_role(Role role) {
    if (has_role(role.name)) throw Error("duplicate role '" + role.name + "'");
    roles_.push_back(std::move(role));
}

void ObjectUniverse::add_object(const std::string& name, const std::string& role, int count) {
    if (!has_role(role)) throw UnknownRole("object '" + name + "' has unknown role '" + role + "'");
    auto it = role_of_.find(name);
    if (it != role_of_.end() && it->second != role)
        throw Error("object '" + name + "' registered with two roles");
    role_of_[name] = role;
    objects_.add(name, count);
}

bool ObjectUniverse::has_role(std::string_view role) const {
    return std::any_of(roles_.begin(), roles_.end(), [&](const Role& r) { return r.name == role; });
}

const Role& ObjectUniverse::role(std::string_view name) const {
    for (const auto& r : roles_)
        if (r.name == name) return r;
    throw UnknownRole("unknown role '" + std::string(name) + "'");
}

std::set<std::string> ObjectUniverse::role_names() const {
    std::set<std::string> s;
    for (const auto& r : roles_) s.insert(r.name);
    return s;
}

std::optional<std::string> ObjectUniverse::role_of(std::string_view object) const {
    if (auto it = role_of_.find(object); it != role_of_.end()) return it->second;
    if (auto hash = object.find('#'); hash != std::string_view::npos) {
        std::string_view prefix = object.substr(0, hash);
        if (has_role(prefix)) return std::string(prefix);
    }
    return std::nullopt;
}

std::string ObjectUniverse::require_role_of(std::string_view object) const {
    auto r = role_of(object);
    if (!r) throw UnknownRole("object '" + std::string(object) + "' has no known role");
    return *r;
}

ObjectUniverse ObjectUniverse::merged(const ObjectUniverse& other) const {
    ObjectUniverse u = *this;
    for (const auto& r : other.roles_)
        if (!u.has_role(r.name)) u.add_role(r);
    for (const auto& [name, c] : other.objects_.entries()) {
        const std::string& role = other.role_of_.at(name);
        int have = u.objects_.count(name);
        if (auto mine = u.role_of(name); mine && *mine != role && have > 0)
            throw Error("object '" + name + "' has conflicting roles");
        u.add_object(name, role, std::max(0, c - have));
        u.role_of_[name] = role;
    }
    return u;
}

ObjectMultiset objects_of_roles(const ObjectUniverse& u, const std::set<std::string>& roles) {
    for (const auto& r : roles)
        if (!u.has_role(r)) throw UnknownRole("unknown role '" + r + "'");
    return restrict_to_roles(u, u.objects(), roles);
}

ObjectMultiset restrict_to_roles(const ObjectUniverse& u, const ObjectMultiset& objs,
                                 const std::set<std::string>& roles) {
    ObjectMultiset r;
    for (const auto& [n, c] : objs.entries()) {
        auto role = u.role_of(n);
        if (role && roles.count(*role)) r.add(n, c);
    }
    return r;
}

std::set<std::string> roles_of(const ObjectUniverse& u, const ObjectMultiset& objs) {
    std::set<std::string> s;
    for (const auto& [n, _] : objs.entries()) s.insert(u.require_role_of(n));
    return s;
}

std::string fresh_object_name(std::string_view role, int index) {
    return std::string(role) + "#" + std::to_string(index);
}

}  // namespace relalign
