#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relalign {

enum class RoleKind { persistent, expected, spontaneous };

std::string_view to_string(RoleKind kind);
RoleKind role_kind_from_string(std::string_view text);

struct Role {
    std::string name;
    RoleKind kind = RoleKind::spontaneous;

    bool operator==(const Role&) const = default;
};

// Multiset of object names. Counts are always >= 1; absent means zero.
class ObjectMultiset {
public:
    ObjectMultiset() = default;
    ObjectMultiset(std::initializer_list<std::string> names);
    static ObjectMultiset from_list(const std::vector<std::string>& names);

    void add(const std::string& name, int count = 1);
    int count(std::string_view name) const;
    bool empty() const { return counts_.empty(); }
    // Sum of multiplicities.
    int size() const;
    std::set<std::string> support() const;
    const std::map<std::string, int, std::less<>>& entries() const { return counts_; }
    // Names repeated by multiplicity, sorted.
    std::vector<std::string> to_list() const;

    ObjectMultiset operator+(const ObjectMultiset& o) const;
    // Requires o <= *this; throws UnderflowError otherwise.
    ObjectMultiset operator-(const ObjectMultiset& o) const;
    bool operator<=(const ObjectMultiset& o) const;
    bool operator<(const ObjectMultiset& o) const { return *this <= o && !(*this == o); }
    bool operator==(const ObjectMultiset& o) const = default;

    std::string to_string() const;

private:
    std::map<std::string, int, std::less<>> counts_;
};

ObjectMultiset multiset_min(const ObjectMultiset& a, const ObjectMultiset& b);

// Roles plus the multiset of known objects with their role assignment.
//
// Objects minted during search are named "<role>#<k>"; role_of resolves
// those through the role prefix, so a universe never needs to enumerate them.
class ObjectUniverse {
public:
    void add_role(Role role);
    // Adds `count` copies of `name`; the role must exist and must agree with any
    // earlier registration of the same name.
    void add_object(const std::string& name, const std::string& role, int count = 1);

    bool has_role(std::string_view role) const;
    const Role& role(std::string_view name) const;
    const std::vector<Role>& roles() const { return roles_; }
    std::set<std::string> role_names() const;
    const ObjectMultiset& objects() const { return objects_; }
    std::optional<std::string> role_of(std::string_view object) const;
    // role_of that throws UnknownRole for unknown objects.
    std::string require_role_of(std::string_view object) const;

    // Union of two universes (roles and objects; multiplicities take the max).
    ObjectUniverse merged(const ObjectUniverse& other) const;

private:
    std::vector<Role> roles_;
    ObjectMultiset objects_;
    std::map<std::string, std::string, std::less<>> role_of_;
};

// Objects of the universe whose role is in `roles`. Throws UnknownRole.
ObjectMultiset objects_of_roles(const ObjectUniverse& u, const std::set<std::string>& roles);

// Sub-multiset of `objs` whose role is in `roles`.
ObjectMultiset restrict_to_roles(const ObjectUniverse& u, const ObjectMultiset& objs,
                                 const std::set<std::string>& roles);

// Distinct roles of the objects in `objs`.
std::set<std::string> roles_of(const ObjectUniverse& u, const ObjectMultiset& objs);

// Canonical minted name for fresh objects.
std::string fresh_object_name(std::string_view role, int index);

}  // namespace relalign
