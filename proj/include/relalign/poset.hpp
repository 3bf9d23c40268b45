#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace relalign {

using IdPair = std::pair<std::string, std::string>;

// Finite strict partial order over opaque string ids.
//
// The order is stored transitively closed as one bit row per element, so
// comparability is a constant-time lookup. The covering relation is derived
// on demand. Instances are immutable once built.
class Poset {
public:
    Poset() = default;

    // Builds the closure of `pairs` over `elements` (ids mentioned only in
    // pairs are added). Throws CycleError when the closure is not a strict
    // order.
    static Poset from_pairs(std::vector<std::string> elements, const std::vector<IdPair>& pairs);

    // Builds from index pairs over `elements`; used by hot paths that already
    // hold indices.
    static Poset from_index_pairs(std::vector<std::string> elements,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    const std::vector<std::string>& elements() const { return elements_; }
    bool contains(std::string_view id) const { return index_of(id).has_value(); }
    std::optional<std::size_t> index_of(std::string_view id) const;

    bool less(std::string_view a, std::string_view b) const;
    bool less_idx(std::size_t a, std::size_t b) const {
        return (rows_[a][b >> 6] >> (b & 63)) & 1u;
    }
    bool concurrent(std::string_view a, std::string_view b) const;

    // All ordered pairs of the closed order, sorted.
    std::vector<IdPair> order() const;
    std::size_t order_size() const;

    // Same element set and same order, irrespective of element insertion order.
    bool operator==(const Poset& other) const;

private:
    void allocate(std::size_t n);
    void set_less(std::size_t a, std::size_t b) { rows_[a][b >> 6] |= std::uint64_t{1} << (b & 63); }
    void close();  // Warshall over bit rows, then validates irreflexivity.

    std::vector<std::string> elements_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

// A partition of the carrier into a downward-closed lower part and the rest.
struct Cut {
    std::set<std::string> lower;
    std::set<std::string> upper;
};

bool is_valid_cut(const Poset& p, const Cut& cut);

Poset transitive_closure(const std::vector<IdPair>& pairs, std::vector<std::string> extra_elements = {});
std::vector<IdPair> covering_relation(const Poset& p);
Poset project(const Poset& p, const std::set<std::string>& keep);
std::set<std::string> minimal_elements(const Poset& p);
std::set<std::string> maximal_elements(const Poset& p);

struct LinearExtensions {
    std::vector<std::vector<std::string>> sequences;
    bool truncated = false;
};

// Enumerates linear extensions in lexicographic order of element index,
// stopping after `limit` sequences.
LinearExtensions linear_extensions(const Poset& p, std::size_t limit);

// Number of linear extensions, counted by dynamic programming over down-sets.
// Only intended for small posets (at most 25 elements).
std::uint64_t count_linear_extensions(const Poset& p);

Poset poset_union(const Poset& x, const Poset& y);
Poset poset_difference(const Poset& x, const Poset& y);
Poset poset_intersection(const Poset& x, const Poset& y);
// True iff `sub` is a subposet of `super`: elements included and the order of
// `sub` equals the restriction of `super`'s order.
bool is_subposet(const Poset& sub, const Poset& super);

}  // namespace relalign
