#include "relalign/poset.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "relalign/errors.hpp"

namespace relalign {

void Poset::allocate(std::size_t n) {
    std::size_t words = (n + 63) / 64;
    rows_.assign(n, std::vector<std::uint64_t>(words, 0));
}

void Poset::close() {
    const std::size_t n = elements_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const auto& row_k = rows_[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (!less_idx(i, k)) continue;
            auto& row_i = rows_[i];
            for (std::size_t w = 0; w < row_i.size(); ++w) row_i[w] |= row_k[w];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (less_idx(i, i)) throw CycleError("order over '" + elements_[i] + "' is cyclic");
    }
}

Poset Poset::from_index_pairs(std::vector<std::string> elements,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Poset p;
    p.elements_ = std::move(elements);
    p.index_.reserve(p.elements_.size());
    for (std::size_t i = 0; i < p.elements_.size(); ++i) {
        if (!p.index_.emplace(p.elements_[i], i).second)
            throw Error("duplicate poset element '" + p.elements_[i] + "'");
    }
    p.allocate(p.elements_.size());
    for (auto [a, b] : pairs) {
        if (a == b) throw CycleError("reflexive pair on '" + p.elements_[a] + "'");
        p.set_less(a, b);
    }
    p.close();
    return p;
}

Poset Poset::from_pairs(std::vector<std::string> elements, const std::vector<IdPair>& pairs) {
    std::vector<std::string> carrier;
    std::unordered_map<std::string, std::size_t> idx;
    auto intern = [&](const std::string& id) {
        auto [it, inserted] = idx.emplace(id, carrier.size());
        if (inserted) carrier.push_back(id);
        return it->second;
    };
    for (const auto& e : elements) intern(e);
    std::vector<std::pair<std::size_t, std::size_t>> ip;
    ip.reserve(pairs.size());
    for (const auto& [a, b] : pairs) ip.emplace_back(intern(a), intern(b));
    return from_index_pairs(std::move(carrier), ip);
}

std::optional<std::size_t> Poset::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool Poset::less(std::string_view a, std::string_view b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    return ia && ib && less_idx(*ia, *ib);
}

bool Poset::concurrent(std::string_view a, std::string_view b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib || *ia == *ib) return false;
    return !less_idx(*ia, *ib) && !less_idx(*ib, *ia);
}

std::vector<IdPair> Poset::order() const {
    std::vector<IdPair> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (less_idx(i, j)) out.emplace_back(elements_[i], elements_[j]);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Poset::order_size() const {
    std::size_t n = 0;
    for (const auto& row : rows_)
        for (auto w : row) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool Poset::operator==(const Poset& other) const {
    if (size() != other.size()) return false;
    std::vector<std::size_t> map(size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto j = other.index_of(elements_[i]);
        if (!j) return false;
        map[i] = *j;
    }
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (less_idx(i, j) != other.less_idx(map[i], map[j])) return false;
    return true;
}

bool is_valid_cut(const Poset& p, const Cut& cut) {
    for (const auto& x : cut.lower)
        if (cut.upper.count(x) || !p.contains(x)) return false;
    for (const auto& x : cut.upper)
        if (!p.contains(x)) return false;
    if (cut.lower.size() + cut.upper.size() != p.size()) return false;
    for (const auto& u : cut.upper)
        for (const auto& l : cut.lower)
            if (p.less(u, l)) return false;
    return true;
}

Poset transitive_closure(const std::vector<IdPair>& pairs, std::vector<std::string> extra_elements) {
    return Poset::from_pairs(std::move(extra_elements), pairs);
}

std::vector<IdPair> covering_relation(const Poset& p) {
    std::vector<IdPair> out;
    const std::size_t n = p.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (!p.less_idx(x, y)) continue;
            bool covered = true;
            for (std::size_t z = 0; z < n && covered; ++z)
                if (p.less_idx(x, z) && p.less_idx(z, y)) covered = false;
            if (covered) out.emplace_back(p.elements()[x], p.elements()[y]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Poset project(const Poset& p, const std::set<std::string>& keep) {
    std::vector<std::size_t> kept;
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (keep.count(p.elements()[i])) {
            kept.push_back(i);
            elems.push_back(p.elements()[i]);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t b = 0; b < kept.size(); ++b)
            if (p.less_idx(kept[a], kept[b])) pairs.emplace_back(a, b);
    return Poset::from_index_pairs(std::move(elems), pairs);
}

std::set<std::string> minimal_elements(const Poset& p) {
    std::set<std::string> out;
    for (std::size_t x = 0; x < p.size(); ++x) {
        bool minimal = true;
        for (std::size_t y = 0; y < p.size() && minimal; ++y)
            if (p.less_idx(y, x)) minimal = false;
        if (minimal) out.insert(p.elements()[x]);
    }
    return out;
}

std::set<std::string> maximal_elements(const Poset& p) {
    std::set<std::string> out;
    for (std::size_t x = 0; x < p.size(); ++x) {
        bool maximal = true;
        for (std::size_t y = 0; y < p.size() && maximal; ++y)
            if (p.less_idx(x, y)) maximal = false;
        if (maximal) out.insert(p.elements()[x]);
    }
    return out;
}

namespace {

struct ExtensionWalker {
    const Poset& p;
    std::size_t limit;
    LinearExtensions out;
    std::vector<std::size_t> prefix;
    std::vector<char> placed;
    std::vector<std::size_t> missing_preds;

    void walk() {
        if (out.truncated) return;
        if (prefix.size() == p.size()) {
            if (out.sequences.size() >= limit) {
                out.truncated = true;
                return;
            }
            std::vector<std::string> seq;
            seq.reserve(prefix.size());
            for (auto i : prefix) seq.push_back(p.elements()[i]);
            out.sequences.push_back(std::move(seq));
            return;
        }
        for (std::size_t x = 0; x < p.size(); ++x) {
            if (placed[x] || missing_preds[x] != 0) continue;
            placed[x] = 1;
            prefix.push_back(x);
            for (std::size_t y = 0; y < p.size(); ++y)
                if (p.less_idx(x, y)) --missing_preds[y];
            walk();
            for (std::size_t y = 0; y < p.size(); ++y)
                if (p.less_idx(x, y)) ++missing_preds[y];
            prefix.pop_back();
            placed[x] = 0;
            if (out.truncated) return;
        }
    }
};

}  // namespace

LinearExtensions linear_extensions(const Poset& p, std::size_t limit) {
    ExtensionWalker w{p, limit, {}, {}, std::vector<char>(p.size(), 0), std::vector<std::size_t>(p.size(), 0)};
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            if (p.less_idx(x, y)) ++w.missing_preds[y];
    w.walk();
    return std::move(w.out);
}

std::uint64_t count_linear_extensions(const Poset& p) {
    const std::size_t n = p.size();
    if (n > 25) throw Error("count_linear_extensions supports at most 25 elements");
    std::vector<std::uint32_t> preds(n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (p.less_idx(x, y)) preds[y] |= 1u << x;
    std::unordered_map<std::uint32_t, std::uint64_t> ways;
    ways[0] = 1;
    // Process down-sets by cardinality so each is finished before extension.
    std::vector<std::uint32_t> layer{0};
    for (std::size_t k = 0; k < n; ++k) {
        std::unordered_map<std::uint32_t, std::uint64_t> next;
        for (auto set : layer) {
            std::uint64_t w = ways[set];
            for (std::size_t x = 0; x < n; ++x) {
                std::uint32_t bit = 1u << x;
                if ((set & bit) || (preds[x] & ~set)) continue;
                next[set | bit] += w;
            }
        }
        layer.clear();
        for (auto& [s, w] : next) {
            ways[s] = w;
            layer.push_back(s);
        }
    }
    std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    auto it = ways.find(full);
    return it == ways.end() ? 0 : it->second;
}

namespace {

std::set<std::string> carrier(const Poset& p) {
    return {p.elements().begin(), p.elements().end()};
}

std::set<IdPair> order_set(const Poset& p) {
    auto o = p.order();
    return {o.begin(), o.end()};
}

Poset rebuild(const std::set<std::string>& elems, const std::set<IdPair>& pairs) {
    std::vector<IdPair> kept;
    for (const auto& pr : pairs)
        if (elems.count(pr.first) && elems.count(pr.second)) kept.push_back(pr);
    return Poset::from_pairs({elems.begin(), elems.end()}, kept);
}

}  // namespace

Poset poset_union(const Poset& x, const Poset& y) {
    auto elems = carrier(x);
    for (const auto& e : y.elements()) elems.insert(e);
    auto pairs = order_set(x);
    for (const auto& pr : y.order()) pairs.insert(pr);
    return rebuild(elems, pairs);
}

Poset poset_difference(const Poset& x, const Poset& y) {
    std::set<std::string> elems;
    for (const auto& e : x.elements())
        if (!y.contains(e)) elems.insert(e);
    std::set<IdPair> pairs;
    for (const auto& pr : x.order())
        if (!y.less(pr.first, pr.second)) pairs.insert(pr);
    return rebuild(elems, pairs);
}

Poset poset_intersection(const Poset& x, const Poset& y) {
    std::set<std::string> elems;
    for (const auto& e : x.elements())
        if (y.contains(e)) elems.insert(e);
    std::set<IdPair> pairs;
    for (const auto& pr : x.order())
        if (y.less(pr.first, pr.second)) pairs.insert(pr);
    return rebuild(elems, pairs);
}

bool is_subposet(const Poset& sub, const Poset& super) {
    for (const auto& e : sub.elements())
        if (!super.contains(e)) return false;
    for (const auto& a : sub.elements())
        for (const auto& b : sub.elements())
            if (sub.less(a, b) != super.less(a, b)) return false;
    return true;
}

}  // namespace relalign
