#pragma once

#include <cstdlib>
#include <numeric>

#include "core.hpp"

// Discrete amenable groups used by the action scenarios, represented by
// canonical words, plus their standard Folner exhaustions.

namespace orbitkit {

struct GroupDescriptor {
    enum class Kind { FreeAbelian, FiniteCyclic, InfiniteSumZ2, DirectSum };

    Kind kind = Kind::FreeAbelian;
    int param = 1;  // rank for FreeAbelian, modulus for FiniteCyclic
    std::vector<GroupDescriptor> parts;

    static GroupDescriptor free_abelian(int rank) {
        require(rank >= 1, "free_abelian: rank must be >= 1");
        return {Kind::FreeAbelian, rank, {}};
    }
    static GroupDescriptor finite_cyclic(int n) {
        require(n >= 1, "finite_cyclic: modulus must be >= 1");
        return {Kind::FiniteCyclic, n, {}};
    }
    static GroupDescriptor infinite_sum_z2() { return {Kind::InfiniteSumZ2, 0, {}}; }
    static GroupDescriptor direct_sum(std::vector<GroupDescriptor> components) {
        require(!components.empty(), "direct_sum: needs at least one component");
        // variable-length words are only decodable in the last slot
        for (std::size_t i = 0; i + 1 < components.size(); ++i)
            require(components[i].kind != Kind::InfiniteSumZ2 &&
                        components[i].kind != Kind::DirectSum,
                    "direct_sum: only the last component may have variable word length");
        GroupDescriptor g{Kind::DirectSum, 0, std::move(components)};
        return g;
    }

    // fixed word length, or -1 when variable (InfiniteSumZ2 tail)
    int word_length() const {
        switch (kind) {
            case Kind::FreeAbelian: return param;
            case Kind::FiniteCyclic: return 1;
            case Kind::InfiniteSumZ2: return -1;
            case Kind::DirectSum: {
                int total = 0;
                for (const auto& p : parts) {
                    int l = p.word_length();
                    if (l < 0) return -1;
                    total += l;
                }
                return total;
            }
        }
        return -1;
    }
};

struct GroupElement {
    int group_id = 0;
    std::vector<std::int64_t> word;

    bool operator==(const GroupElement& o) const {
        return group_id == o.group_id && word == o.word;
    }
};

namespace detail {

inline void trim_z2(std::vector<std::int64_t>& w, std::size_t from) {
    while (w.size() > from && w.back() == 0) w.pop_back();
}

// componentwise sum written into `out`, normalizing cyclic residues and Z2 digits
inline void compose_slice(const GroupDescriptor& g, const std::vector<std::int64_t>& a,
                          std::size_t ia, const std::vector<std::int64_t>& b, std::size_t ib,
                          std::vector<std::int64_t>& out) {
    switch (g.kind) {
        case GroupDescriptor::Kind::FreeAbelian:
            for (int k = 0; k < g.param; ++k)
                out.push_back((ia + k < a.size() ? a[ia + k] : 0) +
                              (ib + k < b.size() ? b[ib + k] : 0));
            break;
        case GroupDescriptor::Kind::FiniteCyclic: {
            std::int64_t s = (ia < a.size() ? a[ia] : 0) + (ib < b.size() ? b[ib] : 0);
            s %= g.param;
            if (s < 0) s += g.param;
            out.push_back(s);
            break;
        }
        case GroupDescriptor::Kind::InfiniteSumZ2: {
            std::size_t begin = out.size();
            std::size_t na = a.size() > ia ? a.size() - ia : 0;
            std::size_t nb = b.size() > ib ? b.size() - ib : 0;
            for (std::size_t k = 0; k < std::max(na, nb); ++k) {
                std::int64_t s = (k < na ? a[ia + k] : 0) ^ (k < nb ? b[ib + k] : 0);
                out.push_back(s);
            }
            trim_z2(out, begin);
            break;
        }
        case GroupDescriptor::Kind::DirectSum: {
            std::size_t oa = ia, ob = ib;
            for (const auto& p : g.parts) {
                compose_slice(p, a, oa, b, ob, out);
                int l = p.word_length();
                if (l < 0) break;  // variable tail is last by construction
                oa += static_cast<std::size_t>(l);
                ob += static_cast<std::size_t>(l);
            }
            break;
        }
    }
}

inline void invert_slice(const GroupDescriptor& g, const std::vector<std::int64_t>& a,
                         std::size_t ia, std::vector<std::int64_t>& out) {
    switch (g.kind) {
        case GroupDescriptor::Kind::FreeAbelian:
            for (int k = 0; k < g.param; ++k) out.push_back(ia + k < a.size() ? -a[ia + k] : 0);
            break;
        case GroupDescriptor::Kind::FiniteCyclic: {
            std::int64_t v = ia < a.size() ? a[ia] : 0;
            out.push_back(v == 0 ? 0 : g.param - v);
            break;
        }
        case GroupDescriptor::Kind::InfiniteSumZ2:  // self-inverse digits
            for (std::size_t k = ia; k < a.size(); ++k) out.push_back(a[k]);
            break;
        case GroupDescriptor::Kind::DirectSum: {
            std::size_t oa = ia;
            for (const auto& p : g.parts) {
                invert_slice(p, a, oa, out);
                int l = p.word_length();
                if (l < 0) break;
                oa += static_cast<std::size_t>(l);
            }
            break;
        }
    }
}

}  // namespace detail

inline GroupElement identity(const GroupDescriptor& g, int group_id = 0) {
    int l = g.word_length();
    return {group_id, std::vector<std::int64_t>(l < 0 ? 0 : static_cast<std::size_t>(l), 0)};
}

inline GroupElement compose(const GroupDescriptor& g, const GroupElement& a,
                            const GroupElement& b) {
    require(a.group_id == b.group_id, "compose: elements of different groups");
    GroupElement r{a.group_id, {}};
    r.word.reserve(std::max(a.word.size(), b.word.size()));
    detail::compose_slice(g, a.word, 0, b.word, 0, r.word);
    if (int l = g.word_length(); l >= 0) r.word.resize(static_cast<std::size_t>(l), 0);
    return r;
}

inline GroupElement inverse(const GroupDescriptor& g, const GroupElement& a) {
    GroupElement r{a.group_id, {}};
    r.word.reserve(a.word.size());
    detail::invert_slice(g, a.word, 0, r.word);
    if (int l = g.word_length(); l >= 0) r.word.resize(static_cast<std::size_t>(l), 0);
    return r;
}

// deterministic total order on same-group words (shorter first, then lexicographic)
inline bool word_less(const GroupElement& a, const GroupElement& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
}

struct FolnerSet {
    int index = 0;
    std::vector<GroupElement> elements;
};

// Number of elements of the index-N Folner set, before materialization.
inline std::uint64_t folner_size(const GroupDescriptor& g, int index) {
    require(index >= 0, "folner_size: index must be >= 0");
    switch (g.kind) {
        case GroupDescriptor::Kind::FreeAbelian: {
            std::uint64_t side = 2ull * static_cast<std::uint64_t>(index) + 1ull;
            std::uint64_t total = 1;
            for (int k = 0; k < g.param; ++k) {
                require(total <= UINT64_MAX / side, "folner_size: overflow");
                total *= side;
            }
            return total;
        }
        case GroupDescriptor::Kind::FiniteCyclic: return static_cast<std::uint64_t>(g.param);
        case GroupDescriptor::Kind::InfiniteSumZ2:
            require(index < 63, "folner_size: Z2 sum index too large");
            return 1ull << index;
        case GroupDescriptor::Kind::DirectSum: {
            std::uint64_t total = 1;
            for (const auto& p : g.parts) {
                std::uint64_t s = folner_size(p, index);
                require(s == 0 || total <= UINT64_MAX / s, "folner_size: overflow");
                total *= s;
            }
            return total;
        }
    }
    return 0;
}

namespace detail {

// Enumerates the index-N set in canonical order: integer ranges ascending,
// cyclic residues ascending, Z2 digit vectors in binary counting order
// (digit 1 fastest), direct sums with the first component slowest.
template <typename Fn>
void for_each_slice(const GroupDescriptor& g, int index, std::vector<std::int64_t>& word,
                    std::size_t part, const std::vector<const GroupDescriptor*>& flat, Fn&& fn) {
    if (part == flat.size()) {
        fn(word);
        return;
    }
    const GroupDescriptor& p = *flat[part];
    switch (p.kind) {
        case GroupDescriptor::Kind::FreeAbelian:
            // rank components were flattened, so param == 1 here
            for (std::int64_t v = -index; v <= index; ++v) {
                word.push_back(v);
                for_each_slice(g, index, word, part + 1, flat, fn);
                word.pop_back();
            }
            break;
        case GroupDescriptor::Kind::FiniteCyclic:
            for (std::int64_t v = 0; v < p.param; ++v) {
                word.push_back(v);
                for_each_slice(g, index, word, part + 1, flat, fn);
                word.pop_back();
            }
            break;
        case GroupDescriptor::Kind::InfiniteSumZ2: {
            std::uint64_t n = 1ull << index;
            std::size_t base = word.size();
            for (std::uint64_t i = 0; i < n; ++i) {
                for (int k = 0; k < index; ++k) word.push_back((i >> k) & 1ull);
                trim_z2(word, base);
                fn(word);  // Z2 tail is always the last slot
                word.resize(base);
            }
            break;
        }
        case GroupDescriptor::Kind::DirectSum: break;  // flattened away
    }
}

inline void flatten(const GroupDescriptor& g, std::vector<const GroupDescriptor*>& out) {
    switch (g.kind) {
        case GroupDescriptor::Kind::DirectSum:
            for (const auto& p : g.parts) flatten(p, out);
            break;
        case GroupDescriptor::Kind::FreeAbelian:
            // split rank-r into r unit slots so enumeration nests per coordinate
            for (int k = 0; k < g.param; ++k) {
                static const GroupDescriptor unit = GroupDescriptor::free_abelian(1);
                out.push_back(&unit);
            }
            break;
        default: out.push_back(&g); break;
    }
}

}  // namespace detail

// Visits every element of the index-N Folner set in canonical order without
// materializing the set. Z2-sum digits beyond `index` are zero.
template <typename Fn>
void for_each_folner(const GroupDescriptor& g, int index, Fn&& fn, int group_id = 0) {
    require(index >= 0, "for_each_folner: index must be >= 0");
    std::vector<const GroupDescriptor*> flat;
    detail::flatten(g, flat);
    std::vector<std::int64_t> word;
    GroupElement e{group_id, {}};
    detail::for_each_slice(g, index, word, 0, flat,
                           [&](const std::vector<std::int64_t>& w) {
                               e.word = w;
                               fn(e);
                           });
}

// Largest index whose canonical Folner set holds at most `cap` elements
// (index 1 when even that overshoots).
inline int folner_index_within(const GroupDescriptor& g, long long cap) {
    require(cap >= 1, "folner_index_within: cap must be positive");
    int n = 1;
    while (folner_size(g, n + 1) <= static_cast<std::uint64_t>(cap)) ++n;
    return n;
}

// Smallest index whose canonical Folner set holds at least `target` elements.
// Finite groups plateau at their full size; the plateau index is returned.
inline int folner_index_reaching(const GroupDescriptor& g, long long target) {
    require(target >= 1, "folner_index_reaching: target must be positive");
    int n = 1;
    while (folner_size(g, n) < static_cast<std::uint64_t>(target)) {
        if (folner_size(g, n + 1) == folner_size(g, n)) break;
        ++n;
    }
    return n;
}

inline constexpr std::uint64_t folner_element_cap = 1ull << 22;

inline FolnerSet folner_set(const GroupDescriptor& g, int index, int group_id = 0) {
    std::uint64_t n = folner_size(g, index);
    if (n > folner_element_cap)
        throw resource_error("folner_set: index " + std::to_string(index) + " materializes " +
                             std::to_string(n) + " elements (cap " +
                             std::to_string(folner_element_cap) + ")");
    FolnerSet f;
    f.index = index;
    f.elements.reserve(static_cast<std::size_t>(n));
    for_each_folner(g, index, [&](const GroupElement& e) { f.elements.push_back(e); }, group_id);
    return f;
}

// Generators in canonical order. For InfiniteSumZ2 the group has no finite
// generating set; `z2_limit` truncates to the digits that can matter.
inline std::vector<GroupElement> generators(const GroupDescriptor& g, int group_id = 0,
                                            int z2_limit = 0) {
    std::vector<GroupElement> out;
    GroupElement id = identity(g, group_id);
    switch (g.kind) {
        case GroupDescriptor::Kind::FreeAbelian:
            for (int k = 0; k < g.param; ++k)
                for (std::int64_t s : {+1, -1}) {
                    GroupElement e = id;
                    e.word[static_cast<std::size_t>(k)] = s;
                    out.push_back(e);
                }
            break;
        case GroupDescriptor::Kind::FiniteCyclic: {
            if (g.param == 1) break;
            GroupElement e = id;
            e.word[0] = 1;
            out.push_back(e);
            if (g.param > 2) {
                e.word[0] = g.param - 1;
                out.push_back(e);
            }
            break;
        }
        case GroupDescriptor::Kind::InfiniteSumZ2:
            require(z2_limit > 0, "generators: Z2 sum needs an explicit digit limit");
            for (int k = 0; k < z2_limit; ++k) {
                GroupElement e{group_id, std::vector<std::int64_t>(static_cast<std::size_t>(k) + 1, 0)};
                e.word.back() = 1;
                out.push_back(e);
            }
            break;
        case GroupDescriptor::Kind::DirectSum: {
            std::size_t offset = 0;
            for (const auto& p : g.parts) {
                auto sub = generators(p, group_id, z2_limit);
                for (auto& e : sub) {
                    std::vector<std::int64_t> w(offset, 0);
                    w.insert(w.end(), e.word.begin(), e.word.end());
                    out.push_back({group_id, std::move(w)});
                }
                int l = p.word_length();
                if (l < 0) break;
                offset += static_cast<std::size_t>(l);
            }
            // restore fixed total length where defined
            if (int l = g.word_length(); l >= 0)
                for (auto& e : out) e.word.resize(static_cast<std::size_t>(l), 0);
            break;
        }
    }
    return out;
}

}  // namespace orbitkit
