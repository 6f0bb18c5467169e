#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

// Decorating a tree subdivides every D-edge {key, key.a} into the a, b, a
// colored path  key -- near -- far -- key.a. The two inserted vertices carry
// only the colors a and b; every other letter fixes them. Old vertices keep
// their full valency.
enum class VTag { old_v, new_near, new_far };

struct DecoratedVertex {
    VTag tag = VTag::old_v;
    ReducedWord base;

    DecoratedVertex() : base(3) {}
    DecoratedVertex(VTag t, ReducedWord b) : tag(t), base(std::move(b)) {}

    static DecoratedVertex root(int alphabet) {
        return DecoratedVertex(VTag::old_v, ReducedWord(alphabet));
    }

    bool is_old() const { return tag == VTag::old_v; }

    bool operator==(const DecoratedVertex& o) const { return tag == o.tag && base == o.base; }
    bool operator!=(const DecoratedVertex& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string addr = base.empty() ? "." : base.str();
        switch (tag) {
            case VTag::old_v: return addr;
            case VTag::new_near: return "near@" + addr;
            case VTag::new_far: return "far@" + addr;
        }
        return addr;
    }
};

struct VertexHash {
    std::size_t operator()(const DecoratedVertex& v) const {
        return std::hash<std::string>()(v.base.str()) * 3 + static_cast<std::size_t>(v.tag);
    }
};

inline bool vertex_less(const DecoratedVertex& x, const DecoratedVertex& y) {
    if (x.base != y.base) return length_lex_less(x.base, y.base);
    return static_cast<int>(x.tag) < static_cast<int>(y.tag);
}

// "." is the root, a plain address is an Old vertex, "near@k" and "far@k"
// are the inserted vertices of the D-edge with key k ("." for the empty key).
inline DecoratedVertex parse_vertex(const TreeFamily& fam, const std::string& text) {
    if (text.empty()) throw InputError("empty vertex text");
    auto parse_addr = [&fam](const std::string& s) {
        std::string raw = s == "." ? "" : s;
        ReducedWord w = ReducedWord::reduce(raw, fam.alphabet());
        if (w.str() != raw) throw InputError("address '" + raw + "' is not reduced");
        return w;
    };
    VTag tag = VTag::old_v;
    std::string addr = text;
    if (text.rfind("near@", 0) == 0) {
        tag = VTag::new_near;
        addr = text.substr(5);
    } else if (text.rfind("far@", 0) == 0) {
        tag = VTag::new_far;
        addr = text.substr(4);
    }
    ReducedWord base = parse_addr(addr);
    if (tag != VTag::old_v && !fam.is_d_key(base))
        throw InputError("'" + base.str() + "' is not a D-key of this family");
    return DecoratedVertex(tag, base);
}

inline void require_valid_vertex(const TreeFamily& fam, const DecoratedVertex& v) {
    if (v.base.alphabet() != fam.alphabet()) throw InputError("vertex alphabet mismatch");
    if (v.tag != VTag::old_v && !fam.is_d_key(v.base))
        throw InputError("invalid vertex: tag " + v.to_string() + " on a non-key address");
}

// Neighbor along color g, or nullopt when the vertex has no g-colored edge.
inline std::optional<DecoratedVertex> neighbor(const TreeFamily& fam, const DecoratedVertex& v,
                                               char g) {
    require_valid_vertex(fam, v);
    require_letter(g, fam.alphabet());
    switch (v.tag) {
        case VTag::old_v: {
            if (fam.edge_is_decorated(v.base, g)) {
                if (v.base.empty() || v.base.back() != 'a')
                    return DecoratedVertex(VTag::new_near, v.base);
                ReducedWord key(fam.alphabet());
                for (std::size_t i = 0; i + 1 < v.base.size(); ++i) key = key.append(v.base.at(i));
                return DecoratedVertex(VTag::new_far, key);
            }
            auto n = fam.plain_neighbor(v.base, g);
            if (!n) return std::nullopt;
            return DecoratedVertex(VTag::old_v, *n);
        }
        case VTag::new_near: {
            if (g == 'a') return DecoratedVertex(VTag::old_v, v.base);
            if (g == 'b') return DecoratedVertex(VTag::new_far, v.base);
            return std::nullopt;
        }
        case VTag::new_far: {
            if (g == 'a') {
                ReducedWord far = v.base;
                far = far.append('a');
                return DecoratedVertex(VTag::old_v, far);
            }
            if (g == 'b') return DecoratedVertex(VTag::new_near, v.base);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline std::vector<std::pair<char, DecoratedVertex>> neighbors(const TreeFamily& fam,
                                                               const DecoratedVertex& v) {
    std::vector<std::pair<char, DecoratedVertex>> out;
    for (int i = 0; i < fam.alphabet(); ++i) {
        char g = static_cast<char>('a' + i);
        if (auto n = neighbor(fam, v, g)) out.emplace_back(g, *n);
    }
    return out;
}

inline int degree(const TreeFamily& fam, const DecoratedVertex& v) {
    return static_cast<int>(neighbors(fam, v).size());
}

// The generator g moves v to its g-neighbor when that edge exists and fixes
// v otherwise.
inline DecoratedVertex apply_letter(const TreeFamily& fam, char g, const DecoratedVertex& v) {
    auto n = neighbor(fam, v, g);
    return n ? *n : v;
}

// Number of D-edges crossed by the root path to the Old vertex at `addr`.
// Addresses are reduced, so an a-step never leaves an address ending in a
// and the step's key is the current prefix itself.
inline int crossings(const TreeFamily& fam, const ReducedWord& addr) {
    int count = 0;
    ReducedWord prefix(fam.alphabet());
    for (std::size_t i = 0; i < addr.size(); ++i) {
        if (addr.at(i) == 'a' && fam.is_d_key(prefix)) ++count;
        prefix = prefix.append(addr.at(i));
    }
    return count;
}

// Distance from the root in the decorated tree. Each crossed D-edge turns
// one plain step into three.
inline long deco_dist_from_root(const TreeFamily& fam, const DecoratedVertex& v) {
    require_valid_vertex(fam, v);
    long base = static_cast<long>(v.base.size()) + 2L * crossings(fam, v.base);
    switch (v.tag) {
        case VTag::old_v: return base;
        case VTag::new_near: return base + 1;
        case VTag::new_far: return base + 2;
    }
    return base;
}

} // namespace treesub
