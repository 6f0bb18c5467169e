#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

// A coding pair (c, other) yields a small subgroup of the five letter group
// whose action on the decorated tree of c has a global fixed point while its
// action on the decorated tree of `other` pushes every vertex away. All of
// its words are bounces: (key a) g (key a)^-1 walks to the inserted vertex
// behind a key, applies a letter that fixes inserted vertices, and walks
// back. A bounce closes up at the root exactly when the family decorates
// that key's edge.
inline ReducedWord bounce_word(const ReducedWord& key, char g) {
    if (key.alphabet() != 5) throw InputError("bounce keys live in the five letter group");
    if (g != 'c' && g != 'd' && g != 'e')
        throw InputError("bounce letter must fix inserted vertices (c, d or e)");
    std::string leg = key.str() + 'a';
    std::string back(leg.rbegin(), leg.rend());
    return ReducedWord::reduce(leg + g + back, 5);
}

struct HGenerators {
    long step = 0; // first position where the two codes differ
    Code code;
    Code other;
    ReducedWord gamma = ReducedWord(5);   // e-bounce at the first key of `code`
    ReducedWord delta = ReducedWord(5);   // e-bounce at the second key
    std::vector<ReducedWord> conjugates;  // c, d and e bounces at the first key
    ReducedWord alpha = ReducedWord(5);   // found by the synchronized degree search

    // Sweep order used by the searches below, duplicates dropped.
    std::vector<ReducedWord> words() const {
        std::vector<ReducedWord> all{gamma};
        for (const ReducedWord& w : conjugates) all.push_back(w);
        all.push_back(delta);
        all.push_back(alpha);
        std::vector<ReducedWord> out;
        std::unordered_set<std::string> seen;
        for (ReducedWord& w : all)
            if (seen.insert(w.str()).second) out.push_back(std::move(w));
        return out;
    }
};

namespace detail {

// Shortest color path whose endpoint has degree 2 in `own` and degree 5 in
// `other`. Breadth first search over vertex pairs reached from the two roots
// by one and the same path; a step needs the edge on both sides, and a step
// repeating the previous color would just walk back. Pairs with equal labels
// see identical decorations on both sides unless they sit on the way to a
// key of one family only, so they are expanded only along those corridors;
// pairs with different labels are past a one-sided key already and are
// expanded in full.
inline std::string separation_path(const TreeFamily& own, const TreeFamily& other,
                                   const std::vector<std::string>& divergent_keys,
                                   std::size_t budget) {
    struct State {
        DecoratedVertex u;
        DecoratedVertex v;
        int parent;
        char letter;
    };
    auto on_corridor = [&](const DecoratedVertex& u) {
        if (u.tag != VTag::old_v) return false;
        const std::string& addr = u.base.str();
        for (const std::string& k : divergent_keys) {
            if (addr.size() > k.size() + 1) continue;
            std::string corridor = k + 'a';
            if (corridor.compare(0, addr.size(), addr) == 0) return true;
        }
        return false;
    };
    DecoratedVertex root = DecoratedVertex::root(5);
    std::vector<State> states{{root, root, -1, 0}};
    for (std::size_t h = 0; h < states.size(); ++h) {
        if (states.size() > budget) break;
        DecoratedVertex u = states[h].u;
        DecoratedVertex v = states[h].v;
        if (u == v && !on_corridor(u)) continue;
        for (char g : {'a', 'b', 'c', 'd', 'e'}) {
            if (g == states[h].letter) continue;
            std::optional<DecoratedVertex> nu = neighbor(own, u, g);
            if (!nu) continue;
            std::optional<DecoratedVertex> nv = neighbor(other, v, g);
            if (!nv) continue;
            if (degree(own, *nu) == 2 && degree(other, *nv) == 5) {
                std::string path(1, g);
                for (int at = static_cast<int>(h); at > 0; at = states[at].parent)
                    path.push_back(states[at].letter);
                std::reverse(path.begin(), path.end());
                return path;
            }
            states.push_back({std::move(*nu), std::move(*nv), static_cast<int>(h), g});
        }
    }
    throw InputError("separation search exhausted its state budget");
}

} // namespace detail

// Bounce subgroup data for a pair of codes differing at or before
// search_depth. gamma, delta and the conjugates come from the displayed
// bounce patterns at the first two keys of `code`; alpha conjugates e by the
// shortest word w with w(root) an inserted vertex in the tree of `code` but
// a plain vertex in the tree of `other`, found by the synchronized search.
// Every returned word is checked to fix the root of the first tree by a
// closed walk, and alpha to move the root of the second.
inline HGenerators build_h(const Code& code, const Code& other, long search_depth = 8) {
    code.validate();
    other.validate();
    if (search_depth < 1 || search_depth > 10)
        throw InputError("search depth must be in [1, 10]");
    long n0 = Code::first_difference(code, other, search_depth);
    if (n0 == 0)
        throw InputError("codes agree through position " + std::to_string(search_depth) +
                         ", no separating key to bounce at");
    HGenerators h;
    h.step = n0;
    h.code = code;
    h.other = other;
    h.gamma = bounce_word(TreeFamily::master_code_step(code, 1).second, 'e');
    h.delta = bounce_word(TreeFamily::master_code_step(code, 2).second, 'e');
    for (char g : {'c', 'd', 'e'})
        h.conjugates.push_back(bounce_word(TreeFamily::master_code_step(code, 1).second, g));

    long target_len = (1L << (n0 + 1)) - 2;
    long capacity = std::max<long>(256, 1L << (n0 + 2));
    TreeFamily fam_c = TreeFamily::master_code(code, capacity);
    TreeFamily fam_o = TreeFamily::master_code(other, capacity);
    std::vector<std::string> divergent;
    {
        std::unordered_set<std::string> other_keys;
        for (const ReducedWord& k : fam_o.d_keys_within(target_len + 2)) other_keys.insert(k.str());
        for (const ReducedWord& k : fam_c.d_keys_within(target_len + 2))
            if (!other_keys.erase(k.str())) divergent.push_back(k.str());
        for (const std::string& k : other_keys) divergent.push_back(k);
        std::sort(divergent.begin(), divergent.end());
    }
    std::string path = detail::separation_path(fam_c, fam_o, divergent, 1u << 20);
    std::string back(path.rbegin(), path.rend());
    h.alpha = ReducedWord::reduce(path + 'e' + back, 5);

    DecoratedVertex root = DecoratedVertex::root(5);
    for (const ReducedWord& w : h.words())
        if (apply_word(fam_c, w, root) != root)
            throw InputError("bounce word fails to close at the root: " + w.str());
    if (apply_word(fam_o, h.alpha, root) == root)
        throw InputError("separation word fixes the other root: " + h.alpha.str());
    return h;
}

namespace detail {

// Vertex key in 64 bits: 2 tag bits, 5 length bits, then the base letters in
// 3 bits each. Covers base addresses up to 19 letters, which holds for every
// vertex of a ball of radius <= 18.
inline std::uint64_t pack_vertex(const DecoratedVertex& v) {
    const std::string& s = v.base.str();
    if (s.size() > 19) throw InputError("packed vertex keys cover addresses up to 19 letters");
    std::uint64_t k = static_cast<std::uint64_t>(v.tag);
    k = (k << 5) | static_cast<std::uint64_t>(s.size());
    for (char ch : s) k = (k << 3) | static_cast<std::uint64_t>(ch - 'a' + 1);
    return k;
}

// Depth-first pass over the ball of the given radius around the root,
// without materializing adjacency lists.
template <class F>
inline void scan_window(const TreeFamily& fam, long radius, F&& visit) {
    struct Item {
        DecoratedVertex v;
        DecoratedVertex parent;
        bool has_parent;
        long dist;
    };
    DecoratedVertex root = DecoratedVertex::root(fam.alphabet());
    std::vector<Item> stack;
    stack.push_back({root, root, false, 0});
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        visit(it.v, it.dist);
        if (it.dist >= radius) continue;
        for (auto& [g, n] : neighbors(fam, it.v)) {
            if (it.has_parent && n == it.parent) continue;
            stack.push_back({std::move(n), it.v, true, it.dist + 1});
        }
    }
}

} // namespace detail

struct EscapeWitness {
    ReducedWord word = ReducedWord(5); // the escaping word
    DecoratedVertex vertex;            // member of the set it moves out
    DecoratedVertex image;             // where that member lands
};

// First listed word moving some member of f outside f, scanning words in the
// given order and set members in the given order. nullopt means f is
// invariant under every word. A word that maps the finite set f into f
// permutes it, so when no single word escapes no product of the words can
// either; max_steps only caps that redundant product stage.
inline std::optional<EscapeWitness> escape_witness(const TreeFamily& fam,
                                                   const std::vector<DecoratedVertex>& f,
                                                   const std::vector<ReducedWord>& words,
                                                   int max_steps = 3) {
    if (f.empty()) throw InputError("escape search needs a nonempty vertex set");
    if (words.empty()) throw InputError("escape search needs at least one word");
    if (max_steps < 1 || max_steps > 6)
        throw InputError("product length bound must be in [1, 6]");
    std::unordered_set<DecoratedVertex, VertexHash> members;
    for (const DecoratedVertex& v : f) {
        require_valid_vertex(fam, v);
        members.insert(v);
    }
    for (const ReducedWord& w : words) {
        if (w.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
        for (const DecoratedVertex& v : f) {
            DecoratedVertex img = apply_word(fam, w, v);
            if (!members.count(img)) return EscapeWitness{w, v, std::move(img)};
        }
    }
    return std::nullopt;
}

struct OrbitScan {
    long radius = 0;
    std::size_t max_states = 0;
    std::size_t scanned = 0; // vertices of the window
    std::size_t orbits = 0;  // distinct orbits met
    std::size_t escaped = 0; // orbits that leave the window
    std::size_t grew = 0;    // orbits that exceed max_states inside the window
    std::vector<DecoratedVertex> small_orbit_reps;

    bool no_small_orbits() const { return small_orbit_reps.empty(); }
};

// Follows the orbit of every window vertex under the given words. An orbit
// counts as small when it closes up inside the window with at most
// max_states vertices; leaving the window or outgrowing the bound ends the
// check early, and vertices met inside an already classified orbit are not
// rechecked. Zero small orbits means every nonempty invariant set within the
// window spreads across more than max_states vertices, since an invariant
// set is a union of orbits.
inline OrbitScan orbit_certificate(const TreeFamily& fam, const std::vector<ReducedWord>& gens,
                                   long radius, std::size_t max_states = 8) {
    if (radius < 0 || radius > 18) throw InputError("orbit scans cover radii up to 18");
    if (max_states < 1 || max_states > 64) throw InputError("max_states must be in [1, 64]");
    if (gens.empty()) throw InputError("orbit scan needs at least one word");
    for (const ReducedWord& g : gens)
        if (g.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
    OrbitScan scan;
    scan.radius = radius;
    scan.max_states = max_states;
    std::unordered_set<std::uint64_t> classified;
    detail::scan_window(fam, radius, [&](const DecoratedVertex& v, long) {
        ++scan.scanned;
        if (classified.count(detail::pack_vertex(v))) return;
        ++scan.orbits;
        std::vector<DecoratedVertex> orbit{v};
        std::unordered_set<std::uint64_t> states{detail::pack_vertex(v)};
        bool escaped = false;
        bool grew = false;
        for (std::size_t h = 0; h < orbit.size() && !escaped && !grew; ++h) {
            for (const ReducedWord& g : gens) {
                DecoratedVertex img = apply_word(fam, g, orbit[h]);
                if (deco_dist_from_root(fam, img) > radius) {
                    escaped = true;
                    break;
                }
                if (states.insert(detail::pack_vertex(img)).second) {
                    orbit.push_back(std::move(img));
                    if (orbit.size() > max_states) {
                        grew = true;
                        break;
                    }
                }
            }
        }
        // Everything explored shares v's orbit, so the verdict transfers.
        for (const DecoratedVertex& w : orbit) classified.insert(detail::pack_vertex(w));
        if (escaped)
            ++scan.escaped;
        else if (grew)
            ++scan.grew;
        else if (scan.small_orbit_reps.size() < 16)
            scan.small_orbit_reps.push_back(v);
    });
    return scan;
}

// Window vertices fixed by every one of the given words, sorted.
inline std::vector<DecoratedVertex> common_fixed_vertices(const TreeFamily& fam,
                                                          const std::vector<ReducedWord>& gens,
                                                          long radius) {
    if (radius < 0 || radius > 18) throw InputError("fixed point scans cover radii up to 18");
    if (gens.empty()) throw InputError("fixed point scan needs at least one word");
    for (const ReducedWord& g : gens)
        if (g.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
    std::vector<DecoratedVertex> out;
    detail::scan_window(fam, radius, [&](const DecoratedVertex& v, long) {
        for (const ReducedWord& g : gens)
            if (apply_word(fam, g, v) != v) return;
        out.push_back(v);
    });
    std::sort(out.begin(), out.end(), vertex_less);
    return out;
}

struct MasterWindow {
    TreeFamily tree = TreeFamily::plain(5);  // explicit family on the clipped vertex set
    long radius = 0;                         // clip distance from the root
    std::vector<long> level;                 // per vertex id, the stage that attached it
    std::vector<std::string> address;        // per vertex id, colors of the root path
    std::vector<std::vector<int>> endpoints; // per stage, ids of fully reached endpoints
};

// Ball of the given radius around the root of the tree behind master code
// families: stage n attaches a (2^n, b, a)-path and a (2^n, c, a)-path to
// every stage n-1 endpoint and marks the last edge of each new path. Paths
// are clipped at the radius, and a clipped path keeps neither its mark nor
// its endpoint. A master code family follows one branch of this tree, its
// stage-n anchor being the endpoint reached by flipping the code letter and
// its key the mark on the sibling path.
inline MasterWindow master_tree_window(long radius) {
    if (radius < 0 || radius > 126) throw InputError("window radius must be in [0, 126]");
    MasterWindow w;
    w.radius = radius;
    w.level.push_back(0);
    w.address.push_back("");
    w.endpoints.push_back({0});
    std::vector<std::tuple<int, int, char>> edges;
    std::vector<std::pair<int, int>> d_edges;
    std::vector<std::pair<int, long>> ends{{0, 0}}; // id and depth
    int next_id = 1;
    for (long n = 1; !ends.empty(); ++n) {
        std::vector<std::pair<int, long>> fresh;
        long len = 1L << n;
        for (auto [e, depth] : ends) {
            for (char head : {'b', 'c'}) {
                int cur = e;
                int prev = -1;
                char color = head;
                for (long i = 0; i < len && depth + i < radius; ++i) {
                    int id = next_id++;
                    edges.emplace_back(cur, id, color);
                    w.level.push_back(n);
                    w.address.push_back(w.address[static_cast<std::size_t>(cur)] + color);
                    prev = cur;
                    cur = id;
                    color = color == 'a' ? head : 'a';
                }
                if (depth + len <= radius) {
                    d_edges.emplace_back(prev, cur);
                    fresh.emplace_back(cur, depth + len);
                }
            }
        }
        if (static_cast<std::size_t>(n) >= w.endpoints.size()) w.endpoints.push_back({});
        for (auto [id, depth] : fresh) w.endpoints[static_cast<std::size_t>(n)].push_back(id);
        if (w.endpoints.back().empty()) w.endpoints.pop_back();
        ends = std::move(fresh);
    }
    w.tree = TreeFamily::explicit_finite(5, edges, d_edges);
    return w;
}

} // namespace treesub
