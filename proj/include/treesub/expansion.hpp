#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/census.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/gamma5.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

// Exact fraction with a positive denominator, always in lowest terms.
// Magnitudes here stay far below overflow: numerators count vertices of
// finite windows.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw InputError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    explicit Rational(long long n) : num(n), den(1) {}

    Rational operator+(const Rational& o) const {
        return Rational(num * o.den + o.num * den, den * o.den);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num * o.den - o.num * den, den * o.den);
    }
    Rational operator/(long long k) const { return Rational(num, den * k); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }

// |union of w(F) over the listed words, together with F| / |F|, exact.
// Equals 1 exactly when every word maps F onto itself.
inline Rational ratio(const TreeFamily& fam, const std::vector<ReducedWord>& words,
                      const std::vector<DecoratedVertex>& f) {
    if (f.empty()) throw InputError("ratio needs a nonempty vertex set");
    if (words.empty()) throw InputError("ratio needs at least one word");
    std::unordered_set<DecoratedVertex, VertexHash> base;
    for (const DecoratedVertex& v : f) {
        require_valid_vertex(fam, v);
        base.insert(v);
    }
    std::unordered_set<DecoratedVertex, VertexHash> joined = base;
    for (const ReducedWord& w : words) {
        if (w.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
        for (const DecoratedVertex& v : base) joined.insert(apply_word(fam, w, v));
    }
    return Rational(static_cast<long long>(joined.size()), static_cast<long long>(base.size()));
}

enum class SearchStrategy {
    automatic,  // exhaustive when the window allows it, greedy otherwise
    exhaustive, // every connected induced subgraph up to max_size
    greedy,     // seeded growth restarts, upper bound on the infimum
    orbit,      // orbit scan, certified lower bound for every small set
};

struct ExpansionReport {
    TreeFamily family = TreeFamily::plain(5);
    std::vector<ReducedWord> generators;
    SearchStrategy strategy = SearchStrategy::automatic;
    long max_size = 0;
    long window = 0;
    std::size_t tested = 0;               // sets evaluated, or orbits followed
    Rational min_ratio = Rational(1);
    bool certified_floor = false;         // bound covers every set up to max_size
    std::string label;                    // what the number proves
    std::vector<DecoratedVertex> worst_set;

    Rational delta() const { return min_ratio - Rational(1); }
    Rational m(long long c_threshold) const {
        if (c_threshold < 1) throw InputError("threshold constant must be positive");
        return treesub::min(Rational(1, c_threshold), delta());
    }
    std::size_t r_gen() const { return generators.size(); }
};

namespace detail {

struct WindowGraph {
    std::vector<DecoratedVertex> verts;
    std::unordered_map<DecoratedVertex, int, VertexHash> index;
    std::vector<std::vector<int>> adj;
};

inline WindowGraph window_graph(const TreeFamily& fam, long window) {
    WindowGraph g;
    scan_window(fam, window, [&](const DecoratedVertex& v, long) {
        g.index.emplace(v, static_cast<int>(g.verts.size()));
        g.verts.push_back(v);
    });
    g.adj.resize(g.verts.size());
    for (std::size_t i = 0; i < g.verts.size(); ++i) {
        for (auto& [c, n] : neighbors(fam, g.verts[i])) {
            auto it = g.index.find(n);
            if (it != g.index.end()) g.adj[i].push_back(it->second);
        }
        std::sort(g.adj[i].begin(), g.adj[i].end());
    }
    return g;
}

// Enumerates every connected induced subgraph of at most max_size vertices
// exactly once: grow from each anchor using only vertices of larger index,
// extending with neighbors not adjacent to the current set through an
// earlier vertex.
template <class F>
inline void for_each_connected_subset(const WindowGraph& g, long max_size, F&& emit) {
    std::vector<int> sub;
    std::vector<char> blocked(g.verts.size(), 0);
    std::vector<int> ext;
    auto extend = [&](auto&& self) -> void {
        emit(sub);
        if (static_cast<long>(sub.size()) >= max_size) return;
        std::vector<int> local = ext;
        while (!local.empty()) {
            int u = local.back();
            local.pop_back();
            ext = local;
            std::vector<int> added;
            for (int w : g.adj[static_cast<std::size_t>(u)]) {
                if (blocked[static_cast<std::size_t>(w)]) continue;
                blocked[static_cast<std::size_t>(w)] = 1;
                added.push_back(w);
                ext.push_back(w);
            }
            sub.push_back(u);
            self(self);
            sub.pop_back();
            for (int w : added) blocked[static_cast<std::size_t>(w)] = 0;
        }
        ext = std::move(local);
    };
    for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
        std::fill(blocked.begin(), blocked.end(), 0);
        for (int w = 0; w <= v; ++w) blocked[static_cast<std::size_t>(w)] = 1;
        sub = {v};
        ext.clear();
        for (int w : g.adj[static_cast<std::size_t>(v)]) {
            if (blocked[static_cast<std::size_t>(w)]) continue;
            blocked[static_cast<std::size_t>(w)] = 1;
            ext.push_back(w);
        }
        extend(extend);
    }
}

} // namespace detail

// Minimum of ratio() over families of vertex sets inside the window around
// the root. The exhaustive strategy visits every connected induced subgraph
// up to max_size and its minimum is exact over that class; greedy reports an
// upper bound on the infimum over the tested class only; orbit turns a clean
// orbit scan into a floor of 1 + 1/max_size valid for every nonempty set of
// at most max_size window vertices, connected or not, and when the scan
// finds a small invariant orbit it reports that set with ratio exactly 1.
inline ExpansionReport min_ratio_search(const TreeFamily& fam,
                                        const std::vector<ReducedWord>& words, long max_size,
                                        long window, SearchStrategy strategy = SearchStrategy::automatic,
                                        unsigned seed = 1901u) {
    if (max_size < 1 || max_size > 200) throw InputError("max_size must be in [1, 200]");
    if (window < 0 || window > 18) throw InputError("search windows cover radii up to 18");
    if (words.empty()) throw InputError("ratio search needs at least one word");
    for (const ReducedWord& w : words)
        if (w.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
    ExpansionReport rep;
    rep.family = fam;
    rep.generators = words;
    rep.max_size = max_size;
    rep.window = window;

    if (strategy == SearchStrategy::automatic) {
        std::uint64_t count = census(fam, window, 1).total().to_u64();
        strategy = (count <= 5000 && max_size <= 10) ? SearchStrategy::exhaustive
                                                     : SearchStrategy::greedy;
    }
    rep.strategy = strategy;

    if (strategy == SearchStrategy::orbit) {
        if (max_size > 64) throw InputError("orbit floors cover max_size up to 64");
        OrbitScan scan = orbit_certificate(fam, words, window, static_cast<std::size_t>(max_size));
        rep.tested = scan.orbits;
        if (scan.no_small_orbits()) {
            rep.min_ratio = Rational(max_size + 1, max_size);
            rep.certified_floor = true;
            rep.label = "certified lower bound for every nonempty set of at most " +
                        std::to_string(max_size) + " window vertices";
        } else {
            // The small orbit is closed under every word, so it is invariant
            // and no set can do better than its ratio of 1.
            std::vector<DecoratedVertex> orbit{scan.small_orbit_reps.front()};
            std::unordered_set<DecoratedVertex, VertexHash> seen{orbit.front()};
            for (std::size_t h = 0; h < orbit.size(); ++h)
                for (const ReducedWord& w : words) {
                    DecoratedVertex img = apply_word(fam, w, orbit[h]);
                    if (seen.insert(img).second) orbit.push_back(std::move(img));
                }
            std::sort(orbit.begin(), orbit.end(), vertex_less);
            rep.min_ratio = ratio(fam, words, orbit);
            rep.certified_floor = true;
            rep.label = "invariant set found, the infimum over all sets is 1";
            rep.worst_set = std::move(orbit);
        }
        return rep;
    }

    detail::WindowGraph g = detail::window_graph(fam, window);
    bool have = false;
    auto consider = [&](const std::vector<int>& sub) {
        std::vector<DecoratedVertex> f;
        f.reserve(sub.size());
        for (int i : sub) f.push_back(g.verts[static_cast<std::size_t>(i)]);
        Rational r = ratio(fam, words, f);
        ++rep.tested;
        if (!have || r < rep.min_ratio) {
            have = true;
            rep.min_ratio = r;
            rep.worst_set = std::move(f);
        }
    };

    if (strategy == SearchStrategy::exhaustive) {
        if (g.verts.size() > 5000)
            throw InputError("exhaustive search needs a window of at most 5000 vertices");
        if (max_size > 10) throw InputError("exhaustive search covers max_size up to 10");
        detail::for_each_connected_subset(g, max_size, consider);
        rep.certified_floor = false;
        rep.label = "exact minimum over connected sets of at most " + std::to_string(max_size) +
                    " window vertices";
    } else {
        // Seeded growth restarts: extend by the neighbor that keeps the
        // ratio smallest, recording every set along the way.
        std::mt19937 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, g.verts.size() - 1);
        for (int restart = 0; restart < 20; ++restart) {
            std::vector<int> sub{static_cast<int>(pick(rng))};
            std::unordered_set<int> in(sub.begin(), sub.end());
            consider(sub);
            while (static_cast<long>(sub.size()) < max_size) {
                int best = -1;
                Rational best_r(0);
                for (int i : sub)
                    for (int w : g.adj[static_cast<std::size_t>(i)]) {
                        if (in.count(w)) continue;
                        std::vector<int> next = sub;
                        next.push_back(w);
                        std::vector<DecoratedVertex> f;
                        for (int j : next) f.push_back(g.verts[static_cast<std::size_t>(j)]);
                        Rational r = ratio(fam, words, f);
                        if (best < 0 || r < best_r) {
                            best = w;
                            best_r = r;
                        }
                    }
                if (best < 0) break;
                sub.push_back(best);
                in.insert(best);
                consider(sub);
            }
        }
        rep.certified_floor = false;
        rep.label = "upper bound on the infimum over the tested class";
    }
    std::sort(rep.worst_set.begin(), rep.worst_set.end(), vertex_less);
    return rep;
}

struct ContractedGraph {
    std::vector<DecoratedVertex> nodes;          // plain vertices of the input, sorted
    std::vector<std::pair<int, int>> edges;      // indices into nodes, first < second
    std::size_t contracted_paths = 0;            // subdivided edges replaced by one edge
    std::size_t pruned = 0;                      // subdivided edges met but not fully contained
};

namespace detail {

inline bool contracted_connected(const ContractedGraph& g) {
    if (g.nodes.empty()) return true;
    std::vector<std::vector<int>> adj(g.nodes.size());
    for (auto [a, b] : g.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (int n : adj[static_cast<std::size_t>(queue[h])])
            if (!seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = 1;
                queue.push_back(n);
            }
    return queue.size() == g.nodes.size();
}

} // namespace detail

// Collapses the subdivisions inside a connected induced subgraph: a fully
// contained subdivided edge (plain, near, far, plain) becomes one edge
// between its plain endpoints, and inserted vertices whose subdivided edge
// sticks out of the subgraph are dropped. The nodes of the result are
// exactly the plain vertices of the input.
inline ContractedGraph contract_decorations(const TreeFamily& fam,
                                            const std::vector<DecoratedVertex>& g_verts) {
    if (g_verts.empty()) throw InputError("contraction needs a nonempty vertex set");
    std::unordered_set<DecoratedVertex, VertexHash> in;
    for (const DecoratedVertex& v : g_verts) {
        require_valid_vertex(fam, v);
        in.insert(v);
    }
    // Induced connectivity check.
    {
        std::vector<DecoratedVertex> queue{*in.begin()};
        std::unordered_set<DecoratedVertex, VertexHash> seen{queue.front()};
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto& [c, n] : neighbors(fam, queue[h]))
                if (in.count(n) && seen.insert(n).second) queue.push_back(n);
        if (seen.size() != in.size())
            throw InputError("contraction needs a connected induced subgraph");
    }
    ContractedGraph out;
    for (const DecoratedVertex& v : in)
        if (v.tag == VTag::old_v) out.nodes.push_back(v);
    std::sort(out.nodes.begin(), out.nodes.end(), vertex_less);
    std::unordered_map<DecoratedVertex, int, VertexHash> index;
    for (std::size_t i = 0; i < out.nodes.size(); ++i)
        index.emplace(out.nodes[i], static_cast<int>(i));
    auto add_edge = [&](const DecoratedVertex& a, const DecoratedVertex& b) {
        int ia = index.at(a);
        int ib = index.at(b);
        out.edges.emplace_back(std::min(ia, ib), std::max(ia, ib));
    };
    std::unordered_set<std::string> seen_paths;
    for (const DecoratedVertex& v : g_verts) {
        if (v.tag == VTag::old_v) {
            for (auto& [c, n] : neighbors(fam, v))
                if (n.tag == VTag::old_v && in.count(n) && vertex_less(v, n)) add_edge(v, n);
            continue;
        }
        if (!seen_paths.insert(v.base.str()).second) continue;
        DecoratedVertex near(VTag::new_near, v.base);
        DecoratedVertex far(VTag::new_far, v.base);
        DecoratedVertex head(VTag::old_v, v.base);
        DecoratedVertex tail(VTag::old_v, v.base.append('a'));
        if (in.count(near) && in.count(far) && in.count(head) && in.count(tail)) {
            add_edge(head, tail);
            ++out.contracted_paths;
        } else {
            ++out.pruned;
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

} // namespace treesub
