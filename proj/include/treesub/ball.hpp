#pragma once

#include <array>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"

namespace treesub {

// Induced subgraph of the decorated tree on the vertices within `radius` of
// the center. Vertex 0 is the center; the rest follow in breadth-first
// order with letters scanned alphabetically, so the layout is deterministic.
struct RootedBall {
    int radius = 0;
    int alphabet = 3;
    std::vector<DecoratedVertex> verts;
    std::vector<long> dist;
    std::vector<std::array<int, 5>> adj; // per color, -1 when absent

    std::size_t size() const { return verts.size(); }
};

inline RootedBall extract_ball(const TreeFamily& fam, const DecoratedVertex& center, int radius) {
    if (radius < 0) throw InputError("radius must be >= 0");
    require_valid_vertex(fam, center);
    RootedBall b;
    b.radius = radius;
    b.alphabet = fam.alphabet();
    std::unordered_map<std::string, int> index;
    b.verts.push_back(center);
    b.dist.push_back(0);
    index[center.to_string()] = 0;
    for (std::size_t head = 0; head < b.verts.size(); ++head) {
        if (b.dist[head] == radius) continue;
        for (const auto& [g, w] : neighbors(fam, b.verts[head])) {
            (void)g;
            std::string key = w.to_string();
            if (index.find(key) == index.end()) {
                index[key] = static_cast<int>(b.verts.size());
                b.verts.push_back(w);
                b.dist.push_back(b.dist[head] + 1);
            }
        }
    }
    b.adj.assign(b.verts.size(), {-1, -1, -1, -1, -1});
    for (std::size_t i = 0; i < b.verts.size(); ++i) {
        if (b.dist[i] == radius) continue;
        for (const auto& [g, w] : neighbors(fam, b.verts[i])) {
            auto it = index.find(w.to_string());
            if (it == index.end()) continue;
            std::size_t gi = letter_index(g);
            b.adj[i][gi] = it->second;
            b.adj[static_cast<std::size_t>(it->second)][gi] = static_cast<int>(i);
        }
    }
    return b;
}

namespace detail {

inline void ball_code_rec(const RootedBall& b, int v, int parent, std::string& out) {
    for (int gi = 0; gi < b.alphabet; ++gi) {
        int w = b.adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(gi)];
        if (w < 0 || w == parent) continue;
        out.push_back(static_cast<char>('a' + gi));
        out.push_back('(');
        ball_code_rec(b, w, v, out);
        out.push_back(')');
    }
}

} // namespace detail

// Canonical form of the rooted colored ball. Colors are unique per vertex,
// so a color-preserving rooted isomorphism leaves no ordering freedom and
// equality of codes is equivalent to isomorphism.
inline std::string canonical_code(const RootedBall& b) {
    std::string out = "r:" + std::to_string(b.radius) + ":";
    detail::ball_code_rec(b, 0, -1, out);
    return out;
}

inline std::string ball_code_at(const TreeFamily& fam, const DecoratedVertex& v, int radius) {
    return canonical_code(extract_ball(fam, v, radius));
}

// 2^-k metric between marked decorated trees: k is the largest radius (up to
// max_radius) at which the rooted balls around the two centers are still
// isomorphic. When the balls agree even at max_radius the points are not
// separated at this resolution and the result is unresolved.
struct TauDistance {
    bool resolved = false;
    int k = 0;

    double value() const { return std::ldexp(1.0, -k); }

    std::string to_string() const {
        if (!resolved) return "unresolved@" + std::to_string(k);
        return "2^-" + std::to_string(k);
    }
};

inline TauDistance dist_tau(const TreeFamily& fa, const DecoratedVertex& va, const TreeFamily& fb,
                            const DecoratedVertex& vb, int max_radius) {
    if (max_radius < 0) throw InputError("max_radius must be >= 0");
    for (int r = 0; r <= max_radius; ++r) {
        if (ball_code_at(fa, va, r) != ball_code_at(fb, vb, r)) {
            TauDistance d;
            d.resolved = true;
            d.k = r == 0 ? 0 : r - 1;
            return d;
        }
    }
    TauDistance d;
    d.resolved = false;
    d.k = max_radius;
    return d;
}

inline const char* dot_color(char g) {
    switch (g) {
        case 'a': return "red";
        case 'b': return "blue";
        case 'c': return "green";
        case 'd': return "orange";
        case 'e': return "purple";
    }
    return "black";
}

// Graphviz rendering of a decorated ball. Inserted vertices show their tag.
inline std::string dot_ball(const RootedBall& b) {
    std::string out = "graph ball {\n  node [shape=circle fontsize=10];\n";
    for (std::size_t i = 0; i < b.verts.size(); ++i) {
        out += "  v" + std::to_string(i) + " [label=\"" + b.verts[i].to_string() + "\"";
        if (i == 0) out += " style=bold";
        if (!b.verts[i].is_old()) out += " shape=box";
        out += "];\n";
    }
    for (std::size_t i = 0; i < b.verts.size(); ++i)
        for (int gi = 0; gi < b.alphabet; ++gi) {
            int w = b.adj[i][static_cast<std::size_t>(gi)];
            if (w < 0 || static_cast<std::size_t>(w) < i) continue;
            char g = static_cast<char>('a' + gi);
            out += "  v" + std::to_string(i) + " -- v" + std::to_string(w) + " [color=" +
                   dot_color(g) + " label=\"" + std::string(1, g) + "\"];\n";
        }
    out += "}\n";
    return out;
}

// Graphviz rendering of the undecorated tree out to `radius`, with D-edges
// dashed. Vertices are labeled by address.
inline std::string dot_plain_window(const TreeFamily& fam, int radius) {
    if (radius < 0) throw InputError("radius must be >= 0");
    std::string out = "graph tree {\n  node [shape=circle fontsize=10];\n";
    std::vector<ReducedWord> order{ReducedWord(fam.alphabet())};
    std::unordered_map<std::string, int> index{{"", 0}};
    std::vector<int> dist{0};
    out += "  v0 [label=\".\" style=bold];\n";
    for (std::size_t head = 0; head < order.size(); ++head) {
        if (dist[head] == radius) continue;
        for (const auto& [g, w] : fam.plain_neighbors(order[head])) {
            if (index.find(w.str()) != index.end()) continue;
            int id = static_cast<int>(order.size());
            index[w.str()] = id;
            order.push_back(w);
            dist.push_back(dist[head] + 1);
            out += "  v" + std::to_string(id) + " [label=\"" + w.str() + "\"];\n";
            std::string style = fam.edge_is_decorated(order[head], g) ? " style=dashed penwidth=2" : "";
            out += "  v" + std::to_string(head) + " -- v" + std::to_string(id) + " [color=" +
                   dot_color(g) + style + "];\n";
        }
    }
    out += "}\n";
    return out;
}

} // namespace treesub
