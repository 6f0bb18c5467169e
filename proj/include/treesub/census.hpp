#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/ball.hpp"
#include "treesub/bigint.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"

namespace treesub {

struct CensusEntry {
    std::string code;
    BigUint count;
    bool plain_class = false;
    std::optional<DecoratedVertex> witness; // farthest representative, least address on ties
    long witness_dist = -1;
};

struct CensusResult {
    int r = 0;
    long R = 0;
    std::vector<CensusEntry> entries; // sorted by code

    const CensusEntry* find(const std::string& code) const {
        for (const auto& e : entries)
            if (e.code == code) return &e;
        return nullptr;
    }

    BigUint total() const {
        BigUint t(0);
        for (const auto& e : entries) t.add(e.count);
        return t;
    }

    std::vector<std::string> codes() const {
        std::vector<std::string> out;
        for (const auto& e : entries) out.push_back(e.code);
        return out;
    }
};

namespace detail {

struct Group {
    std::size_t count = 0;
    std::optional<DecoratedVertex> witness;
    long witness_dist = -1;

    void add(const DecoratedVertex& v, long dist) {
        ++count;
        if (dist > witness_dist ||
            (dist == witness_dist && witness && v.to_string() < witness->to_string())) {
            witness_dist = dist;
            witness = v;
        }
    }
};

// Census by exhaustive enumeration; only for kinds whose balls are small.
inline CensusResult census_by_enumeration(const TreeFamily& fam, long R, int r) {
    RootedBall ball = extract_ball(fam, DecoratedVertex::root(fam.alphabet()),
                                   static_cast<int>(R));
    std::map<std::string, Group> groups;
    for (std::size_t i = 0; i < ball.size(); ++i)
        groups[ball_code_at(fam, ball.verts[i], r)].add(ball.verts[i], ball.dist[i]);
    CensusResult res;
    res.r = r;
    res.R = R;
    for (auto& [code, g] : groups) {
        CensusEntry e;
        e.code = code;
        e.count = BigUint(g.count);
        e.witness = g.witness;
        e.witness_dist = g.witness_dist;
        res.entries.push_back(std::move(e));
    }
    return res;
}

} // namespace detail

// Exact census of radius-r ball types over the radius-R ball around the root
// of the decorated tree. All vertices far from every D-edge share the plain
// type, whose count comes from closed forms; the remaining vertices are those
// with an inserted vertex within r-1 and are enumerated outright.
inline CensusResult census(const TreeFamily& fam, long R, int r) {
    if (R < 0 || R > 100000) throw InputError("census window R out of range");
    if (r < 1 || r > 16) throw InputError("census ball radius r out of range");
    if (fam.kind() == FamilyKind::line_tree || fam.kind() == FamilyKind::explicit_finite)
        return detail::census_by_enumeration(fam, R, r);
    if (fam.nested())
        throw InputError("census closed forms require a non-nested schedule");
    if (fam.capacity() < R + 3L * r)
        throw InputError("family capacity too small for this census window");

    const int k = fam.alphabet();

    // Vertices with an inserted vertex within r-1, keyed by name.
    std::unordered_map<std::string, std::pair<DecoratedVertex, long>> interesting;
    std::vector<ReducedWord> keys = fam.d_keys_within(R + r);
    for (const auto& key : keys)
        for (VTag t : {VTag::new_near, VTag::new_far}) {
            RootedBall nb = extract_ball(fam, DecoratedVertex(t, key), r - 1);
            for (const auto& v : nb.verts) {
                std::string name = v.to_string();
                if (interesting.find(name) == interesting.end())
                    interesting.emplace(name, std::make_pair(v, deco_dist_from_root(fam, v)));
            }
        }

    std::map<std::string, detail::Group> groups;
    std::size_t interesting_in_ball = 0;
    for (const auto& [name, vd] : interesting) {
        (void)name;
        if (vd.second > R) continue;
        ++interesting_in_ball;
        groups[ball_code_at(fam, vd.first, r)].add(vd.first, vd.second);
    }

    // Ball size: plain count, minus the two shells each D-edge pushes out of
    // range (its far subtree is displaced by 2), plus in-range inserted pairs.
    BigUint ball_size = plain_ball_size(k, static_cast<int>(R));
    for (const auto& key : keys) {
        long len = static_cast<long>(key.size());
        for (long m : {R - 1, R})
            if (m >= len + 1)
                ball_size.sub(BigUint::pow(static_cast<std::uint64_t>(k - 1),
                                           static_cast<unsigned>(m - len - 1)));
        if (len + 1 <= R) ball_size.add(BigUint(1));
        if (len + 2 <= R) ball_size.add(BigUint(1));
    }

    BigUint plain_count = ball_size;
    plain_count.sub(BigUint(interesting_in_ball));

    CensusResult res;
    res.r = r;
    res.R = R;
    for (auto& [code, g] : groups) {
        CensusEntry e;
        e.code = code;
        e.count = BigUint(g.count);
        e.witness = g.witness;
        e.witness_dist = g.witness_dist;
        res.entries.push_back(std::move(e));
    }

    if (!plain_count.is_zero()) {
        CensusEntry plain;
        plain.plain_class = true;
        plain.code = ball_code_at(TreeFamily::plain(k), DecoratedVertex::root(k), r);
        plain.count = plain_count;
        // Farthest plain representative: a periodic pattern whose ray avoids
        // every key and stays r-1 clear of all inserted vertices.
        if (R == 0) {
            plain.witness = DecoratedVertex::root(k);
            plain.witness_dist = 0;
        } else {
            std::vector<std::string> patterns;
            for (char x = 'a'; x < static_cast<char>('a' + k); ++x)
                for (char y = 'a'; y < static_cast<char>('a' + k); ++y) {
                    if (x == y) continue;
                    patterns.push_back(std::string() + x + y);
                }
            for (char x = 'a'; x < static_cast<char>('a' + k); ++x)
                for (char y = 'a'; y < static_cast<char>('a' + k); ++y)
                    for (char z = 'a'; z < static_cast<char>('a' + k); ++z) {
                        if (x == y || y == z || z == x) continue;
                        patterns.push_back(std::string() + x + y + z);
                    }
            for (const auto& pat : patterns) {
                std::string s;
                while (static_cast<long>(s.size()) < R) s += pat;
                s.resize(static_cast<std::size_t>(R));
                ReducedWord w = ReducedWord::reduce(s, k);
                if (static_cast<long>(w.size()) != R) continue;
                if (crossings(fam, w) != 0) continue;
                DecoratedVertex v(VTag::old_v, w);
                if (interesting.find(v.to_string()) != interesting.end()) continue;
                plain.witness = v;
                plain.witness_dist = R;
                break;
            }
        }
        res.entries.push_back(std::move(plain));
    }

    std::sort(res.entries.begin(), res.entries.end(),
              [](const CensusEntry& a, const CensusEntry& b) { return a.code < b.code; });
    return res;
}

// Ball types that keep reappearing far from the root: present in at least
// two of the given windows and witnessed at distance >= R/2 in the largest.
// These are the types realized by limits of the marked family.
inline std::vector<std::string> detect_limits(const TreeFamily& fam, int r,
                                              std::vector<long> windows) {
    if (windows.size() < 2) throw InputError("detect_limits needs at least two windows");
    std::sort(windows.begin(), windows.end());
    std::unordered_map<std::string, int> seen;
    for (std::size_t i = 0; i + 1 < windows.size(); ++i)
        for (const auto& e : census(fam, windows[i], r).entries) ++seen[e.code];
    std::vector<std::string> out;
    CensusResult last = census(fam, windows.back(), r);
    for (const auto& e : last.entries)
        if (seen.count(e.code) > 0 && e.witness_dist * 2 >= windows.back())
            out.push_back(e.code);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace treesub
