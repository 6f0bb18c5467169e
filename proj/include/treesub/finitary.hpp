#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treesub/errors.hpp"

namespace treesub {

// Finitely supported permutation of the positive integers. Only moved points
// are stored, as a sorted list of pairs (i, image of i); everything else is
// fixed. s() is the largest moved point, 0 for the identity.
class FinitaryPerm {
  public:
    FinitaryPerm() = default;

    static FinitaryPerm from_pairs(std::vector<std::pair<int, int>> pairs) {
        std::sort(pairs.begin(), pairs.end());
        std::set<int> domain;
        std::set<int> image;
        std::vector<std::pair<int, int>> kept;
        for (const auto& [i, j] : pairs) {
            if (i < 1 || j < 1) throw InputError("permutations act on positive integers");
            if (!domain.insert(i).second) throw InputError("point mapped twice");
            if (!image.insert(j).second) throw InputError("two points share an image");
            if (i != j) kept.push_back({i, j});
        }
        if (domain != image) throw InputError("moved points must map onto themselves");
        FinitaryPerm p;
        p.map_ = std::move(kept);
        return p;
    }

    // Cycle notation: "(1 3)(2 5 4)"; "e", "()" and "" denote the identity.
    static FinitaryPerm parse(const std::string& text) {
        if (text == "e" || text == "()" || text.empty()) return FinitaryPerm();
        std::vector<std::pair<int, int>> pairs;
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && text[pos] == ' ') ++pos;
        };
        skip_ws();
        while (pos < text.size()) {
            if (text[pos] != '(') throw InputError("expected '(' in cycle notation");
            ++pos;
            std::vector<int> cycle;
            while (true) {
                skip_ws();
                if (pos < text.size() && text[pos] == ')') {
                    ++pos;
                    break;
                }
                std::size_t start = pos;
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
                if (pos == start) throw InputError("expected a point or ')' in cycle notation");
                cycle.push_back(std::stoi(text.substr(start, pos - start)));
            }
            if (cycle.size() < 2) throw InputError("cycles need at least two points");
            for (std::size_t i = 0; i < cycle.size(); ++i)
                pairs.push_back({cycle[i], cycle[(i + 1) % cycle.size()]});
            skip_ws();
        }
        return from_pairs(std::move(pairs));
    }

    int apply(int i) const {
        for (const auto& [k, v] : map_)
            if (k == i) return v;
        return i;
    }

    bool is_identity() const { return map_.empty(); }

    int s() const { return map_.empty() ? 0 : map_.back().first; }

    int min_moved() const { return map_.empty() ? 0 : map_.front().first; }

    std::vector<int> support() const {
        std::vector<int> out;
        for (const auto& kv : map_) out.push_back(kv.first);
        return out;
    }

    FinitaryPerm inverse() const {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& [k, v] : map_) pairs.push_back({v, k});
        return from_pairs(std::move(pairs));
    }

    // (f * g)(x) = f(g(x)), g acts first.
    friend FinitaryPerm operator*(const FinitaryPerm& f, const FinitaryPerm& g) {
        std::set<int> points;
        for (const auto& kv : f.map_) points.insert(kv.first);
        for (const auto& kv : g.map_) points.insert(kv.first);
        std::vector<std::pair<int, int>> pairs;
        for (int x : points) pairs.push_back({x, f.apply(g.apply(x))});
        // Drop accidental fixed points, then let from_pairs validate.
        std::vector<std::pair<int, int>> moved;
        for (const auto& [k, v] : pairs)
            if (k != v) moved.push_back({k, v});
        return from_pairs(std::move(moved));
    }

    friend bool operator==(const FinitaryPerm& x, const FinitaryPerm& y) {
        return x.map_ == y.map_;
    }
    friend bool operator!=(const FinitaryPerm& x, const FinitaryPerm& y) {
        return !(x == y);
    }
    friend bool operator<(const FinitaryPerm& x, const FinitaryPerm& y) {
        return x.map_ < y.map_;
    }

    // Nontrivial cycles, each starting at its smallest point, ordered by
    // those smallest points.
    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::set<int> seen;
        for (const auto& kv : map_) {
            int start = kv.first;
            if (seen.count(start)) continue;
            std::vector<int> cycle{start};
            seen.insert(start);
            for (int x = apply(start); x != start; x = apply(x)) {
                cycle.push_back(x);
                seen.insert(x);
            }
            out.push_back(std::move(cycle));
        }
        return out;
    }

    std::string cycles_str() const {
        if (map_.empty()) return "e";
        std::string out;
        for (const std::vector<int>& cycle : cycles()) {
            out += '(';
            for (std::size_t i = 0; i < cycle.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(cycle[i]);
            }
            out += ')';
        }
        return out;
    }

    bool is_even() const {
        std::size_t swaps = 0;
        for (const std::vector<int>& cycle : cycles()) swaps += cycle.size() - 1;
        return swaps % 2 == 0;
    }

  private:
    std::vector<std::pair<int, int>> map_;
};

// A subgroup of the finitary symmetric group, given by a pure membership
// predicate, an enumerator of all its elements with support inside [1, W],
// and a display tag. Enumerations must be consistent with membership.
struct SubgroupOracle {
    std::function<bool(const FinitaryPerm&)> contains;
    std::function<std::vector<FinitaryPerm>(int)> window_elements;
    std::string description;
};

namespace detail {

// All permutations of the given points, identity first, ordered by image
// tuples. Guarded because the count is factorial in the point count.
inline std::vector<FinitaryPerm> all_perms_of(std::vector<int> points) {
    std::sort(points.begin(), points.end());
    if (points.size() > 9)
        throw InputError("window enumeration over more than 9 points is too large");
    std::vector<FinitaryPerm> out;
    std::vector<int> images = points;
    do {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < points.size(); ++i) pairs.push_back({points[i], images[i]});
        out.push_back(FinitaryPerm::from_pairs(std::move(pairs)));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

inline std::vector<int> range_points(int lo, int hi) {
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

} // namespace detail

inline SubgroupOracle oracle_cyclic(const FinitaryPerm& g) {
    std::vector<FinitaryPerm> powers{FinitaryPerm()};
    FinitaryPerm cur = g;
    while (!cur.is_identity()) {
        powers.push_back(cur);
        cur = g * cur;
        if (powers.size() > 100000) throw InputError("cyclic oracle order is too large");
    }
    return SubgroupOracle{
        [powers](const FinitaryPerm& x) {
            return std::find(powers.begin(), powers.end(), x) != powers.end();
        },
        [powers](int w) {
            std::vector<FinitaryPerm> out;
            for (const FinitaryPerm& p : powers)
                if (p.s() <= w) out.push_back(p);
            return out;
        },
        "<" + g.cycles_str() + ">"};
}

inline SubgroupOracle oracle_alternating() {
    return SubgroupOracle{[](const FinitaryPerm& x) { return x.is_even(); },
                          [](int w) {
                              std::vector<FinitaryPerm> out;
                              for (FinitaryPerm& p : detail::all_perms_of(detail::range_points(1, w)))
                                  if (p.is_even()) out.push_back(std::move(p));
                              return out;
                          },
                          "A0"};
}

inline SubgroupOracle oracle_symmetric() {
    return SubgroupOracle{[](const FinitaryPerm&) { return true; },
                          [](int w) { return detail::all_perms_of(detail::range_points(1, w)); },
                          "S0inf"};
}

// Permutations supported on odd points only; every even number is fixed.
inline SubgroupOracle oracle_fixing_evens() {
    auto odd_only = [](const FinitaryPerm& x) {
        for (int i : x.support())
            if (i % 2 == 0) return false;
        return true;
    };
    return SubgroupOracle{odd_only,
                          [](int w) {
                              std::vector<int> odds;
                              for (int i = 1; i <= w; i += 2) odds.push_back(i);
                              return detail::all_perms_of(odds);
                          },
                          "H_odd"};
}

// Deterministic enumeration of the finitary symmetric group: identity, then
// for n = 2, 3, ... the permutations of [1, n] moving n, by image tuples.
inline std::vector<FinitaryPerm> enumerate_finitary(std::size_t count) {
    std::vector<FinitaryPerm> out{FinitaryPerm()};
    for (int n = 2; out.size() < count; ++n) {
        for (FinitaryPerm& p : detail::all_perms_of(detail::range_points(1, n))) {
            if (p.s() != n) continue;
            out.push_back(std::move(p));
            if (out.size() == count) break;
        }
        if (n > 9) throw InputError("finitary enumeration request is too large");
    }
    out.resize(count);
    return out;
}

enum class Dichotomy { trivial_tail, contains_alternating_tail, neither };

inline std::string to_string(Dichotomy d) {
    switch (d) {
        case Dichotomy::trivial_tail: return "trivial-tail";
        case Dichotomy::contains_alternating_tail: return "contains-alternating-tail";
        default: return "neither";
    }
}

// Window form of the compactness dichotomy: does the subgroup meet the
// permutations supported on [l, W] only trivially, or does it contain the
// whole alternating group of that window? Containment is decided on the
// 3-cycle generators, triviality by filtering the window enumeration.
inline Dichotomy dichotomy_check(const SubgroupOracle& h, int l, int w) {
    if (l < 0) throw InputError("the tail cutoff must be nonnegative");
    if (w <= l) throw InputError("the window must extend past the tail cutoff");
    int lo = std::max(l, 1);
    if (w - lo >= 2) {
        bool all = true;
        for (int x = lo + 2; x <= w; ++x) {
            FinitaryPerm three = FinitaryPerm::from_pairs({{lo, lo + 1}, {lo + 1, x}, {x, lo}});
            if (!h.contains(three)) {
                all = false;
                break;
            }
        }
        if (all) return Dichotomy::contains_alternating_tail;
    }
    for (const FinitaryPerm& p : h.window_elements(w))
        if (!p.is_identity() && p.min_moved() >= lo) return Dichotomy::neither;
    return Dichotomy::trivial_tail;
}

namespace detail {

// Partitions of k into parts of size at least 2, parts descending, generated
// in descending lexicographic order.
inline std::vector<std::vector<int>> partitions_no_ones(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int cap) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(left, cap); part >= 2; --part) {
            if (left - part == 1) continue;
            cur.push_back(part);
            self(self, left - part, part);
            cur.pop_back();
        }
    };
    rec(rec, k, k);
    return out;
}

// Enumerates the conjugacy class with the given nontrivial cycle lengths on
// points of [lo, hi]: every member exactly once. Cycles are laid out with
// strictly increasing minima; points below a cycle's minimum stay fixed, so
// members supported anywhere in the window appear. The visitor may stop the
// walk; returns false when the budget ran out before the class was exhausted.
inline bool for_each_class_member(const std::vector<int>& type, int lo, int hi, long budget,
                                  const std::function<bool(const FinitaryPerm&)>& visit) {
    std::vector<std::vector<int>> cycles;
    long left = budget;
    bool stopped = false;
    auto rec = [&](auto&& self, std::vector<int> lengths, std::vector<int> avail) -> bool {
        if (stopped) return false;
        if (lengths.empty()) {
            if (left-- <= 0) return false;
            std::vector<std::pair<int, int>> pairs;
            for (const std::vector<int>& c : cycles)
                for (std::size_t i = 0; i < c.size(); ++i)
                    pairs.push_back({c[i], c[(i + 1) % c.size()]});
            if (!visit(FinitaryPerm::from_pairs(std::move(pairs)))) stopped = true;
            return !stopped;
        }
        for (std::size_t hi_idx = 0; hi_idx < avail.size(); ++hi_idx) {
            int head = avail[hi_idx];
            // Later cycle minima exceed this head, so earlier points drop out.
            std::vector<int> rest(avail.begin() + static_cast<long>(hi_idx) + 1, avail.end());
            std::vector<int> tried;
            for (std::size_t li = 0; li < lengths.size(); ++li) {
                if (std::find(tried.begin(), tried.end(), lengths[li]) != tried.end()) continue;
                tried.push_back(lengths[li]);
                int len = lengths[li];
                std::vector<int> remaining = lengths;
                remaining.erase(remaining.begin() + static_cast<long>(li));
                std::vector<int> cycle{head};
                auto arrange = [&](auto&& inner, std::vector<int> pool) -> bool {
                    if (static_cast<int>(cycle.size()) == len) {
                        cycles.push_back(cycle);
                        bool ok = self(self, remaining, pool);
                        cycles.pop_back();
                        return ok;
                    }
                    for (std::size_t i = 0; i < pool.size(); ++i) {
                        std::vector<int> next = pool;
                        next.erase(next.begin() + static_cast<long>(i));
                        cycle.push_back(pool[i]);
                        bool ok = inner(inner, std::move(next));
                        cycle.pop_back();
                        if (!ok) return false;
                    }
                    return true;
                };
                if (!arrange(arrange, rest)) return false;
            }
        }
        return true;
    };
    bool complete = rec(rec, type, range_points(lo, hi));
    return complete && !stopped;
}

// Conjugator mapping one permutation onto another of the same cycle type:
// cycles are paired by length, points aligned in cycle order, and the
// leftover points matched in increasing order so the support stays small.
inline FinitaryPerm align_conjugator(const FinitaryPerm& rho, const FinitaryPerm& delta) {
    std::vector<std::vector<int>> from = rho.cycles();
    std::vector<std::vector<int>> to = delta.cycles();
    auto by_len = [](const std::vector<int>& x, const std::vector<int>& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return x.front() < y.front();
    };
    std::sort(from.begin(), from.end(), by_len);
    std::sort(to.begin(), to.end(), by_len);
    if (from.size() != to.size()) throw InputError("conjugator needs equal cycle types");
    std::map<int, int> partial;
    for (std::size_t c = 0; c < from.size(); ++c) {
        if (from[c].size() != to[c].size()) throw InputError("conjugator needs equal cycle types");
        for (std::size_t i = 0; i < from[c].size(); ++i) partial[from[c][i]] = to[c][i];
    }
    std::set<int> sources;
    std::set<int> targets;
    for (const auto& [k, v] : partial) {
        sources.insert(k);
        targets.insert(v);
    }
    std::vector<int> unmatched_src;
    std::vector<int> unmatched_dst;
    for (int t : targets)
        if (!sources.count(t)) unmatched_src.push_back(t);
    for (int s : sources)
        if (!targets.count(s)) unmatched_dst.push_back(s);
    for (std::size_t i = 0; i < unmatched_src.size(); ++i)
        partial[unmatched_src[i]] = unmatched_dst[i];
    std::vector<std::pair<int, int>> pairs(partial.begin(), partial.end());
    FinitaryPerm g = FinitaryPerm::from_pairs(std::move(pairs));
    if (g * rho * g.inverse() != delta) throw InputError("conjugator alignment failed");
    return g;
}

inline bool disjoint_supports(const FinitaryPerm& x, const FinitaryPerm& y) {
    std::vector<int> a = x.support();
    std::vector<int> b = y.support();
    for (int i : a)
        if (std::find(b.begin(), b.end(), i) != b.end()) return false;
    return true;
}

} // namespace detail

// One step of the inductive non-compactness witness. The cutoff l clears the
// supports of everything built so far, the chosen conjugacy class of the
// [l, W] window meets the subgroup properly, and the step hands back the new
// conjugator and the class element that the conjugate subgroup must miss.
struct WitnessStep {
    long l = 0;
    std::vector<int> cycle_type;   // nontrivial cycle lengths of the class
    FinitaryPerm rho;              // class member inside the subgroup
    FinitaryPerm delta;            // class member outside it
    FinitaryPerm gamma_step;       // conjugator carrying rho to delta
    FinitaryPerm gamma;            // cumulative conjugator
    bool trivial_branch = false;   // no class met the subgroup at all
    bool first_bullet = false;     // delta avoids the conjugated subgroup
    bool second_bullet = false;    // all recorded deltas sit in gamma H gamma^-1
    bool commutes_with_history = false;
};

inline WitnessStep witness_step(const SubgroupOracle& h, const std::vector<WitnessStep>& history,
                                const FinitaryPerm& kappa, int w) {
    // The cutoff formula reads the conjugator through its largest moved point.
    long l = static_cast<long>(kappa.s());
    for (const WitnessStep& st : history) {
        l = std::max(l, static_cast<long>(st.gamma.s()));
        l = std::max(l, static_cast<long>(st.delta.s()));
    }
    l += 1;
    if (w - l + 1 < 2)
        throw InputError("window too small for the class search above the cutoff, enlarge it");

    const long member_budget = 20000;
    int m = static_cast<int>(w - l + 1);
    std::optional<FinitaryPerm> rho;
    std::optional<FinitaryPerm> delta;
    std::vector<int> chosen_type;
    bool any_h_member = false;
    std::optional<std::pair<std::vector<int>, FinitaryPerm>> disjoint_class;

    for (int k = 2; k <= std::min(m, 9) && !rho; ++k) {
        for (const std::vector<int>& type : detail::partitions_no_ones(k)) {
            std::optional<FinitaryPerm> in_h;
            std::optional<FinitaryPerm> out_h;
            std::optional<FinitaryPerm> first_member;
            bool complete = detail::for_each_class_member(
                type, static_cast<int>(l), w, member_budget, [&](const FinitaryPerm& p) {
                    if (!first_member) first_member = p;
                    if (h.contains(p)) {
                        any_h_member = true;
                        if (!in_h) in_h = p;
                    } else if (!out_h) {
                        out_h = p;
                    }
                    return !(in_h && out_h);
                });
            if (in_h && out_h) {
                rho = in_h;
                delta = out_h;
                chosen_type = type;
                break;
            }
            if (complete && !in_h && first_member && !disjoint_class)
                disjoint_class = {type, *first_member};
        }
    }

    WitnessStep step;
    step.l = l;
    FinitaryPerm gamma_prev = history.empty() ? FinitaryPerm() : history.back().gamma;

    if (rho && delta) {
        step.cycle_type = chosen_type;
        step.rho = *rho;
        step.delta = *delta;
        step.gamma_step = detail::align_conjugator(*rho, *delta);
        step.gamma = step.gamma_step * gamma_prev;
    } else if (!any_h_member && disjoint_class) {
        // No class met the subgroup within the budget; confirm on the window
        // enumeration and fall back to the trivial-intersection branch, where
        // any class element works and no conjugation is needed.
        for (const FinitaryPerm& p : h.window_elements(w))
            if (!p.is_identity() && p.min_moved() >= l)
                throw InputError("class search budget missed a window element, enlarge it");
        step.trivial_branch = true;
        step.cycle_type = disjoint_class->first;
        step.delta = disjoint_class->second;
        step.gamma_step = FinitaryPerm();
        step.gamma = gamma_prev;
    } else {
        throw InputError(
            "no conjugacy class meets the subgroup properly within this window, enlarge it");
    }

    step.first_bullet = !h.contains(kappa.inverse() * step.delta * kappa);
    step.second_bullet = true;
    FinitaryPerm ginv = step.gamma.inverse();
    for (const WitnessStep& st : history)
        if (!h.contains(ginv * st.delta * step.gamma)) step.second_bullet = false;
    if (!step.trivial_branch && !h.contains(ginv * step.delta * step.gamma))
        step.second_bullet = false;

    step.commutes_with_history = detail::disjoint_supports(step.gamma_step, kappa);
    for (const WitnessStep& st : history) {
        if (!detail::disjoint_supports(step.gamma_step, st.gamma)) step.commutes_with_history = false;
        if (!detail::disjoint_supports(step.gamma_step, st.delta)) step.commutes_with_history = false;
    }
    return step;
}

// Extracts distinct nontrivial subgroup elements fixing 1..s from a window
// enumeration, one coordinate at a time: pigeonhole the image of the next
// coordinate and take quotients inside a class, and when every image is
// distinct fall back to conjugating along a chain of increasing supports.
inline std::vector<FinitaryPerm> prefix_fixing_extract(const SubgroupOracle& h, int s, int count,
                                                       int w) {
    if (s < 0) throw InputError("the fixed prefix length must be nonnegative");
    if (count < 1) throw InputError("at least one element must be requested");
    if (w <= s) throw InputError("the window must extend past the fixed prefix");
    const std::size_t pool_cap = 4096;
    std::vector<FinitaryPerm> pool = h.window_elements(w);
    if (pool.size() > pool_cap) pool.resize(pool_cap);
    if (pool.size() < 2)
        throw InputError("insufficient window population, the subgroup looks finite here");

    for (int t = 0; t < s; ++t) {
        std::map<int, std::vector<FinitaryPerm>> classes;
        for (const FinitaryPerm& p : pool) classes[p.apply(t + 1)].push_back(p);
        std::vector<FinitaryPerm> next;
        std::set<FinitaryPerm> seen;
        auto push = [&](FinitaryPerm q) {
            if (q.is_identity()) return;
            if (seen.insert(q).second) next.push_back(std::move(q));
        };
        for (const auto& kv : classes) {
            const std::vector<FinitaryPerm>& members = kv.second;
            for (std::size_t i = 1; i < members.size(); ++i)
                push(members[i].inverse() * members[0]);
        }
        if (next.empty()) {
            // Every image is distinct: chain elements whose image of the
            // coordinate clears all earlier supports, then conjugate the
            // earlier ones by the last.
            std::vector<FinitaryPerm> chain;
            int max_s = 0;
            for (const auto& [image, members] : classes) {
                if (!chain.empty() && image <= max_s) continue;
                chain.push_back(members[0]);
                max_s = std::max(max_s, members[0].s());
            }
            if (chain.size() >= 2) {
                const FinitaryPerm& last = chain.back();
                FinitaryPerm inv = last.inverse();
                for (std::size_t i = 0; i + 1 < chain.size(); ++i) push(inv * chain[i] * last);
            }
        }
        if (next.empty())
            throw InputError("insufficient window population at coordinate " +
                             std::to_string(t + 1) + ", enlarge the window");
        pool = std::move(next);
        if (pool.size() > pool_cap) pool.resize(pool_cap);
    }

    std::vector<FinitaryPerm> out;
    std::set<FinitaryPerm> seen;
    for (const FinitaryPerm& p : pool) {
        if (p.is_identity()) continue;
        for (int j = 1; j <= s; ++j)
            if (p.apply(j) != j) throw InputError("extraction produced a non-fixing element");
        if (seen.insert(p).second) out.push_back(p);
        if (static_cast<int>(out.size()) == count) return out;
    }
    throw InputError("insufficient window population, only " + std::to_string(out.size()) +
                     " elements fix the prefix");
}

} // namespace treesub
