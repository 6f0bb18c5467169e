#pragma once

#include <string>
#include <vector>

#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"

namespace treesub {

// Comparison of two decorated trees along a branch. The branch at b is every
// vertex whose address extends b.
struct DominanceReport {
    bool dominated = false;
    std::vector<std::string> reasons;
};

namespace detail {

inline bool extends(const ReducedWord& v, const ReducedWord& b) {
    if (v.size() < b.size()) return false;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (v.at(i) != b.at(i)) return false;
    return true;
}

} // namespace detail

// Does t dominate s at the branch rooted at b, as seen from x? Holds when the
// two trees carry identical decorations outside the branch, t is undecorated
// inside it, and x stays outside. Then every short loop at x in t also closes
// in s: the only extra obstructions s carries are hidden behind the branch.
inline DominanceReport check_dominance(const TreeFamily& s, const TreeFamily& t,
                                       const ReducedWord& branch_root, const DecoratedVertex& x,
                                       long radius) {
    if (s.alphabet() != t.alphabet()) throw InputError("trees must share an alphabet");
    if (branch_root.empty()) throw InputError("branch root must be a proper vertex");
    if (static_cast<long>(branch_root.size()) > radius)
        throw InputError("branch root lies outside the comparison window");
    require_valid_vertex(s, x);

    DominanceReport rep;
    if (detail::extends(x.base, branch_root))
        rep.reasons.push_back("point " + x.to_string() + " lies inside the branch");

    std::vector<ReducedWord> sk = s.d_keys_within(radius);
    std::vector<ReducedWord> tk = t.d_keys_within(radius);
    for (const auto& key : sk) {
        if (detail::extends(key, branch_root)) continue;
        bool in_t = false;
        for (const auto& other : tk)
            if (other.str() == key.str()) in_t = true;
        if (!in_t)
            rep.reasons.push_back("decoration at " + key.str() +
                                  " outside the branch is missing from the dominating tree");
    }
    for (const auto& key : tk) {
        if (detail::extends(key, branch_root)) {
            rep.reasons.push_back("dominating tree is decorated inside the branch at " +
                                  key.str());
            continue;
        }
        bool in_s = false;
        for (const auto& other : sk)
            if (other.str() == key.str()) in_s = true;
        if (!in_s)
            rep.reasons.push_back("decoration at " + key.str() +
                                  " outside the branch is missing from the dominated tree");
    }

    rep.dominated = rep.reasons.empty();
    return rep;
}

} // namespace treesub
