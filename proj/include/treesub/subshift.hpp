#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/errors.hpp"
#include "treesub/sequence.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

// Letters of s on positions [lo, hi) as a string.
inline std::string window_string(const SymbolicSequence& s, long lo, long hi) {
    if (lo > hi) throw InputError("window bounds out of order");
    std::string out;
    out.reserve(static_cast<std::size_t>(hi - lo));
    for (long n = lo; n < hi; ++n) out.push_back(s.at(n));
    return out;
}

// Distinct length-len factors seen on [lo, hi).
inline std::set<std::string> factor_set(const SymbolicSequence& s, int len, long lo, long hi) {
    if (len < 1) throw InputError("factor length must be positive");
    std::set<std::string> out;
    for (long n = lo; n + len <= hi; ++n) out.insert(window_string(s, n, n + len));
    return out;
}

inline std::size_t factor_count(const SymbolicSequence& s, int len, long lo, long hi) {
    return factor_set(s, len, lo, hi).size();
}

// No factor of [lo, hi) is a square ww with |w| <= max_half.
inline bool squarefree_window(const SymbolicSequence& s, long lo, long hi, int max_half) {
    for (long n = lo; n < hi; ++n)
        for (int h = 1; h <= max_half && n + 2 * h <= hi; ++h) {
            bool square = true;
            for (int i = 0; i < h && square; ++i) square = s.at(n + i) == s.at(n + h + i);
            if (square) return false;
        }
    return true;
}

// Recurrence of a word along the line. Position n sees w = q_1...q_k when
// s(n - i) = q_i for every 1 <= i <= k, so the letters just left of n spell
// w inside out. occurrences lists the seers in [-W, W] in order; max_gap is
// the longest seer-free stretch strictly between consecutive seers.
struct FactorStats {
    std::string word;
    long window = 0;
    std::vector<long> occurrences;
    long max_gap = 0;

    bool absent() const { return occurrences.empty(); }
};

inline FactorStats recurrence_stats(const SymbolicSequence& s, const std::string& w, long W) {
    if (w.empty()) throw InputError("recurrence needs a nonempty word");
    long k = static_cast<long>(w.size());
    if (k > W) throw InputError("word longer than the window radius");
    if (s.lo() > -W - k || s.hi() < W - 1)
        throw InputError("sequence window too small for radius " + std::to_string(W));
    FactorStats st;
    st.word = w;
    st.window = W;
    for (long n = -W; n <= W; ++n) {
        bool sees = true;
        for (long i = 1; i <= k && sees; ++i)
            sees = s.at(n - i) == w[static_cast<std::size_t>(i - 1)];
        if (sees) st.occurrences.push_back(n);
    }
    for (std::size_t j = 1; j < st.occurrences.size(); ++j)
        st.max_gap = std::max(st.max_gap, st.occurrences[j] - st.occurrences[j - 1] - 1);
    return st;
}

// Address of line position pos: path colors from position 0 in step order,
// sigma(-1), sigma(-2), ... going left and sigma(0), sigma(1), ... going
// right. Addresses read leftmost step first.
inline ReducedWord line_address(const SymbolicSequence& s, long pos) {
    std::string str;
    if (pos < 0)
        for (long n = -1; n >= pos; --n) str.push_back(s.at(n));
    else
        for (long n = 0; n < pos; ++n) str.push_back(s.at(n));
    ReducedWord w = ReducedWord::reduce(str, 3);
    if (static_cast<long>(w.size()) != (pos < 0 ? -pos : pos))
        throw InputError("sequence window is not adjacent-distinct at " + std::to_string(pos));
    return w;
}

// Outcome of comparing two pointed lines through bounded walks. "translate"
// means the windows match some shift (possibly with a reflection) everywhere
// the comparison looked; it cannot exclude differences beyond the window.
enum class LineVerdict { translate, distinct, inconclusive };

struct DiscriminationResult {
    LineVerdict verdict = LineVerdict::inconclusive;
    std::optional<ReducedWord> word; // closes at 0 in a, not in b (or swapped)
    bool word_separates_a = false;   // true: fixes in a, moves in b
    long shift = 0;
    bool reflected = false;
};

namespace detail {

// Stopper conjugate at distance k: walk out, apply the letter absent there,
// walk back. Fixes position 0 of the sequence it was built from. Word
// strings apply rightmost first, so the outward leg is the reversed address.
inline ReducedWord stopper_word(const SymbolicSequence& s, long k, bool left) {
    long pos = left ? -k : k;
    std::string u;
    if (k > 0) u = line_address(s, pos).str();
    char lo_edge = s.at(pos - 1);
    char hi_edge = s.at(pos);
    char g = 0;
    for (char c : {'a', 'b', 'c'})
        if (c != lo_edge && c != hi_edge) g = c;
    if (g == 0) throw InputError("no absent letter at position " + std::to_string(pos));
    std::string w = u;
    w.push_back(g);
    w.append(u.rbegin(), u.rend());
    return ReducedWord::reduce(w, 3);
}

} // namespace detail

inline DiscriminationResult discriminate(const SymbolicSequence& a, const SymbolicSequence& b,
                                         int depth) {
    if (depth < 1 || depth > 60) throw InputError("discrimination depth out of range");
    long need = 2L * depth + 3;
    if (a.lo() > -need || a.hi() < need || b.lo() > -(depth + 3) || b.hi() < depth + 3)
        throw InputError("sequence windows too small for this depth");

    DiscriminationResult res;

    // Shift and reflection match over the examined window decide "translate".
    for (long step = 0; step <= 2L * depth; ++step) {
        long m = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
        bool plain_match = true, mirror_match = true;
        for (long n = -(depth + 2); n <= depth + 2 && (plain_match || mirror_match); ++n) {
            if (b.at(n) != a.at(n + m)) plain_match = false;
            if (b.at(n) != a.at(m - n - 1)) mirror_match = false;
        }
        if (plain_match || mirror_match) {
            res.verdict = LineVerdict::translate;
            res.shift = m;
            res.reflected = !plain_match;
            return res;
        }
    }

    TreeFamily la = TreeFamily::line_tree(a);
    TreeFamily lb = TreeFamily::line_tree(b);
    DecoratedVertex origin = DecoratedVertex::root(3);
    for (long k = 0; k <= depth; ++k)
        for (bool left : {true, false}) {
            for (const auto* src : {&a, &b}) {
                ReducedWord w = detail::stopper_word(*src, k, left);
                bool fixes_a = walk(la, w, origin).closed();
                bool fixes_b = walk(lb, w, origin).closed();
                if (fixes_a == fixes_b) continue;
                res.verdict = LineVerdict::distinct;
                res.word = w;
                res.word_separates_a = fixes_a;
                return res;
            }
            if (k == 0) break; // left/right coincide at the origin
        }
    return res;
}

} // namespace treesub
