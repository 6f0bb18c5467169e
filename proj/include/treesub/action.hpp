#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

// Words act on decorated vertices letter by letter, rightmost letter first.
inline DecoratedVertex apply_word(const TreeFamily& fam, const ReducedWord& u,
                                  DecoratedVertex v) {
    if (u.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
    for (std::size_t i = u.size(); i > 0; --i) v = apply_letter(fam, u.at(i - 1), v);
    return v;
}

struct WalkTrace {
    std::vector<char> letters;           // in application order
    std::vector<DecoratedVertex> states; // letters.size() + 1 entries, start first

    const DecoratedVertex& end() const { return states.back(); }
    bool closed() const { return states.front() == states.back(); }

    std::string to_string() const {
        std::string out = states.front().to_string();
        for (std::size_t i = 0; i < letters.size(); ++i) {
            out += " -";
            out += letters[i];
            out += "-> ";
            out += states[i + 1].to_string();
        }
        return out;
    }
};

inline WalkTrace walk(const TreeFamily& fam, const ReducedWord& u, const DecoratedVertex& start) {
    if (u.alphabet() != fam.alphabet()) throw InputError("word alphabet mismatch");
    require_valid_vertex(fam, start);
    WalkTrace t;
    t.states.push_back(start);
    for (std::size_t i = u.size(); i > 0; --i) {
        char g = u.at(i - 1);
        t.letters.push_back(g);
        t.states.push_back(apply_letter(fam, g, t.states.back()));
    }
    return t;
}

namespace detail {

// Depth-first enumeration of reduced words with the walk updated one letter
// at a time. Extending a reduced word on the left by any letter different
// from its current leftmost letter keeps it reduced, and the action of the
// extended word is the new letter applied to the previous image.
template <typename Visit>
void scan_reduced_actions(const TreeFamily& fam, const DecoratedVertex& start, int max_len,
                          Visit&& visit) {
    std::string word;
    std::vector<DecoratedVertex> images{start};
    auto rec = [&](auto&& self) -> void {
        visit(word, images.back());
        if (static_cast<int>(word.size()) >= max_len) return;
        for (int i = 0; i < fam.alphabet(); ++i) {
            char g = static_cast<char>('a' + i);
            if (!word.empty() && word.back() == g) continue;
            word.push_back(g);
            images.push_back(apply_letter(fam, g, images.back()));
            self(self);
            images.pop_back();
            word.pop_back();
        }
    };
    rec(rec);
}

// As above but walking a pair of actions in lockstep.
template <typename Visit>
void scan_reduced_pair(const TreeFamily& fa, const DecoratedVertex& sa, const TreeFamily& fb,
                       const DecoratedVertex& sb, int max_len, Visit&& visit) {
    std::string word;
    std::vector<DecoratedVertex> ia{sa}, ib{sb};
    auto rec = [&](auto&& self) -> void {
        visit(word, ia.back(), ib.back());
        if (static_cast<int>(word.size()) >= max_len) return;
        for (int i = 0; i < fa.alphabet(); ++i) {
            char g = static_cast<char>('a' + i);
            if (!word.empty() && word.back() == g) continue;
            word.push_back(g);
            ia.push_back(apply_letter(fa, g, ia.back()));
            ib.push_back(apply_letter(fb, g, ib.back()));
            self(self);
            ia.pop_back();
            ib.pop_back();
            word.pop_back();
        }
    };
    rec(rec);
}

} // namespace detail

// All reduced words of length <= max_len fixing v, in length-lex order.
// The scan extends words on the left, so the growing suffix acts first,
// matching the rightmost-first action convention.
inline std::vector<ReducedWord> stabilizer_words(const TreeFamily& fam, const DecoratedVertex& v,
                                                 int max_len) {
    require_valid_vertex(fam, v);
    std::vector<ReducedWord> out;
    detail::scan_reduced_actions(fam, v, max_len, [&](const std::string& w, const DecoratedVertex& img) {
        if (img == v) {
            std::string reversed(w.rbegin(), w.rend());
            out.push_back(ReducedWord::reduce(reversed, fam.alphabet()));
        }
    });
    std::sort(out.begin(), out.end(), length_lex_less);
    return out;
}

// Least word (length-lex) of length <= max_len fixing va in fa but moving vb
// in fb, or nullopt when Stab(fa, va) restricted to that length is contained
// in Stab(fb, vb).
inline std::optional<ReducedWord> stab_counterexample(const TreeFamily& fa,
                                                      const DecoratedVertex& va,
                                                      const TreeFamily& fb,
                                                      const DecoratedVertex& vb, int max_len) {
    require_valid_vertex(fa, va);
    require_valid_vertex(fb, vb);
    if (fa.alphabet() != fb.alphabet())
        throw InputError("stabilizer comparison needs a common alphabet");
    std::optional<ReducedWord> best;
    detail::scan_reduced_pair(fa, va, fb, vb, max_len,
                              [&](const std::string& w, const DecoratedVertex& ia,
                                  const DecoratedVertex& ib) {
                                  if (ia == va && ib != vb) {
                                      std::string reversed(w.rbegin(), w.rend());
                                      ReducedWord cand = ReducedWord::reduce(reversed, fa.alphabet());
                                      if (!best || length_lex_less(cand, *best)) best = cand;
                                  }
                              });
    return best;
}

inline bool stab_contained(const TreeFamily& fa, const DecoratedVertex& va, const TreeFamily& fb,
                           const DecoratedVertex& vb, int max_len) {
    return !stab_counterexample(fa, va, fb, vb, max_len).has_value();
}

} // namespace treesub
