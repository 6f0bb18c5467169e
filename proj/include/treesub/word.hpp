#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "treesub/errors.hpp"

namespace treesub {

// Words over an alphabet of k involutive generators, k in {3, 5}, written with
// the letters 'a' .. 'a'+k-1. A word is reduced when no two adjacent letters
// are equal; the empty word is the group identity.
//
// Convention used across the library: the rightmost letter of a word acts
// first, so w = p_n ... p_1 applied to a point applies p_1 first. Every letter
// is an involution, hence inverse(w) = reversal of w. The letter order
// a < b < c < d < e is the global tie-break for all enumerations.

inline bool letter_valid(char c, int alphabet) {
    return c >= 'a' && c < static_cast<char>('a' + alphabet);
}

inline void require_letter(char c, int alphabet) {
    if (!letter_valid(c, alphabet))
        throw InputError(std::string("letter '") + c + "' outside alphabet of size " +
                         std::to_string(alphabet));
}

inline void require_alphabet(int alphabet) {
    if (alphabet != 3 && alphabet != 5)
        throw InputError("alphabet size must be 3 or 5, got " + std::to_string(alphabet));
}

class ReducedWord {
public:
    explicit ReducedWord(int alphabet) : alphabet_(alphabet) { require_alphabet(alphabet); }

    // Normal form of an arbitrary letter sequence: cancels equal adjacent
    // letters until none remain. Idempotent.
    static ReducedWord reduce(std::string_view raw, int alphabet) {
        require_alphabet(alphabet);
        ReducedWord w(alphabet);
        for (char c : raw) {
            require_letter(c, alphabet);
            if (!w.s_.empty() && w.s_.back() == c)
                w.s_.pop_back();
            else
                w.s_.push_back(c);
        }
        return w;
    }

    static ReducedWord letter(char c, int alphabet) {
        require_letter(c, alphabet);
        ReducedWord w(alphabet);
        w.s_.push_back(c);
        return w;
    }

    int alphabet() const { return alphabet_; }
    const std::string& str() const { return s_; }
    std::size_t size() const { return s_.size(); }
    bool empty() const { return s_.empty(); }
    char at(std::size_t i) const { return s_.at(i); }
    char front() const { return s_.front(); }
    char back() const { return s_.back(); }

    ReducedWord inverse() const {
        ReducedWord w(alphabet_);
        w.s_.assign(s_.rbegin(), s_.rend());
        return w;
    }

    // w * c, i.e. one reduction step at the right end.
    ReducedWord append(char c) const {
        require_letter(c, alphabet_);
        ReducedWord w(*this);
        if (!w.s_.empty() && w.s_.back() == c)
            w.s_.pop_back();
        else
            w.s_.push_back(c);
        return w;
    }

    friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
        return a.alphabet_ == b.alphabet_ && a.s_ == b.s_;
    }
    friend bool operator!=(const ReducedWord& a, const ReducedWord& b) { return !(a == b); }

private:
    int alphabet_;
    std::string s_;
};

inline ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
    if (u.alphabet() != v.alphabet())
        throw InputError("alphabet mismatch in word multiplication");
    std::string cat = u.str() + v.str();
    return ReducedWord::reduce(cat, u.alphabet());
}

inline bool length_lex_less(const ReducedWord& a, const ReducedWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.str() < b.str();
}

// All reduced words of length <= max_len, in length-then-lexicographic order.
inline std::vector<ReducedWord> enumerate_reduced(int alphabet, int max_len) {
    require_alphabet(alphabet);
    if (max_len < 0) throw InputError("max_len must be >= 0");
    std::vector<ReducedWord> out;
    out.push_back(ReducedWord(alphabet));
    std::size_t layer_begin = 0, layer_end = 1;
    for (int len = 1; len <= max_len; ++len) {
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (char c = 'a'; c < static_cast<char>('a' + alphabet); ++c) {
                if (!out[i].empty() && out[i].back() == c) continue;
                out.push_back(out[i].append(c));
            }
        }
        layer_begin = layer_end;
        layer_end = out.size();
    }
    return out;
}

} // namespace treesub
