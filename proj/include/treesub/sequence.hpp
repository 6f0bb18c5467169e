#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "treesub/errors.hpp"

namespace treesub {

// Two-sided letter sequences over {a, b, c} with total evaluation on a
// declared window [-capacity, capacity]. A sequence is "good" when no two
// adjacent positions carry the same letter; good sequences induce properly
// colored line trees.
class SymbolicSequence {
public:
    char at(long n) const {
        if (n < lo_ || n > hi_)
            throw InputError("sequence position " + std::to_string(n) + " outside window [" +
                             std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
        return eval_(n);
    }

    long lo() const { return lo_; }
    long hi() const { return hi_; }
    const std::string& tag() const { return tag_; }

    bool is_good() const {
        for (long n = lo_; n < hi_; ++n)
            if (eval_(n) == eval_(n + 1)) return false;
        return true;
    }

    // Fixed point of `rules` to the right of the origin (seed must be
    // prolongable: rules(seed) starts with seed), and to the left the limit of
    // rules^(2n) applied to left_seed, which must be suffix-prolongable under
    // rules^2. Both limits exist and are cached on [-capacity, capacity].
    static SymbolicSequence substitution(const std::map<char, std::string>& rules, char seed,
                                         char left_seed, long capacity) {
        if (capacity < 1) throw InputError("capacity must be >= 1");
        auto image = [&rules](const std::string& s) {
            std::string out;
            for (char c : s) {
                auto it = rules.find(c);
                if (it == rules.end()) throw InputError(std::string("no rule for letter '") + c + "'");
                out += it->second;
            }
            return out;
        };
        std::string right(1, seed);
        {
            std::string img = image(right);
            if (img.compare(0, 1, right) != 0)
                throw InputError(std::string("seed '") + seed + "' is not prolongable");
        }
        while (static_cast<long>(right.size()) <= capacity) {
            std::string next = image(right);
            if (static_cast<long>(next.size()) <= static_cast<long>(right.size()))
                throw InputError("substitution does not grow from seed");
            right = std::move(next);
        }
        std::string left(1, left_seed);
        {
            std::string img = image(image(left));
            if (img.empty() || img.back() != left_seed)
                throw InputError(std::string("left seed '") + left_seed +
                                 "' is not suffix-prolongable under the squared rules");
        }
        const std::size_t keep = static_cast<std::size_t>(capacity) + 8;
        while (static_cast<long>(left.size()) <= capacity) {
            std::string next = image(image(left));
            if (static_cast<long>(next.size()) <= static_cast<long>(left.size()))
                throw InputError("substitution does not grow from left seed");
            left = std::move(next);
            if (left.size() > keep) left.erase(0, left.size() - keep);
        }
        auto rightp = std::make_shared<std::string>(std::move(right));
        auto leftp = std::make_shared<std::string>(std::move(left));
        SymbolicSequence s;
        s.lo_ = -capacity;
        s.hi_ = capacity;
        s.tag_ = "substitution";
        s.eval_ = [rightp, leftp](long n) -> char {
            if (n >= 0) return (*rightp)[static_cast<std::size_t>(n)];
            return (*leftp)[leftp->size() - static_cast<std::size_t>(-n)];
        };
        return s;
    }

    // Picks the least letter (in a < b < c order) that is suffix-prolongable
    // under the squared rules.
    static SymbolicSequence substitution_auto(const std::map<char, std::string>& rules, char seed,
                                              long capacity) {
        for (const auto& [c, img] : rules) {
            (void)img;
            std::string twice;
            std::string one(1, c);
            for (char x : one) twice += rules.at(x);
            std::string sq;
            for (char x : twice) sq += rules.at(x);
            if (!sq.empty() && sq.back() == c)
                return substitution(rules, seed, c, capacity);
        }
        throw InputError("no suffix-prolongable left seed exists for these rules");
    }

    // ...LLL [core) RRR...: positions n < 0 tile left_period, 0 <= n < |core|
    // read core, n >= |core| tile right_period.
    static SymbolicSequence periodic(const std::string& left_period, const std::string& core,
                                     const std::string& right_period, long capacity) {
        if (left_period.empty() || right_period.empty())
            throw InputError("periodic sequence needs nonempty periods");
        auto l = std::make_shared<std::string>(left_period);
        auto m = std::make_shared<std::string>(core);
        auto r = std::make_shared<std::string>(right_period);
        SymbolicSequence s;
        s.lo_ = -capacity;
        s.hi_ = capacity;
        s.tag_ = "periodic";
        s.eval_ = [l, m, r](long n) -> char {
            if (n < 0) {
                long L = static_cast<long>(l->size());
                return (*l)[static_cast<std::size_t>(((n % L) + L) % L)];
            }
            if (n < static_cast<long>(m->size())) return (*m)[static_cast<std::size_t>(n)];
            long R = static_cast<long>(r->size());
            return (*r)[static_cast<std::size_t>((n - static_cast<long>(m->size())) % R)];
        };
        return s;
    }

    // Explicit letters on [start, start + |letters|); total only there.
    static SymbolicSequence window(const std::string& letters, long start) {
        if (letters.empty()) throw InputError("window sequence needs letters");
        auto w = std::make_shared<std::string>(letters);
        SymbolicSequence s;
        s.lo_ = start;
        s.hi_ = start + static_cast<long>(letters.size()) - 1;
        s.tag_ = "window";
        s.eval_ = [w, start](long n) -> char { return (*w)[static_cast<std::size_t>(n - start)]; };
        return s;
    }

    // The shift t_m: result(n) = this(n - m).
    SymbolicSequence shifted(long m) const {
        SymbolicSequence s;
        s.lo_ = lo_ + m;
        s.hi_ = hi_ + m;
        s.tag_ = tag_ + "/shift";
        auto base = eval_;
        s.eval_ = [base, m](long n) -> char { return base(n - m); };
        return s;
    }

    // Orientation reversal about the origin: result(n) = this(-n - 1), which
    // reverses the order of edge colors along the line.
    SymbolicSequence reversed() const {
        SymbolicSequence s;
        s.lo_ = -hi_ - 1;
        s.hi_ = -lo_ - 1;
        s.tag_ = tag_ + "/reverse";
        auto base = eval_;
        s.eval_ = [base](long n) -> char { return base(-n - 1); };
        return s;
    }

    // Copy with one position overwritten (for perturbation tests).
    SymbolicSequence with_letter(long pos, char letter) const {
        SymbolicSequence s(*this);
        s.tag_ = tag_ + "/edit";
        auto base = eval_;
        s.eval_ = [base, pos, letter](long n) -> char { return n == pos ? letter : base(n); };
        return s;
    }

private:
    long lo_ = 0, hi_ = 0;
    std::string tag_;
    std::function<char(long)> eval_;
};

// The standard square-free ternary substitution a -> abc, b -> ac, c -> b.
inline std::map<char, std::string> squarefree_rules() {
    return {{'a', "abc"}, {'b', "ac"}, {'c', "b"}};
}

// Prefix of the one-sided fixed point of `rules` from `seed`.
inline std::string substitution_fixed_point(const std::map<char, std::string>& rules, char seed,
                                            long length) {
    if (length < 1) throw InputError("length must be >= 1");
    auto image = [&rules](const std::string& s) {
        std::string out;
        for (char c : s) {
            auto it = rules.find(c);
            if (it == rules.end()) throw InputError(std::string("no rule for letter '") + c + "'");
            out += it->second;
        }
        return out;
    };
    std::string cur(1, seed);
    if (image(cur).compare(0, 1, cur) != 0)
        throw InputError(std::string("seed '") + seed + "' is not prolongable");
    while (static_cast<long>(cur.size()) < length) {
        std::string next = image(cur);
        if (next.size() <= cur.size()) throw InputError("substitution does not grow from seed");
        cur = std::move(next);
    }
    cur.resize(static_cast<std::size_t>(length));
    return cur;
}

} // namespace treesub
