#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "treesub/errors.hpp"
#include "treesub/sequence.hpp"
#include "treesub/word.hpp"

namespace treesub {

// A set of positive integers given by an explicit ascending list plus an
// optional eventually periodic tail: tail members are tail_start,
// tail_start + gaps[0], tail_start + gaps[0] + gaps[1], ... with the gap
// cycle repeating forever.
struct LSet {
    std::vector<long> members;
    bool has_tail = false;
    long tail_start = 0;
    std::vector<long> tail_gaps;

    void validate() const {
        long prev = 0;
        for (long m : members) {
            if (m <= prev) throw InputError("set members must be ascending positive integers");
            prev = m;
        }
        if (has_tail) {
            if (tail_start <= prev) throw InputError("set tail must start after the listed members");
            if (tail_gaps.empty()) throw InputError("set tail needs at least one gap");
            for (long g : tail_gaps)
                if (g < 1) throw InputError("set tail gaps must be positive");
        }
    }

    bool contains(long s) const {
        if (s < 1) return false;
        if (std::binary_search(members.begin(), members.end(), s)) return true;
        if (!has_tail || s < tail_start) return false;
        long cur = tail_start;
        std::size_t idx = 0;
        while (cur < s) cur += tail_gaps[idx++ % tail_gaps.size()];
        return cur == s;
    }

    std::vector<long> up_to(long bound) const {
        std::vector<long> out;
        for (long m : members)
            if (m <= bound) out.push_back(m);
        if (has_tail) {
            long cur = tail_start;
            std::size_t idx = 0;
            while (cur <= bound) {
                out.push_back(cur);
                cur += tail_gaps[idx++ % tail_gaps.size()];
            }
        }
        return out;
    }

    bool is_finite() const { return !has_tail; }

    bool operator==(const LSet& o) const {
        return members == o.members && has_tail == o.has_tail &&
               (!has_tail || (tail_start == o.tail_start && tail_gaps == o.tail_gaps));
    }

    // Explicit members followed by a repeating block of increments, applied
    // cyclically starting from the last member (or from 0 when none).
    static LSet from_list(std::vector<long> explicit_members, std::vector<long> repeat = {}) {
        LSet l;
        l.members = std::move(explicit_members);
        if (!repeat.empty()) {
            for (long g : repeat)
                if (g < 1) throw InputError("repeat increments must be positive");
            long anchor = l.members.empty() ? 0 : l.members.back();
            l.has_tail = true;
            l.tail_start = anchor + repeat[0];
            l.tail_gaps.assign(repeat.begin() + 1, repeat.end());
            l.tail_gaps.push_back(repeat[0]);
        }
        l.validate();
        return l;
    }

    // Characteristic bitstrings: position i >= 1 is a member iff bit i is '1'.
    // prefix covers positions 1..|prefix|, period tiles the rest; an all-zero
    // or empty period yields a finite set.
    static LSet from_bits(const std::string& prefix, const std::string& period) {
        for (char c : prefix + period)
            if (c != '0' && c != '1') throw InputError("bitstrings may contain only 0 and 1");
        LSet l;
        for (std::size_t i = 0; i < prefix.size(); ++i)
            if (prefix[i] == '1') l.members.push_back(static_cast<long>(i) + 1);
        std::vector<long> ones;
        for (std::size_t i = 0; i < period.size(); ++i)
            if (period[i] == '1') ones.push_back(static_cast<long>(i));
        if (!ones.empty()) {
            l.has_tail = true;
            l.tail_start = static_cast<long>(prefix.size()) + 1 + ones[0];
            for (std::size_t j = 0; j + 1 < ones.size(); ++j)
                l.tail_gaps.push_back(ones[j + 1] - ones[j]);
            l.tail_gaps.push_back(static_cast<long>(period.size()) - ones.back() + ones[0]);
        }
        l.validate();
        return l;
    }
};

// Infinite word over {b, c} with an eventually periodic description,
// indexed from 1.
struct Code {
    std::string prefix;
    std::string period;

    void validate() const {
        if (period.empty()) throw InputError("code period must be nonempty");
        for (char c : prefix + period)
            if (c != 'b' && c != 'c') throw InputError("code letters must be b or c");
    }

    char letter_at(long n) const {
        if (n < 1) throw InputError("code positions start at 1");
        if (n <= static_cast<long>(prefix.size())) return prefix[static_cast<std::size_t>(n - 1)];
        long m = (n - static_cast<long>(prefix.size()) - 1) % static_cast<long>(period.size());
        return period[static_cast<std::size_t>(m)];
    }

    // First position where the two codes differ.
    static long first_difference(const Code& x, const Code& y, long search_depth) {
        for (long n = 1; n <= search_depth; ++n)
            if (x.letter_at(n) != y.letter_at(n)) return n;
        return 0;
    }
};

inline char flip_bc(char c) {
    if (c == 'b') return 'c';
    if (c == 'c') return 'b';
    throw InputError("expected letter b or c");
}

inline std::size_t letter_index(char g) { return static_cast<std::size_t>(g - 'a'); }

enum class FamilyKind {
    plain_t3,
    plain_t5,
    single_d,
    marked,
    sl,
    tl,
    master_code,
    line_tree,
    explicit_finite,
};

inline const char* kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::plain_t3: return "PlainT3";
        case FamilyKind::plain_t5: return "PlainT5";
        case FamilyKind::single_d: return "SingleD";
        case FamilyKind::marked: return "Marked";
        case FamilyKind::sl: return "SL";
        case FamilyKind::tl: return "TL";
        case FamilyKind::master_code: return "MasterCode";
        case FamilyKind::line_tree: return "LineTree";
        case FamilyKind::explicit_finite: return "ExplicitFinite";
    }
    return "?";
}

// Alternating two-letter word x y x y ... of the given length.
inline std::string alternating_word(char x, char y, long length) {
    std::string s;
    s.reserve(static_cast<std::size_t>(length));
    for (long i = 0; i < length; ++i) s.push_back(i % 2 == 0 ? x : y);
    return s;
}

// A decoration-colored tree: a regular tree (or line, or explicit finite
// tree) together with the set of its D-edges. Every D-edge is a-colored and
// is identified by its key: the address of the endpoint nearer the root,
// which never ends in the letter a. Immutable and cheap to copy.
class TreeFamily {
public:
    FamilyKind kind() const { return d_->kind; }
    int alphabet() const { return d_->alphabet; }
    long capacity() const { return d_->capacity; }
    bool nested() const { return d_->nested; }

    // D-keys with address length <= capacity, in length-lex order.
    const std::vector<ReducedWord>& d_keys() const { return d_->keys; }

    std::vector<ReducedWord> d_keys_within(long max_len) const {
        std::vector<ReducedWord> out;
        for (const auto& k : d_->keys) {
            if (static_cast<long>(k.size()) > max_len) break;
            out.push_back(k);
        }
        return out;
    }

    bool is_d_key(const ReducedWord& addr) const {
        require_alphabet_match(addr);
        if (static_cast<long>(addr.size()) > d_->capacity)
            throw InputError("address length exceeds the family capacity " +
                             std::to_string(d_->capacity));
        if (!addr.empty() && addr.back() == 'a') return false;
        return d_->key_set.count(addr.str()) > 0;
    }

    // Whether the edge from `from` along color g is decorated.
    bool edge_is_decorated(const ReducedWord& from, char g) const {
        require_letter(g, d_->alphabet);
        if (g != 'a') return false;
        if (!from.empty() && from.back() == 'a') {
            ReducedWord key(d_->alphabet);
            for (std::size_t i = 0; i + 1 < from.size(); ++i) key = key.append(from.at(i));
            return is_d_key(key);
        }
        return is_d_key(from);
    }

    // Neighbor of the vertex at `from` along color g in the undecorated tree,
    // or nullopt when no such edge exists (line and finite kinds only).
    std::optional<ReducedWord> plain_neighbor(const ReducedWord& from, char g) const {
        require_alphabet_match(from);
        require_letter(g, d_->alphabet);
        switch (d_->kind) {
            case FamilyKind::line_tree: {
                long pos = line_position(from);
                bool ok = (pos <= d_->sigma->hi() && d_->sigma->at(pos) == g) ||
                          (pos - 1 >= d_->sigma->lo() && d_->sigma->at(pos - 1) == g);
                if (!ok) return std::nullopt;
                return from.append(g);
            }
            case FamilyKind::explicit_finite: {
                int idx = finite_index(from);
                int t = d_->nbr[static_cast<std::size_t>(idx)][letter_index(g)];
                if (t < 0) return std::nullopt;
                return ReducedWord::reduce(d_->addr_of[static_cast<std::size_t>(t)], d_->alphabet);
            }
            default: {
                return from.append(g);
            }
        }
    }

    std::vector<std::pair<char, ReducedWord>> plain_neighbors(const ReducedWord& from) const {
        std::vector<std::pair<char, ReducedWord>> out;
        for (int i = 0; i < d_->alphabet; ++i) {
            char g = static_cast<char>('a' + i);
            if (auto n = plain_neighbor(from, g)) out.emplace_back(g, *n);
        }
        return out;
    }

    // Line trees only: signed position of the vertex with the given address.
    long line_position(const ReducedWord& addr) const {
        if (d_->kind != FamilyKind::line_tree)
            throw InputError("line_position applies to line trees only");
        long pos = 0;
        for (std::size_t i = 0; i < addr.size(); ++i) {
            char g = addr.at(i);
            if (pos <= d_->sigma->hi() && d_->sigma->at(pos) == g)
                ++pos;
            else if (pos - 1 >= d_->sigma->lo() && d_->sigma->at(pos - 1) == g)
                --pos;
            else
                throw InputError("address does not describe a vertex of the line tree");
        }
        return pos;
    }

    const SymbolicSequence& sigma() const {
        if (!d_->sigma) throw InputError("family has no underlying sequence");
        return *d_->sigma;
    }

    // Master-code families only: the anchor addresses x_0, x_1, ... that fit
    // inside the capacity.
    const std::vector<ReducedWord>& master_anchors() const {
        if (d_->kind != FamilyKind::master_code)
            throw InputError("master_anchors applies to master-code families only");
        return d_->anchors;
    }

    const Code& code() const {
        if (d_->kind != FamilyKind::master_code)
            throw InputError("code applies to master-code families only");
        return d_->code;
    }

    // -- factories --

    static TreeFamily plain(int alphabet) {
        auto d = std::make_shared<Data>();
        d->kind = alphabet == 3 ? FamilyKind::plain_t3 : FamilyKind::plain_t5;
        require_alphabet(alphabet);
        d->alphabet = alphabet;
        d->capacity = std::numeric_limits<long>::max();
        return TreeFamily(std::move(d));
    }

    static TreeFamily single_d(const ReducedWord& key) {
        return marked({key}, key.alphabet(), FamilyKind::single_d);
    }

    static TreeFamily marked(std::vector<ReducedWord> keys, int alphabet,
                             FamilyKind kind = FamilyKind::marked) {
        auto d = std::make_shared<Data>();
        d->kind = kind;
        require_alphabet(alphabet);
        d->alphabet = alphabet;
        d->capacity = std::numeric_limits<long>::max();
        for (auto& k : keys) {
            if (k.alphabet() != alphabet) throw InputError("key alphabet mismatch");
            require_key_shape(k);
            d->keys.push_back(k);
        }
        finish_keys(*d, false);
        return TreeFamily(std::move(d));
    }

    // Keys along the (c, b)-ray from the root at distances 2^s for s in L.
    static TreeFamily tl(const LSet& l, long capacity = 256) {
        l.validate();
        auto d = std::make_shared<Data>();
        d->kind = FamilyKind::tl;
        d->alphabet = 3;
        d->capacity = capacity;
        d->tl_set = l;
        for (long s : l.up_to(62)) {
            long len = 1L << s;
            if (len > capacity) break;
            d->keys.push_back(ReducedWord::reduce(alternating_word('c', 'b', len), 3));
        }
        finish_keys(*d, true);
        return TreeFamily(std::move(d));
    }

    // The schedule along the (a, b)-axis: anchors x_{2^i}; from each anchor a
    // (c, b)-ray carrying keys at distances 2^s for s in L_i, where L_i is
    // sets[assignment(i)]; the root's own ray (i = 0) carries keys at every
    // distance 2^k, k >= 1. The assignment is given by an index prefix and a
    // repeating index period; every set must occur in the period.
    static TreeFamily sl(std::vector<LSet> sets, std::vector<int> assign_prefix,
                         std::vector<int> assign_period, long capacity = 256) {
        if (sets.empty()) throw InputError("sl needs at least one set");
        if (assign_period.empty()) throw InputError("sl assignment period must be nonempty");
        for (const auto& s : sets) s.validate();
        std::vector<bool> seen(sets.size(), false);
        auto check_index = [&](int ix) {
            if (ix < 0 || ix >= static_cast<int>(sets.size()))
                throw InputError("sl assignment index out of range");
        };
        for (int ix : assign_prefix) check_index(ix);
        for (int ix : assign_period) {
            check_index(ix);
            seen[static_cast<std::size_t>(ix)] = true;
        }
        for (bool b : seen)
            if (!b) throw InputError("every sl set must recur in the assignment period");

        auto d = std::make_shared<Data>();
        d->kind = FamilyKind::sl;
        d->alphabet = 3;
        d->capacity = capacity;
        d->sl_sets = sets;
        d->sl_assign_prefix = assign_prefix;
        d->sl_assign_period = assign_period;
        for (long k = 1; (1L << k) <= capacity; ++k)
            d->keys.push_back(ReducedWord::reduce(alternating_word('c', 'b', 1L << k), 3));
        for (long i = 1; (1L << i) + 2 <= capacity; ++i) {
            const LSet& li = sets[static_cast<std::size_t>(sl_assignment(*d, i))];
            std::string base = alternating_word('a', 'b', 1L << i);
            for (long s : li.up_to(62)) {
                long len = (1L << i) + (1L << s);
                if (len > capacity) break;
                d->keys.push_back(
                    ReducedWord::reduce(base + alternating_word('c', 'b', 1L << s), 3));
            }
        }
        finish_keys(*d, true);
        return TreeFamily(std::move(d));
    }

    // L_i for the given branch index i >= 1.
    const LSet& sl_set_at(long i) const {
        if (d_->kind != FamilyKind::sl) throw InputError("sl_set_at applies to sl families only");
        return d_->sl_sets[static_cast<std::size_t>(sl_assignment(*d_, i))];
    }

    // The key of the scheduled D-edge on branch i at schedule position s:
    // the vertex at distance 2^s along the (c, b)-ray from x_{2^i} (from the
    // root when i = 0).
    static ReducedWord sl_schedule_key(long i, long s) {
        if (i < 0 || s < 1) throw InputError("sl schedule needs i >= 0 and s >= 1");
        if (i > 56 || s > 56) throw InputError("sl schedule position too large");
        std::string w;
        if (i > 0) w = alternating_word('a', 'b', 1L << i);
        w += alternating_word('c', 'b', 1L << s);
        return ReducedWord::reduce(w, 3);
    }

    // x_n = x_{n-1} (g' a)^{2^{n-1}} and key_n = x_{n-1} (g a)^{2^{n-1}-1} g,
    // where g is the n-th code letter and g' its flip.
    static std::pair<ReducedWord, ReducedWord> master_code_step(const Code& code, long n) {
        code.validate();
        if (n < 1 || n > 56) throw InputError("master code step out of range");
        std::string x;
        for (long m = 1; m < n; ++m) {
            char g = code.letter_at(m);
            for (long j = 0; j < (1L << (m - 1)); ++j) {
                x.push_back(flip_bc(g));
                x.push_back('a');
            }
        }
        std::string key = x;
        char g = code.letter_at(n);
        for (long j = 0; j < (1L << (n - 1)) - 1; ++j) {
            key.push_back(g);
            key.push_back('a');
        }
        key.push_back(g);
        for (long j = 0; j < (1L << (n - 1)); ++j) {
            x.push_back(flip_bc(g));
            x.push_back('a');
        }
        return {ReducedWord::reduce(x, 5), ReducedWord::reduce(key, 5)};
    }

    static TreeFamily master_code(const Code& code, long capacity = 256) {
        code.validate();
        auto d = std::make_shared<Data>();
        d->kind = FamilyKind::master_code;
        d->alphabet = 5;
        d->capacity = capacity;
        d->code = code;
        d->anchors.push_back(ReducedWord(5));
        for (long n = 1; n <= 56; ++n) {
            auto [x, key] = master_code_step(code, n);
            if (static_cast<long>(key.size()) <= capacity) d->keys.push_back(key);
            if (static_cast<long>(x.size()) <= capacity)
                d->anchors.push_back(x);
            else if (static_cast<long>(key.size()) > capacity)
                break;
        }
        finish_keys(*d, true);
        return TreeFamily(std::move(d));
    }

    static TreeFamily line_tree(const SymbolicSequence& sigma) {
        auto d = std::make_shared<Data>();
        d->kind = FamilyKind::line_tree;
        d->alphabet = 3;
        d->capacity = std::numeric_limits<long>::max();
        d->sigma = std::make_shared<SymbolicSequence>(sigma);
        if (!d->sigma->is_good())
            throw InputError("line tree needs a good sequence (no equal adjacent letters)");
        return TreeFamily(std::move(d));
    }

    // Finite tree given by colored edges over vertex ids; vertex 0 is the
    // root. D-edges are listed as (u, v) endpoint pairs and must be a-colored.
    static TreeFamily explicit_finite(int alphabet,
                                      const std::vector<std::tuple<int, int, char>>& edges,
                                      const std::vector<std::pair<int, int>>& d_edges = {}) {
        auto d = std::make_shared<Data>();
        d->kind = FamilyKind::explicit_finite;
        require_alphabet(alphabet);
        d->alphabet = alphabet;
        d->capacity = std::numeric_limits<long>::max();
        int n = 1;
        for (const auto& [u, v, g] : edges) {
            if (u < 0 || v < 0 || u == v) throw InputError("bad edge endpoints");
            n = std::max(n, std::max(u, v) + 1);
            require_letter(g, alphabet);
        }
        if (static_cast<int>(edges.size()) != n - 1)
            throw InputError("a tree on n vertices has n-1 edges");
        d->nbr.assign(static_cast<std::size_t>(n), {-1, -1, -1, -1, -1});
        for (const auto& [u, v, g] : edges) {
            std::size_t gi = letter_index(g);
            auto& nu = d->nbr[static_cast<std::size_t>(u)][gi];
            auto& nv = d->nbr[static_cast<std::size_t>(v)][gi];
            if (nu != -1 || nv != -1) throw InputError("duplicate color at a vertex");
            nu = v;
            nv = u;
        }
        d->addr_of.assign(static_cast<std::size_t>(n), std::string());
        std::vector<bool> vis(static_cast<std::size_t>(n), false);
        std::vector<int> queue{0};
        vis[0] = true;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int u = queue[static_cast<std::size_t>(h)];
            for (int gi = 0; gi < alphabet; ++gi) {
                int v = d->nbr[static_cast<std::size_t>(u)][static_cast<std::size_t>(gi)];
                if (v < 0 || vis[static_cast<std::size_t>(v)]) continue;
                vis[static_cast<std::size_t>(v)] = true;
                d->addr_of[static_cast<std::size_t>(v)] =
                    d->addr_of[static_cast<std::size_t>(u)] + static_cast<char>('a' + gi);
                queue.push_back(v);
            }
        }
        for (bool b : vis)
            if (!b) throw InputError("edge list does not describe a connected tree");
        for (int i = 0; i < n; ++i) d->idx_of[d->addr_of[static_cast<std::size_t>(i)]] = i;
        for (const auto& [u, v] : d_edges) {
            if (u < 0 || u >= n || v < 0 || v >= n) throw InputError("d-edge endpoint out of range");
            std::size_t ai = letter_index('a');
            if (d->nbr[static_cast<std::size_t>(u)][ai] != v)
                throw InputError("d-edges must be existing a-colored edges");
            const std::string& au = d->addr_of[static_cast<std::size_t>(u)];
            const std::string& av = d->addr_of[static_cast<std::size_t>(v)];
            const std::string& key = au.size() < av.size() ? au : av;
            d->keys.push_back(ReducedWord::reduce(key, alphabet));
        }
        finish_keys(*d, false);
        return TreeFamily(std::move(d));
    }

    bool operator==(const TreeFamily& o) const { return d_ == o.d_; }

private:
    struct Data {
        FamilyKind kind = FamilyKind::plain_t3;
        int alphabet = 3;
        long capacity = 0;
        bool nested = false;
        std::vector<ReducedWord> keys;
        std::unordered_set<std::string> key_set;
        std::shared_ptr<const SymbolicSequence> sigma;
        std::vector<std::array<int, 5>> nbr;
        std::vector<std::string> addr_of;
        std::unordered_map<std::string, int> idx_of;
        Code code;
        std::vector<ReducedWord> anchors;
        std::vector<LSet> sl_sets;
        std::vector<int> sl_assign_prefix;
        std::vector<int> sl_assign_period;
        LSet tl_set;
    };

    explicit TreeFamily(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    static int sl_assignment(const Data& d, long i) {
        if (i < 1) throw InputError("sl branch index starts at 1");
        long p = static_cast<long>(d.sl_assign_prefix.size());
        if (i <= p) return d.sl_assign_prefix[static_cast<std::size_t>(i - 1)];
        long m = (i - p - 1) % static_cast<long>(d.sl_assign_period.size());
        return d.sl_assign_period[static_cast<std::size_t>(m)];
    }

    static void require_key_shape(const ReducedWord& k) {
        if (!k.empty() && k.back() == 'a')
            throw InputError("a D-key is the near endpoint of an a-edge and cannot end in a");
    }

    static void finish_keys(Data& d, bool generated) {
        std::sort(d.keys.begin(), d.keys.end(), length_lex_less);
        d.keys.erase(std::unique(d.keys.begin(), d.keys.end()), d.keys.end());
        for (const auto& k : d.keys) {
            require_key_shape(k);
            d.key_set.insert(k.str());
        }
        for (const auto& k : d.keys) {
            std::string beyond = k.str() + 'a';
            for (const auto& other : d.keys)
                if (other.str().compare(0, beyond.size(), beyond) == 0) d.nested = true;
        }
        if (generated && d.nested) throw InputError("generated schedule is unexpectedly nested");
    }

    void require_alphabet_match(const ReducedWord& w) const {
        if (w.alphabet() != d_->alphabet) throw InputError("address alphabet mismatch");
    }

    int finite_index(const ReducedWord& w) const {
        auto it = d_->idx_of.find(w.str());
        if (it == d_->idx_of.end())
            throw InputError("address is not a vertex of the finite tree");
        return it->second;
    }

    std::shared_ptr<const Data> d_;
};

} // namespace treesub
