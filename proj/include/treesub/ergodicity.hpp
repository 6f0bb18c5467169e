#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/expansion.hpp"
#include "treesub/gamma5.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {

struct CertificateParams {
    long search_depth = 8;        // divergence bound for the subgroup build
    long window = 6;              // scan radius on the second tree
    long max_size = 8;            // escape and ratio set-size bound
    int escape_samples = 20;      // random connected sets swept for escapes
    unsigned seed = 2027u;        // sampling seed
    int free_word_len = 4;        // essential-freeness word length bound
    std::size_t free_moved = 50;  // moved vertices required per word
};

// Desk-scale certificate that the shift over the first code's tree cannot be
// weakly sandwiched above the second one's. It verifies the combinatorial
// hypotheses only: the bounce subgroup fixes the first root, alpha moves the
// second, no tested set on the second side is invariant, the expansion floor
// exceeds one, and short words move many vertices. The measure conclusion is
// never computed here; the verdict defers to the cited criterion.
struct WeakIncomparabilityCertificate {
    Code code;
    Code other;
    HGenerators h;
    CertificateParams params;

    bool fixed_point_verified = false; // every word fixes the first root
    bool separation_verified = false;  // alpha moves the second root
    std::size_t escapes_tested = 0;    // sampled sets, all with escape witnesses
    bool escapes_verified = false;
    ExpansionReport expansion;         // orbit-strategy report on the second tree
    std::size_t free_words_checked = 0;
    std::size_t free_min_moved = 0;
    bool freeness_verified = false;

    bool satisfied() const {
        return fixed_point_verified && separation_verified && escapes_verified &&
               expansion.certified_floor && expansion.min_ratio > Rational(1) &&
               freeness_verified;
    }

    std::string failing_item() const {
        if (!fixed_point_verified) return "fixed point at the first root";
        if (!separation_verified) return "separation at the second root";
        if (!escapes_verified) return "escape witness for a sampled set";
        if (!expansion.certified_floor || !(expansion.min_ratio > Rational(1)))
            return "expansion floor above one";
        if (!freeness_verified) return "essential freeness, finite form";
        return "";
    }

    std::string verdict() const {
        if (satisfied())
            return "criterion satisfied; strong ergodicity on the second side and the "
                   "non-containment follow by the Kechris-Tsankov criterion, which is "
                   "cited, not verified here";
        return "certificate refused: " + failing_item();
    }
};

namespace detail {

// All reduced words over the five letters with length in [1, max_len],
// shortest first, letters in order.
inline std::vector<ReducedWord> short_words(int max_len) {
    std::vector<ReducedWord> out;
    std::vector<std::string> layer{""};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const std::string& s : layer)
            for (char g = 'a'; g < 'a' + 5; ++g) {
                if (!s.empty() && s.back() == g) continue;
                next.push_back(s + g);
            }
        for (const std::string& s : next) out.push_back(ReducedWord::reduce(s, 5));
        layer = std::move(next);
    }
    return out;
}

inline std::vector<DecoratedVertex> random_connected_set(const TreeFamily& fam, long window,
                                                         long max_size, std::mt19937& rng) {
    DecoratedVertex start = DecoratedVertex::root(fam.alphabet());
    std::uniform_int_distribution<long> steps(0, window / 2);
    for (long s = steps(rng); s > 0; --s) {
        auto nbrs = neighbors(fam, start);
        std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
        start = nbrs[pick(rng)].second;
    }
    std::vector<DecoratedVertex> f{start};
    std::uniform_int_distribution<long> size_pick(1, max_size);
    long want = size_pick(rng);
    int stall = 0;
    while (static_cast<long>(f.size()) < want && stall < 64) {
        std::uniform_int_distribution<std::size_t> at(0, f.size() - 1);
        auto nbrs = neighbors(fam, f[at(rng)]);
        std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
        DecoratedVertex cand = nbrs[pick(rng)].second;
        if (deco_dist_from_root(fam, cand) > window ||
            std::find(f.begin(), f.end(), cand) != f.end()) {
            ++stall;
            continue;
        }
        f.push_back(std::move(cand));
    }
    return f;
}

} // namespace detail

inline WeakIncomparabilityCertificate certificate(const Code& code, const Code& other,
                                                  const CertificateParams& params = {}) {
    code.validate();
    other.validate();
    if (params.search_depth < 1 || params.search_depth > 10)
        throw InputError("certificate search depth must be in [1, 10]");
    if (params.window < 1 || params.window > 18)
        throw InputError("certificate windows cover radii in [1, 18]");
    if (params.max_size < 1 || params.max_size > 64)
        throw InputError("certificate set sizes cover [1, 64]");
    if (params.escape_samples < 0 || params.escape_samples > 1000)
        throw InputError("escape sample count must be in [0, 1000]");
    if (params.free_word_len < 1 || params.free_word_len > 6)
        throw InputError("freeness word length must be in [1, 6]");
    if (Code::first_difference(code, other, params.search_depth) == 0)
        throw InputError("codes agree through position " + std::to_string(params.search_depth) +
                         ", the certificate needs distinct codes");

    WeakIncomparabilityCertificate cert;
    cert.code = code;
    cert.other = other;
    cert.params = params;
    cert.h = build_h(code, other, params.search_depth);
    TreeFamily own = TreeFamily::master_code(code);
    TreeFamily second = TreeFamily::master_code(other);
    std::vector<ReducedWord> words = cert.h.words();
    DecoratedVertex root = DecoratedVertex::root(5);

    cert.fixed_point_verified = true;
    for (const ReducedWord& w : words)
        if (apply_word(own, w, root) != root || !walk(own, w, root).closed())
            cert.fixed_point_verified = false;
    cert.separation_verified = apply_word(second, cert.h.alpha, root) != root;

    cert.escapes_verified = true;
    std::mt19937 rng(params.seed);
    for (int t = 0; t < params.escape_samples; ++t) {
        std::vector<DecoratedVertex> f =
            detail::random_connected_set(second, params.window, params.max_size, rng);
        if (!escape_witness(second, f, words).has_value()) {
            cert.escapes_verified = false;
            break;
        }
        ++cert.escapes_tested;
    }

    cert.expansion =
        min_ratio_search(second, words, params.max_size, params.window, SearchStrategy::orbit);

    cert.freeness_verified = true;
    cert.free_min_moved = 0;
    std::vector<DecoratedVertex> window_verts;
    detail::scan_window(second, params.window,
                        [&](const DecoratedVertex& v, long) { window_verts.push_back(v); });
    for (const ReducedWord& w : detail::short_words(params.free_word_len)) {
        std::size_t moved = 0;
        for (const DecoratedVertex& v : window_verts)
            if (apply_word(second, w, v) != v) ++moved;
        if (cert.free_words_checked == 0 || moved < cert.free_min_moved)
            cert.free_min_moved = moved;
        ++cert.free_words_checked;
        if (moved < params.free_moved) cert.freeness_verified = false;
    }
    return cert;
}

} // namespace treesub
