#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/ball.hpp"
#include "treesub/census.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/tree_family.hpp"

namespace treesub {

// Certificate that every recurrent ball type has an anchor near the root with
// the same bounded stabilizer. Words of length <= n never leave the radius
// floor(n/2) ball, so with r >= ceil(n/2) a matching r-ball code pins the
// whole n-stabilizer; smaller r makes the stabilizer comparison the binding
// check and certification may honestly fail.
struct EqcEntry {
    std::string code;
    DecoratedVertex witness;      // farthest census representative
    std::optional<DecoratedVertex> anchor; // first code match near the root
    bool stab_match = false;
};

struct EqcCertificate {
    int r = 0;
    int n = 0;
    long R = 0;
    long search_radius = 0;
    std::vector<EqcEntry> entries;

    bool certified() const {
        if (entries.empty()) return false;
        for (const auto& e : entries)
            if (!e.anchor || !e.stab_match) return false;
        return true;
    }

    std::vector<std::string> uncovered() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (!e.anchor || !e.stab_match) out.push_back(e.code);
        return out;
    }
};

inline EqcCertificate certify_eqc(const TreeFamily& fam, int r, int n, long R,
                                  long search_radius) {
    if (n < 1 || n > 12) throw InputError("stabilizer depth n out of range");
    if (R < 4) throw InputError("census window too small to detect recurrence");
    if (search_radius < 0 || search_radius > 14)
        throw InputError("anchor search radius out of range");

    EqcCertificate cert;
    cert.r = r;
    cert.n = n;
    cert.R = R;
    cert.search_radius = search_radius;

    std::vector<std::string> recurrent = detect_limits(fam, r, {R / 2, R});
    CensusResult cen = census(fam, R, r);
    RootedBall near_root =
        extract_ball(fam, DecoratedVertex::root(fam.alphabet()), static_cast<int>(search_radius));

    for (const std::string& code : recurrent) {
        const CensusEntry* ce = cen.find(code);
        if (ce == nullptr || !ce->witness) {
            EqcEntry entry;
            entry.code = code;
            cert.entries.push_back(std::move(entry));
            continue;
        }
        EqcEntry entry;
        entry.code = code;
        entry.witness = *ce->witness;
        std::vector<ReducedWord> want = stabilizer_words(fam, entry.witness, n);
        for (const auto& y : near_root.verts) {
            if (ball_code_at(fam, y, r) != code) continue;
            if (!entry.anchor) entry.anchor = y;
            std::vector<ReducedWord> got = stabilizer_words(fam, y, n);
            bool same = got.size() == want.size();
            for (std::size_t i = 0; same && i < got.size(); ++i)
                same = got[i].str() == want[i].str();
            if (same) {
                entry.anchor = y;
                entry.stab_match = true;
                break;
            }
        }
        cert.entries.push_back(std::move(entry));
    }
    return cert;
}

} // namespace treesub
