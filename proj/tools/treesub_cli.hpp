#pragma once

// Command-line front end over the library. Structured inputs arrive as JSON,
// inline or by file path; everything else is a plain flag. Runs are
// deterministic, so identical invocations print identical bytes. Exit codes:
// 0 success, 1 input error, 2 refused certificate.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treesub/action.hpp"
#include "treesub/ball.hpp"
#include "treesub/census.hpp"
#include "treesub/closure.hpp"
#include "treesub/eqc.hpp"
#include "treesub/ergodicity.hpp"
#include "treesub/expansion.hpp"
#include "treesub/finitary.hpp"
#include "treesub/gamma5.hpp"
#include "treesub/sequence.hpp"
#include "treesub/subshift.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* dot_legend =
    "// colors: a=red, b=blue, c=green, d=orange, e=purple; D edges dashed\n";

// ---- input plumbing ----

inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ordered_json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON for " + what + ": " + e.what());
    }
}

// An argument that starts with '{' is inline JSON, anything else is a path.
inline ordered_json load_spec(const std::string& arg, const std::string& what) {
    std::size_t i = arg.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && arg[i] == '{') return parse_json_text(arg, what);
    return parse_json_text(slurp_file(arg), what);
}

inline const ordered_json& field(const ordered_json& j, const std::string& key,
                                 const std::string& path) {
    if (!j.is_object()) throw InputError(path + " must be a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(path + "." + key + " is required");
    return *it;
}

inline std::string str_field(const ordered_json& j, const std::string& key,
                             const std::string& path) {
    const ordered_json& v = field(j, key, path);
    if (!v.is_string()) throw InputError(path + "." + key + " must be a string");
    return v.get<std::string>();
}

inline long long_field(const ordered_json& j, const std::string& key, const std::string& path) {
    const ordered_json& v = field(j, key, path);
    if (!v.is_number_integer()) throw InputError(path + "." + key + " must be an integer");
    return v.get<long>();
}

inline long opt_long(const ordered_json& j, const std::string& key, long fallback,
                     const std::string& path) {
    if (!j.is_object() || j.find(key) == j.end()) return fallback;
    return long_field(j, key, path);
}

inline std::string opt_str(const ordered_json& j, const std::string& key,
                           const std::string& fallback, const std::string& path) {
    if (!j.is_object() || j.find(key) == j.end()) return fallback;
    return str_field(j, key, path);
}

inline void allow_fields(const ordered_json& j, std::initializer_list<const char*> keys,
                         const std::string& path) {
    if (!j.is_object()) throw InputError(path + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) throw InputError(path + "." + it.key() + " is not a recognized field");
    }
}

inline std::vector<long> long_array(const ordered_json& j, const std::string& key,
                                    const std::string& path) {
    const ordered_json& v = field(j, key, path);
    if (!v.is_array()) throw InputError(path + "." + key + " must be an array of integers");
    std::vector<long> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer())
            throw InputError(path + "." + key + "[" + std::to_string(i) +
                             "] must be an integer");
        out.push_back(v[i].get<long>());
    }
    return out;
}

// ---- domain parsers ----

inline ReducedWord parse_address(std::string s, int alphabet, const std::string& what) {
    if (s == ".") s.clear();
    for (char c : s)
        if (c < 'a' || c >= static_cast<char>('a' + alphabet))
            throw InputError(what + ": letter '" + std::string(1, c) + "' is outside the first " +
                             std::to_string(alphabet) + " letters");
    ReducedWord w = ReducedWord::reduce(s, alphabet);
    if (w.str() != s) throw InputError(what + " must be reduced (no equal adjacent letters)");
    return w;
}

inline DecoratedVertex parse_vertex(const std::string& s, int alphabet, const std::string& what) {
    VTag tag = VTag::old_v;
    std::string rest = s;
    if (rest.rfind("near@", 0) == 0) {
        tag = VTag::new_near;
        rest = rest.substr(5);
    } else if (rest.rfind("far@", 0) == 0) {
        tag = VTag::new_far;
        rest = rest.substr(4);
    }
    return DecoratedVertex(tag, parse_address(rest, alphabet, what));
}

inline Code parse_code(const std::string& s, const std::string& what) {
    std::size_t bar = s.find('|');
    if (bar == std::string::npos || s.find('|', bar + 1) != std::string::npos)
        throw InputError(what + " must look like \"prefix|period\", e.g. \"|b\" for (b,b,b,...)");
    Code c{s.substr(0, bar), s.substr(bar + 1)};
    try {
        c.validate();
    } catch (const InputError& e) {
        throw InputError(what + ": " + e.what());
    }
    return c;
}

inline std::string code_str(const Code& c) { return c.prefix + "|" + c.period; }

inline std::string word_str(const ReducedWord& w) { return w.empty() ? "e" : w.str(); }

inline LSet parse_lset(const ordered_json& j, const std::string& path) {
    allow_fields(j, {"members", "tail"}, path);
    LSet l;
    l.members = long_array(j, "members", path);
    if (j.find("tail") != j.end()) {
        const ordered_json& t = j["tail"];
        allow_fields(t, {"start", "gaps"}, path + ".tail");
        l.has_tail = true;
        l.tail_start = long_field(t, "start", path + ".tail");
        l.tail_gaps = long_array(t, "gaps", path + ".tail");
    }
    try {
        l.validate();
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
    return l;
}

inline SymbolicSequence parse_sequence(const ordered_json& j, const std::string& path) {
    std::string kind = str_field(j, "kind", path);
    auto single_letter = [&](const std::string& s, const std::string& key) {
        if (s.size() != 1) throw InputError(path + "." + key + " must be a single letter");
        return s[0];
    };
    SymbolicSequence s = [&] {
        if (kind == "substitution") {
            allow_fields(j, {"kind", "rules", "seed", "left_seed", "capacity", "shift",
                             "reversed", "mutations"},
                         path);
            std::map<char, std::string> rules;
            if (j.find("rules") == j.end()) {
                rules = squarefree_rules();
            } else {
                const ordered_json& r = j["rules"];
                if (!r.is_object())
                    throw InputError(path + ".rules must map single letters to strings");
                for (auto it = r.begin(); it != r.end(); ++it) {
                    if (it.key().size() != 1 || !it.value().is_string())
                        throw InputError(path + ".rules must map single letters to strings");
                    rules[it.key()[0]] = it.value().get<std::string>();
                }
            }
            char seed = single_letter(opt_str(j, "seed", "a", path), "seed");
            long capacity = opt_long(j, "capacity", 3000, path);
            std::string left = opt_str(j, "left_seed", "", path);
            if (left.empty()) return SymbolicSequence::substitution_auto(rules, seed, capacity);
            return SymbolicSequence::substitution(rules, seed, single_letter(left, "left_seed"),
                                                  capacity);
        }
        if (kind == "periodic") {
            allow_fields(j, {"kind", "left", "core", "right", "capacity", "shift", "reversed",
                             "mutations"},
                         path);
            return SymbolicSequence::periodic(str_field(j, "left", path),
                                              str_field(j, "core", path),
                                              str_field(j, "right", path),
                                              opt_long(j, "capacity", 64, path));
        }
        if (kind == "window") {
            allow_fields(j, {"kind", "letters", "start", "shift", "reversed", "mutations"}, path);
            return SymbolicSequence::window(str_field(j, "letters", path),
                                            long_field(j, "start", path));
        }
        throw InputError(path + ".kind \"" + kind +
                         "\" is not a sequence kind (substitution, periodic, window)");
    }();
    if (j.find("reversed") != j.end()) {
        if (!j["reversed"].is_boolean()) throw InputError(path + ".reversed must be a boolean");
        if (j["reversed"].get<bool>()) s = s.reversed();
    }
    long shift = opt_long(j, "shift", 0, path);
    if (shift != 0) s = s.shifted(shift);
    if (j.find("mutations") != j.end()) {
        const ordered_json& arr = j["mutations"];
        if (!arr.is_array()) throw InputError(path + ".mutations must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string mpath = path + ".mutations[" + std::to_string(i) + "]";
            allow_fields(arr[i], {"pos", "letter"}, mpath);
            std::string letter = str_field(arr[i], "letter", mpath);
            if (letter.size() != 1) throw InputError(mpath + ".letter must be a single letter");
            s = s.with_letter(long_field(arr[i], "pos", mpath), letter[0]);
        }
    }
    return s;
}

inline TreeFamily parse_family(const ordered_json& j, const std::string& path) {
    std::string kind = str_field(j, "kind", path);
    auto wrap = [&](auto make) -> TreeFamily {
        try {
            return make();
        } catch (const InputError& e) {
            std::string msg = e.what();
            if (msg.rfind(path, 0) == 0) throw;
            throw InputError(path + ": " + msg);
        }
    };
    if (kind == "plain") {
        allow_fields(j, {"kind", "alphabet"}, path);
        return wrap([&] { return TreeFamily::plain(static_cast<int>(opt_long(j, "alphabet", 3, path))); });
    }
    if (kind == "single_d") {
        allow_fields(j, {"kind", "key", "alphabet"}, path);
        int alphabet = static_cast<int>(opt_long(j, "alphabet", 3, path));
        ReducedWord key = parse_address(str_field(j, "key", path), alphabet, path + ".key");
        return wrap([&] { return TreeFamily::single_d(key); });
    }
    if (kind == "marked") {
        allow_fields(j, {"kind", "keys", "alphabet"}, path);
        int alphabet = static_cast<int>(opt_long(j, "alphabet", 3, path));
        const ordered_json& arr = field(j, "keys", path);
        if (!arr.is_array()) throw InputError(path + ".keys must be an array of addresses");
        std::vector<ReducedWord> keys;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string())
                throw InputError(path + ".keys[" + std::to_string(i) + "] must be a string");
            keys.push_back(parse_address(arr[i].get<std::string>(), alphabet,
                                         path + ".keys[" + std::to_string(i) + "]"));
        }
        return wrap([&] { return TreeFamily::marked(std::move(keys), alphabet); });
    }
    if (kind == "tl") {
        allow_fields(j, {"kind", "set", "capacity"}, path);
        LSet l = parse_lset(field(j, "set", path), path + ".set");
        return wrap([&] { return TreeFamily::tl(l, opt_long(j, "capacity", 256, path)); });
    }
    if (kind == "sl") {
        allow_fields(j, {"kind", "sets", "assign_prefix", "assign_period", "capacity"}, path);
        const ordered_json& arr = field(j, "sets", path);
        if (!arr.is_array()) throw InputError(path + ".sets must be an array of set objects");
        std::vector<LSet> sets;
        for (std::size_t i = 0; i < arr.size(); ++i)
            sets.push_back(parse_lset(arr[i], path + ".sets[" + std::to_string(i) + "]"));
        std::vector<long> pre = j.find("assign_prefix") != j.end()
                                    ? long_array(j, "assign_prefix", path)
                                    : std::vector<long>{};
        std::vector<long> per = long_array(j, "assign_period", path);
        std::vector<int> prefix(pre.begin(), pre.end());
        std::vector<int> period(per.begin(), per.end());
        return wrap([&] {
            return TreeFamily::sl(std::move(sets), std::move(prefix), std::move(period),
                                  opt_long(j, "capacity", 256, path));
        });
    }
    if (kind == "master_code") {
        allow_fields(j, {"kind", "code", "capacity"}, path);
        const ordered_json& c = field(j, "code", path);
        Code code;
        if (c.is_string()) {
            code = parse_code(c.get<std::string>(), path + ".code");
        } else {
            allow_fields(c, {"prefix", "period"}, path + ".code");
            code = Code{opt_str(c, "prefix", "", path + ".code"),
                        str_field(c, "period", path + ".code")};
            try {
                code.validate();
            } catch (const InputError& e) {
                throw InputError(path + ".code: " + e.what());
            }
        }
        return wrap([&] { return TreeFamily::master_code(code, opt_long(j, "capacity", 256, path)); });
    }
    if (kind == "line_tree") {
        allow_fields(j, {"kind", "sequence"}, path);
        SymbolicSequence s = parse_sequence(field(j, "sequence", path), path + ".sequence");
        return wrap([&] { return TreeFamily::line_tree(s); });
    }
    throw InputError(path + ".kind \"" + kind +
                     "\" is not a family kind (plain, single_d, marked, tl, sl, master_code, "
                     "line_tree)");
}

inline TreeFamily family_arg(const std::string& arg, const std::string& what) {
    return parse_family(load_spec(arg, what), what);
}

inline SubgroupOracle parse_oracle(const std::string& tag) {
    if (tag == "a0") return oracle_alternating();
    if (tag == "s0inf") return oracle_symmetric();
    if (tag == "h_odd") return oracle_fixing_evens();
    if (tag.rfind("cyclic:", 0) == 0) return oracle_cyclic(FinitaryPerm::parse(tag.substr(7)));
    throw InputError("--oracle must be one of a0, s0inf, h_odd, cyclic:<cycles>");
}

inline void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (fmt == a) return;
        if (!list.empty()) list += ", ";
        list += a;
    }
    throw InputError("--format " + fmt + " is not available here (choose " + list + ")");
}

inline void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

// ---- subcommands ----

inline int cmd_tree_dump(const std::string& fam_arg, const std::string& root, int radius,
                         bool plain, const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json", "tsv", "dot"});
    TreeFamily fam = family_arg(fam_arg, "--family");
    if (plain && format != "dot") throw InputError("--plain is only available with --format dot");
    if (format == "dot") {
        out << dot_legend;
        if (plain) {
            out << dot_plain_window(fam, radius);
        } else {
            DecoratedVertex v = parse_vertex(root, fam.alphabet(), "--root");
            out << dot_ball(extract_ball(fam, v, radius));
        }
        return 0;
    }
    DecoratedVertex v = parse_vertex(root, fam.alphabet(), "--root");
    RootedBall ball = extract_ball(fam, v, radius);
    std::vector<std::array<std::size_t, 2>> edges;
    std::vector<char> colors;
    for (std::size_t i = 0; i < ball.verts.size(); ++i)
        for (int gi = 0; gi < ball.alphabet; ++gi) {
            int w = ball.adj[i][static_cast<std::size_t>(gi)];
            if (w < 0 || static_cast<std::size_t>(w) <= i) continue;
            edges.push_back({i, static_cast<std::size_t>(w)});
            colors.push_back(static_cast<char>('a' + gi));
        }
    if (format == "json") {
        ordered_json j;
        j["family"] = kind_name(fam.kind());
        j["alphabet"] = fam.alphabet();
        j["root"] = v.to_string();
        j["radius"] = radius;
        j["vertex_count"] = ball.verts.size();
        ordered_json verts = ordered_json::array();
        for (std::size_t i = 0; i < ball.verts.size(); ++i)
            verts.push_back({{"index", i},
                             {"address", ball.verts[i].to_string()},
                             {"dist", ball.dist[i]}});
        j["vertices"] = std::move(verts);
        ordered_json es = ordered_json::array();
        for (std::size_t k = 0; k < edges.size(); ++k)
            es.push_back({{"from", edges[k][0]},
                          {"to", edges[k][1]},
                          {"color", std::string(1, colors[k])}});
        j["edges"] = std::move(es);
        emit_json(out, j);
        return 0;
    }
    if (format == "tsv") {
        out << "from\tto\tcolor\tfrom_address\tto_address\n";
        for (std::size_t k = 0; k < edges.size(); ++k)
            out << edges[k][0] << "\t" << edges[k][1] << "\t" << colors[k] << "\t"
                << ball.verts[edges[k][0]].to_string() << "\t"
                << ball.verts[edges[k][1]].to_string() << "\n";
        return 0;
    }
    out << kind_name(fam.kind()) << " ball at " << v.to_string() << ", radius " << radius << ": "
        << ball.verts.size() << " vertices, " << edges.size() << " edges\n";
    for (std::size_t i = 0; i < ball.verts.size(); ++i)
        out << "[" << i << "] " << ball.verts[i].to_string() << " (dist " << ball.dist[i] << ")\n";
    out << "edges:\n";
    for (std::size_t k = 0; k < edges.size(); ++k)
        out << "[" << edges[k][0] << "] -" << colors[k] << "- [" << edges[k][1] << "]\n";
    return 0;
}

inline int cmd_stab_enum(const std::string& fam_arg, const std::string& root, int max_len,
                         const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json", "tsv"});
    TreeFamily fam = family_arg(fam_arg, "--family");
    DecoratedVertex v = parse_vertex(root, fam.alphabet(), "--root");
    std::vector<ReducedWord> words = stabilizer_words(fam, v, max_len);
    if (format == "json") {
        ordered_json j;
        j["family"] = kind_name(fam.kind());
        j["root"] = v.to_string();
        j["max_len"] = max_len;
        j["count"] = words.size();
        ordered_json arr = ordered_json::array();
        for (const ReducedWord& w : words) arr.push_back(word_str(w));
        j["words"] = std::move(arr);
        emit_json(out, j);
        return 0;
    }
    if (format == "tsv") {
        out << "word\tlength\n";
        for (const ReducedWord& w : words) out << word_str(w) << "\t" << w.size() << "\n";
        return 0;
    }
    out << words.size() << " words of length <= " << max_len << " fix " << v.to_string()
        << " in " << kind_name(fam.kind()) << "\n";
    for (const ReducedWord& w : words) out << word_str(w) << "\n";
    return 0;
}

inline int cmd_ball_code(const std::string& fam_arg, const std::string& root, int radius,
                         const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    TreeFamily fam = family_arg(fam_arg, "--family");
    DecoratedVertex v = parse_vertex(root, fam.alphabet(), "--root");
    std::string code = ball_code_at(fam, v, radius);
    if (format == "json") {
        ordered_json j;
        j["family"] = kind_name(fam.kind());
        j["root"] = v.to_string();
        j["radius"] = radius;
        j["code"] = code;
        emit_json(out, j);
        return 0;
    }
    out << code << "\n";
    return 0;
}

inline int cmd_dist_tau(const std::string& fam_a, const std::string& root_a,
                        const std::string& fam_b, const std::string& root_b, int max_radius,
                        const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    TreeFamily fa = family_arg(fam_a, "--family-a");
    TreeFamily fb = family_arg(fam_b, "--family-b");
    DecoratedVertex va = parse_vertex(root_a, fa.alphabet(), "--root-a");
    DecoratedVertex vb = parse_vertex(root_b, fb.alphabet(), "--root-b");
    TauDistance d = dist_tau(fa, va, fb, vb, max_radius);
    if (format == "json") {
        ordered_json j;
        j["family_a"] = kind_name(fa.kind());
        j["root_a"] = va.to_string();
        j["family_b"] = kind_name(fb.kind());
        j["root_b"] = vb.to_string();
        j["max_radius"] = max_radius;
        j["resolved"] = d.resolved;
        j["k"] = d.k;
        j["distance"] = d.to_string();
        emit_json(out, j);
        return 0;
    }
    out << d.to_string() << "\n";
    return 0;
}

inline int cmd_census(const std::string& fam_arg, long R, int r, const std::string& format,
                      std::ostream& out) {
    require_format(format, {"text", "json", "tsv"});
    TreeFamily fam = family_arg(fam_arg, "--family");
    CensusResult res = census(fam, R, r);
    if (format == "json") {
        ordered_json j;
        j["family"] = kind_name(fam.kind());
        j["R"] = res.R;
        j["r"] = res.r;
        j["classes"] = res.entries.size();
        j["total"] = res.total().to_string();
        ordered_json arr = ordered_json::array();
        for (const CensusEntry& e : res.entries) {
            ordered_json row;
            row["code"] = e.code;
            row["count"] = e.count.to_string();
            row["plain"] = e.plain_class;
            row["witness"] = e.witness ? ordered_json(e.witness->to_string()) : ordered_json();
            row["witness_dist"] = e.witness_dist;
            arr.push_back(std::move(row));
        }
        j["entries"] = std::move(arr);
        emit_json(out, j);
        return 0;
    }
    if (format == "tsv") {
        out << "count\tplain\twitness\twitness_dist\tcode\n";
        for (const CensusEntry& e : res.entries)
            out << e.count.to_string() << "\t" << (e.plain_class ? "yes" : "no") << "\t"
                << (e.witness ? e.witness->to_string() : "-") << "\t" << e.witness_dist << "\t"
                << e.code << "\n";
        return 0;
    }
    out << kind_name(fam.kind()) << " census: R=" << res.R << " r=" << res.r << ", "
        << res.entries.size() << " classes, " << res.total().to_string() << " vertices\n";
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
        const CensusEntry& e = res.entries[i];
        out << "[" << i << "] count=" << e.count.to_string()
            << " plain=" << (e.plain_class ? "yes" : "no")
            << " witness=" << (e.witness ? e.witness->to_string() : "-")
            << " dist=" << e.witness_dist << " code=" << e.code << "\n";
    }
    return 0;
}

inline int cmd_eqc_certify(const std::string& fam_arg, int r, int n, long R, long search_radius,
                           const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    TreeFamily fam = family_arg(fam_arg, "--family");
    EqcCertificate cert = certify_eqc(fam, r, n, R, search_radius);
    if (format == "json") {
        ordered_json j;
        j["family"] = kind_name(fam.kind());
        j["r"] = cert.r;
        j["n"] = cert.n;
        j["R"] = cert.R;
        j["search_radius"] = cert.search_radius;
        j["certified"] = cert.certified();
        ordered_json arr = ordered_json::array();
        for (const EqcEntry& e : cert.entries) {
            ordered_json row;
            row["code"] = e.code;
            row["witness"] = e.witness.to_string();
            row["anchor"] = e.anchor ? ordered_json(e.anchor->to_string()) : ordered_json();
            row["stab_match"] = e.stab_match;
            arr.push_back(std::move(row));
        }
        j["entries"] = std::move(arr);
        j["uncovered"] = cert.uncovered();
        emit_json(out, j);
    } else {
        if (cert.certified())
            out << "certified: every recurrent code anchors near the root with matching "
                   "stabilizers\n";
        else
            out << "refused: " << cert.uncovered().size()
                << " recurrent codes have no anchored match\n";
        out << "r=" << cert.r << " n=" << cert.n << " R=" << cert.R
            << " search_radius=" << cert.search_radius << " codes=" << cert.entries.size()
            << "\n";
        for (std::size_t i = 0; i < cert.entries.size(); ++i) {
            const EqcEntry& e = cert.entries[i];
            out << "[" << i << "] witness=" << e.witness.to_string()
                << " anchor=" << (e.anchor ? e.anchor->to_string() : "-")
                << " stab_match=" << (e.stab_match ? "yes" : "no") << " code=" << e.code << "\n";
        }
    }
    return cert.certified() ? 0 : 2;
}

inline int cmd_cb_rank(long alpha, long empirical_depth, const std::string& format,
                       std::ostream& out) {
    require_format(format, {"text", "json"});
    ClosurePresentation p = weak_pair_presentation(alpha);
    std::optional<long> emp;
    if (empirical_depth > 0)
        emp = empirical_rank(presentation_expr(p).eval(static_cast<std::size_t>(empirical_depth)));
    if (format == "json") {
        ordered_json j;
        j["alpha"] = p.alpha;
        j["rank"] = p.rank();
        ordered_json arr = ordered_json::array();
        for (const Stratum& s : p.strata)
            arr.push_back({{"label", s.label}, {"death_step", s.death_step}});
        j["strata"] = std::move(arr);
        if (emp) {
            j["empirical_depth"] = empirical_depth;
            j["empirical_rank"] = *emp;
        }
        emit_json(out, j);
        return 0;
    }
    out << p.rank() << "\n";
    if (emp) out << "empirical rank at depth " << empirical_depth << ": " << *emp << "\n";
    return 0;
}

inline int cmd_subshift_stats(const std::string& seq_arg, const std::string& word, long W,
                              int max_len, const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json", "tsv"});
    SymbolicSequence s = parse_sequence(load_spec(seq_arg, "--sequence"), "--sequence");
    std::vector<FactorStats> rows;
    if (!word.empty()) {
        rows.push_back(recurrence_stats(s, word, W));
    } else {
        for (int len = 1; len <= max_len; ++len) {
            std::vector<std::string> words;
            for (const std::string& f : factor_set(s, len, -W, W + 1))
                words.emplace_back(f.rbegin(), f.rend());
            std::sort(words.begin(), words.end());
            for (const std::string& w : words) rows.push_back(recurrence_stats(s, w, W));
        }
    }
    bool good = s.is_good();
    if (format == "json") {
        ordered_json j;
        j["sequence"] = s.tag();
        j["good"] = good;
        j["window"] = W;
        ordered_json arr = ordered_json::array();
        for (const FactorStats& st : rows) {
            ordered_json row;
            row["word"] = st.word;
            row["seen"] = !st.absent();
            row["count"] = st.occurrences.size();
            row["first"] = st.absent() ? ordered_json() : ordered_json(st.occurrences.front());
            row["last"] = st.absent() ? ordered_json() : ordered_json(st.occurrences.back());
            row["max_gap"] = st.absent() ? ordered_json() : ordered_json(st.max_gap);
            if (!word.empty()) row["occurrences"] = st.occurrences;
            arr.push_back(std::move(row));
        }
        j["rows"] = std::move(arr);
        emit_json(out, j);
        return 0;
    }
    if (format == "tsv") {
        out << "word\tlength\tseen\tcount\tfirst\tlast\tmax_gap\n";
        for (const FactorStats& st : rows) {
            out << st.word << "\t" << st.word.size() << "\t" << (st.absent() ? "no" : "yes")
                << "\t" << st.occurrences.size() << "\t";
            if (st.absent())
                out << "-\t-\t-\n";
            else
                out << st.occurrences.front() << "\t" << st.occurrences.back() << "\t"
                    << st.max_gap << "\n";
        }
        return 0;
    }
    out << s.tag() << " sequence, " << (good ? "good" : "not good") << " on its window; "
        << "recurrence over [" << -W << ", " << W << "]\n";
    for (const FactorStats& st : rows) {
        if (st.absent()) {
            out << "word " << st.word << ": absent\n";
            continue;
        }
        out << "word " << st.word << ": " << st.occurrences.size() << " seers, first "
            << st.occurrences.front() << ", last " << st.occurrences.back() << ", max gap "
            << st.max_gap << "\n";
    }
    return 0;
}

inline int cmd_subshift_discriminate(const std::string& seq_a, const std::string& seq_b,
                                     int depth, const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    SymbolicSequence a = parse_sequence(load_spec(seq_a, "--sequence-a"), "--sequence-a");
    SymbolicSequence b = parse_sequence(load_spec(seq_b, "--sequence-b"), "--sequence-b");
    DiscriminationResult res = discriminate(a, b, depth);
    std::string verdict = res.verdict == LineVerdict::translate     ? "translate-detected"
                          : res.verdict == LineVerdict::distinct    ? "distinct"
                                                                    : "inconclusive";
    std::optional<std::string> trace_a, trace_b;
    bool verified = false;
    if (res.verdict == LineVerdict::distinct) {
        TreeFamily la = TreeFamily::line_tree(a);
        TreeFamily lb = TreeFamily::line_tree(b);
        DecoratedVertex origin = DecoratedVertex::root(3);
        WalkTrace wa = walk(la, *res.word, origin);
        WalkTrace wb = walk(lb, *res.word, origin);
        trace_a = wa.to_string();
        trace_b = wb.to_string();
        verified = wa.closed() == res.word_separates_a && wb.closed() == !res.word_separates_a;
    }
    if (format == "json") {
        ordered_json j;
        j["depth"] = depth;
        j["verdict"] = verdict;
        if (res.verdict == LineVerdict::translate) {
            j["shift"] = res.shift;
            j["reflected"] = res.reflected;
        }
        if (res.verdict == LineVerdict::distinct) {
            j["word"] = word_str(*res.word);
            j["word_separates_a"] = res.word_separates_a;
            j["verified"] = verified;
            j["walk_a"] = *trace_a;
            j["walk_b"] = *trace_b;
        }
        emit_json(out, j);
        return 0;
    }
    if (res.verdict == LineVerdict::translate) {
        out << "translate-detected: shift=" << res.shift
            << " reflected=" << (res.reflected ? "yes" : "no") << "\n";
    } else if (res.verdict == LineVerdict::distinct) {
        out << "distinct: word " << word_str(*res.word) << " "
            << (res.word_separates_a ? "fixes the origin in A and moves it in B"
                                     : "fixes the origin in B and moves it in A")
            << (verified ? " (walk-verified)" : " (verification failed)") << "\n";
        out << "walk A: " << *trace_a << "\n";
        out << "walk B: " << *trace_b << "\n";
    } else {
        out << "inconclusive: no mismatch or translate match within depth " << depth << "\n";
    }
    return 0;
}

inline int cmd_g5_build_h(const std::string& code_s, const std::string& other_s,
                          long search_depth, const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    Code code = parse_code(code_s, "--code");
    Code other = parse_code(other_s, "--other");
    HGenerators h = build_h(code, other, search_depth);
    TreeFamily first = TreeFamily::master_code(code);
    TreeFamily second = TreeFamily::master_code(other);
    DecoratedVertex root = DecoratedVertex::root(5);
    bool fixes = true;
    for (const ReducedWord& w : h.words())
        if (apply_word(first, w, root) != root || !walk(first, w, root).closed()) fixes = false;
    bool moves = apply_word(second, h.alpha, root) != root;
    if (format == "json") {
        ordered_json j;
        j["code"] = code_str(code);
        j["other"] = code_str(other);
        j["step"] = h.step;
        j["gamma"] = word_str(h.gamma);
        ordered_json conj = ordered_json::array();
        for (const ReducedWord& w : h.conjugates) conj.push_back(word_str(w));
        j["conjugates"] = std::move(conj);
        j["delta"] = word_str(h.delta);
        j["alpha"] = word_str(h.alpha);
        j["alpha_length"] = h.alpha.size();
        j["generators_fix_first_root"] = fixes;
        j["alpha_moves_second_root"] = moves;
        emit_json(out, j);
        return 0;
    }
    out << "codes " << code_str(code) << " and " << code_str(other) << " diverge at step "
        << h.step << "\n";
    out << "gamma = " << word_str(h.gamma) << "\n";
    out << "conjugates =";
    for (const ReducedWord& w : h.conjugates) out << " " << word_str(w);
    out << "\n";
    out << "delta = " << word_str(h.delta) << "\n";
    out << "alpha = " << word_str(h.alpha) << " (length " << h.alpha.size() << ")\n";
    out << "generators fix the first root: " << (fixes ? "yes" : "no") << "\n";
    out << "alpha moves the second root: " << (moves ? "yes" : "no") << "\n";
    return 0;
}

inline int cmd_g5_escape(const std::string& code_s, const std::string& other_s, long search_depth,
                         bool orbit_scan, long window, long max_size, std::size_t max_states,
                         int samples, unsigned seed, const std::string& format,
                         std::ostream& out) {
    require_format(format, {"text", "json"});
    Code code = parse_code(code_s, "--code");
    Code other = parse_code(other_s, "--other");
    HGenerators h = build_h(code, other, search_depth);
    TreeFamily second = TreeFamily::master_code(other);
    if (orbit_scan) {
        OrbitScan scan = orbit_certificate(second, h.words(), window, max_states);
        if (format == "json") {
            ordered_json j;
            j["mode"] = "orbit-scan";
            j["code"] = code_str(code);
            j["other"] = code_str(other);
            j["radius"] = scan.radius;
            j["max_states"] = scan.max_states;
            j["scanned"] = scan.scanned;
            j["orbits"] = scan.orbits;
            j["escaped"] = scan.escaped;
            j["grew"] = scan.grew;
            j["no_small_orbits"] = scan.no_small_orbits();
            ordered_json reps = ordered_json::array();
            for (const DecoratedVertex& v : scan.small_orbit_reps) reps.push_back(v.to_string());
            j["small_orbit_reps"] = std::move(reps);
            emit_json(out, j);
        } else {
            out << "orbit scan radius " << scan.radius << ", max states " << scan.max_states
                << ": " << scan.scanned << " vertices, " << scan.orbits << " orbits, "
                << scan.escaped << " escaped, " << scan.grew << " grew\n";
            if (scan.no_small_orbits())
                out << "no small invariant orbits: every set of size <= " << scan.max_states
                    << " inside the window is escaped\n";
            else {
                out << scan.small_orbit_reps.size() << " small invariant orbits, first at "
                    << scan.small_orbit_reps.front().to_string() << "\n";
            }
        }
        return scan.no_small_orbits() ? 0 : 2;
    }
    std::mt19937 rng(seed);
    struct Row {
        std::vector<std::string> set;
        bool found = false;
        std::string word, vertex, image;
        bool ok = false;
    };
    std::vector<Row> rows;
    for (int i = 0; i < samples; ++i) {
        std::vector<DecoratedVertex> f = detail::random_connected_set(second, window, max_size, rng);
        Row row;
        for (const DecoratedVertex& v : f) row.set.push_back(v.to_string());
        std::sort(row.set.begin(), row.set.end());
        std::optional<EscapeWitness> w = escape_witness(second, f, h.words());
        if (w) {
            row.found = true;
            row.word = word_str(w->word);
            row.vertex = w->vertex.to_string();
            row.image = w->image.to_string();
            bool outside = std::find(f.begin(), f.end(), w->image) == f.end();
            row.ok = outside && apply_word(second, w->word, w->vertex) == w->image;
        }
        rows.push_back(std::move(row));
    }
    if (format == "json") {
        ordered_json j;
        j["mode"] = "samples";
        j["code"] = code_str(code);
        j["other"] = code_str(other);
        j["window"] = window;
        j["max_size"] = max_size;
        j["seed"] = seed;
        ordered_json arr = ordered_json::array();
        for (const Row& r : rows) {
            ordered_json row;
            row["set"] = r.set;
            row["escape_found"] = r.found;
            if (r.found) {
                row["word"] = r.word;
                row["moves"] = r.vertex;
                row["to"] = r.image;
                row["verified"] = r.ok;
            }
            arr.push_back(std::move(row));
        }
        j["samples"] = std::move(arr);
        emit_json(out, j);
        return 0;
    }
    out << samples << " sampled connected sets in a radius-" << window << " window, sizes up to "
        << max_size << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        out << "[" << i << "] size=" << r.set.size() << " {";
        for (std::size_t k = 0; k < r.set.size(); ++k) out << (k ? ", " : "") << r.set[k];
        out << "}";
        if (r.found)
            out << " escape: " << r.word << " moves " << r.vertex << " -> " << r.image
                << (r.ok ? " (verified)" : " (verification failed)") << "\n";
        else
            out << " no escape found\n";
    }
    return 0;
}

inline SearchStrategy parse_strategy(const std::string& s) {
    if (s == "auto") return SearchStrategy::automatic;
    if (s == "exhaustive") return SearchStrategy::exhaustive;
    if (s == "greedy") return SearchStrategy::greedy;
    if (s == "orbit") return SearchStrategy::orbit;
    throw InputError("--strategy must be one of auto, exhaustive, greedy, orbit");
}

inline const char* strategy_name(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::automatic: return "auto";
        case SearchStrategy::exhaustive: return "exhaustive";
        case SearchStrategy::greedy: return "greedy";
        case SearchStrategy::orbit: return "orbit";
    }
    return "?";
}

inline int cmd_expansion_search(const std::string& code_s, const std::string& other_s,
                                long search_depth, long max_size, long window,
                                const std::string& strategy_s, unsigned seed,
                                const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    Code code = parse_code(code_s, "--code");
    Code other = parse_code(other_s, "--other");
    HGenerators h = build_h(code, other, search_depth);
    TreeFamily second = TreeFamily::master_code(other);
    SearchStrategy strategy = parse_strategy(strategy_s);
    ExpansionReport rep = min_ratio_search(second, h.words(), max_size, window, strategy, seed);
    if (format == "json") {
        ordered_json j;
        j["code"] = code_str(code);
        j["other"] = code_str(other);
        j["strategy"] = strategy_name(rep.strategy);
        j["max_size"] = rep.max_size;
        j["window"] = rep.window;
        j["tested"] = rep.tested;
        j["min_ratio"] = rep.min_ratio.to_string();
        j["delta"] = rep.delta().to_string();
        j["certified_floor"] = rep.certified_floor;
        j["label"] = rep.label;
        ordered_json worst = ordered_json::array();
        for (const DecoratedVertex& v : rep.worst_set) worst.push_back(v.to_string());
        j["worst_set"] = std::move(worst);
        emit_json(out, j);
        return 0;
    }
    out << strategy_name(rep.strategy) << " search over connected sets up to size "
        << rep.max_size << " in a radius-" << rep.window << " window\n";
    out << "tested " << rep.tested << (rep.strategy == SearchStrategy::orbit ? " orbits" : " sets")
        << "\n";
    out << "min ratio " << rep.min_ratio.to_string() << " (delta " << rep.delta().to_string()
        << "), certified floor: " << (rep.certified_floor ? "yes" : "no") << "\n";
    out << rep.label << "\n";
    if (!rep.worst_set.empty()) {
        out << "worst set (size " << rep.worst_set.size() << "): {";
        for (std::size_t k = 0; k < rep.worst_set.size(); ++k)
            out << (k ? ", " : "") << rep.worst_set[k].to_string();
        out << "}\n";
    }
    return 0;
}

inline int cmd_ergo_certificate(const std::string& code_s, const std::string& other_s,
                                const CertificateParams& params, const std::string& format,
                                std::ostream& out) {
    require_format(format, {"text", "json"});
    Code code = parse_code(code_s, "--code");
    Code other = parse_code(other_s, "--other");
    WeakIncomparabilityCertificate cert = certificate(code, other, params);
    if (format == "json") {
        ordered_json j;
        j["code"] = code_str(code);
        j["other"] = code_str(other);
        ordered_json pj;
        pj["search_depth"] = params.search_depth;
        pj["window"] = params.window;
        pj["max_size"] = params.max_size;
        pj["escape_samples"] = params.escape_samples;
        pj["seed"] = params.seed;
        pj["free_word_len"] = params.free_word_len;
        pj["free_moved"] = params.free_moved;
        j["params"] = std::move(pj);
        j["step"] = cert.h.step;
        j["alpha"] = word_str(cert.h.alpha);
        j["alpha_length"] = cert.h.alpha.size();
        j["fixed_point_verified"] = cert.fixed_point_verified;
        j["separation_verified"] = cert.separation_verified;
        j["escapes_tested"] = cert.escapes_tested;
        j["escapes_verified"] = cert.escapes_verified;
        ordered_json ej;
        ej["min_ratio"] = cert.expansion.min_ratio.to_string();
        ej["tested"] = cert.expansion.tested;
        ej["certified_floor"] = cert.expansion.certified_floor;
        j["expansion"] = std::move(ej);
        j["free_words_checked"] = cert.free_words_checked;
        j["free_min_moved"] = cert.free_min_moved;
        j["freeness_verified"] = cert.freeness_verified;
        j["satisfied"] = cert.satisfied();
        j["verdict"] = cert.verdict();
        emit_json(out, j);
    } else {
        out << cert.verdict() << "\n";
        out << "codes " << code_str(code) << " and " << code_str(other) << " diverge at step "
            << cert.h.step << "; alpha has length " << cert.h.alpha.size() << "\n";
        out << "fixed point: " << (cert.fixed_point_verified ? "yes" : "no")
            << ", separation: " << (cert.separation_verified ? "yes" : "no") << ", escapes: "
            << cert.escapes_tested << (cert.escapes_verified ? " verified" : " with failures")
            << "\n";
        out << "expansion floor " << cert.expansion.min_ratio.to_string() << " over "
            << cert.expansion.tested << " orbits"
            << (cert.expansion.certified_floor ? " (certified)" : " (not certified)") << "\n";
        out << "freeness: " << cert.free_words_checked << " words each move at least "
            << cert.free_min_moved << " window vertices\n";
    }
    return cert.satisfied() ? 0 : 2;
}

inline int cmd_finitary_dichotomy(const std::string& oracle_tag, long l, long w,
                                  const std::string& format, std::ostream& out) {
    require_format(format, {"text", "json"});
    SubgroupOracle h = parse_oracle(oracle_tag);
    Dichotomy d = dichotomy_check(h, l, w);
    if (format == "json") {
        ordered_json j;
        j["oracle"] = oracle_tag;
        j["description"] = h.description;
        j["l"] = l;
        j["window"] = w;
        j["result"] = to_string(d);
        emit_json(out, j);
        return 0;
    }
    out << to_string(d) << "\n";
    return 0;
}

inline int cmd_finitary_witness(const std::string& oracle_tag, int steps, long w,
                                const std::string& conjugators, const std::string& format,
                                std::ostream& out) {
    require_format(format, {"text", "json"});
    if (steps < 1) throw InputError("--steps must be at least 1");
    SubgroupOracle h = parse_oracle(oracle_tag);
    std::vector<FinitaryPerm> kappas;
    if (conjugators.empty()) {
        kappas = enumerate_finitary(static_cast<std::size_t>(steps));
    } else {
        std::stringstream ss(conjugators);
        std::string token;
        while (std::getline(ss, token, ',')) {
            std::size_t a = token.find_first_not_of(" \t");
            std::size_t b = token.find_last_not_of(" \t");
            if (a == std::string::npos) throw InputError("--conjugators has an empty entry");
            token = token.substr(a, b - a + 1);
            kappas.push_back(token == "e" ? FinitaryPerm() : FinitaryPerm::parse(token));
        }
        if (static_cast<int>(kappas.size()) < steps)
            throw InputError("--conjugators lists " + std::to_string(kappas.size()) +
                             " permutations but --steps needs " + std::to_string(steps));
    }
    std::vector<WitnessStep> history;
    for (int i = 0; i < steps; ++i)
        history.push_back(witness_step(h, history, kappas[static_cast<std::size_t>(i)], w));
    if (format == "json") {
        ordered_json j;
        j["oracle"] = oracle_tag;
        j["description"] = h.description;
        j["window"] = w;
        ordered_json arr = ordered_json::array();
        for (int i = 0; i < steps; ++i) {
            const WitnessStep& st = history[static_cast<std::size_t>(i)];
            ordered_json row;
            row["kappa"] = kappas[static_cast<std::size_t>(i)].cycles_str();
            row["l"] = st.l;
            row["cycle_type"] = st.cycle_type;
            row["trivial_branch"] = st.trivial_branch;
            row["rho"] = st.rho.cycles_str();
            row["delta"] = st.delta.cycles_str();
            row["gamma_step"] = st.gamma_step.cycles_str();
            row["gamma"] = st.gamma.cycles_str();
            row["first_bullet"] = st.first_bullet;
            row["second_bullet"] = st.second_bullet;
            row["commutes_with_history"] = st.commutes_with_history;
            arr.push_back(std::move(row));
        }
        j["steps"] = std::move(arr);
        j["gamma"] = history.back().gamma.cycles_str();
        emit_json(out, j);
        return 0;
    }
    for (int i = 0; i < steps; ++i) {
        const WitnessStep& st = history[static_cast<std::size_t>(i)];
        out << "step " << (i + 1) << ": kappa=" << kappas[static_cast<std::size_t>(i)].cycles_str()
            << " l=" << st.l << " type=[";
        for (std::size_t k = 0; k < st.cycle_type.size(); ++k)
            out << (k ? " " : "") << st.cycle_type[k];
        out << "]" << (st.trivial_branch ? " (trivial intersection)" : "")
            << " rho=" << st.rho.cycles_str() << " delta=" << st.delta.cycles_str()
            << " conj=" << st.gamma_step.cycles_str() << " gamma=" << st.gamma.cycles_str()
            << " bullets=" << (st.first_bullet ? "yes" : "no") << ","
            << (st.second_bullet ? "yes" : "no")
            << " commutes=" << (st.commutes_with_history ? "yes" : "no") << "\n";
    }
    out << "final gamma = " << history.back().gamma.cycles_str() << "\n";
    return 0;
}

// ---- dispatcher ----

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"combinatorics of tree subgroups: trees, censuses, certificates"};
    app.name("treesub_cli");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    int rc = 0;

    // shared option storage; each leaf reads only what it registered
    std::string family, family_b, root = ".", root_b = ".";
    std::string sequence, sequence_b, word_opt, code_s, other_s, oracle_tag, conjugators;
    std::string format = "text", strategy = "orbit";
    int radius = 3, max_len = 6, ball_r = 3, depth = 6, samples = 5, steps = 3;
    int free_word_len = 4, escape_samples = 20;
    long R = 32, W = 16, search_radius = 8, search_depth = 8, alpha = 1, empirical_depth = 0;
    long window = 6, max_size = 8, max_states = 8, free_moved = 50, cutoff = 3, fin_window = 16;
    int eqc_r = 3, eqc_n = 6;
    unsigned seed = 2027u;
    bool plain = false, orbit_scan = false;

    auto add_format = [&](CLI::App* cmd, std::initializer_list<std::string> choices) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember(std::vector<std::string>(choices)));
    };

    CLI::App* tree = app.add_subcommand("tree", "decorated tree views");
    tree->require_subcommand(1);
    CLI::App* tree_dump = tree->add_subcommand("dump", "vertices and edges of a ball");
    tree_dump->add_option("--family", family, "family spec, JSON inline or path")->required();
    tree_dump->add_option("--root", root, "center vertex address");
    tree_dump->add_option("-r,--radius", radius, "ball radius");
    tree_dump->add_flag("--plain", plain, "undecorated window with dashed D edges (dot only)");
    add_format(tree_dump, {"text", "json", "tsv", "dot"});
    tree_dump->callback([&] { rc = cmd_tree_dump(family, root, radius, plain, format, out); });

    CLI::App* stab = app.add_subcommand("stab", "stabilizer enumeration");
    stab->require_subcommand(1);
    CLI::App* stab_enum = stab->add_subcommand("enum", "reduced words fixing a vertex");
    stab_enum->add_option("--family", family, "family spec, JSON inline or path")->required();
    stab_enum->add_option("--root", root, "vertex address");
    stab_enum->add_option("-n,--max-len", max_len, "maximum word length");
    add_format(stab_enum, {"text", "json", "tsv"});
    stab_enum->callback([&] { rc = cmd_stab_enum(family, root, max_len, format, out); });

    CLI::App* ball = app.add_subcommand("ball", "canonical ball codes");
    ball->require_subcommand(1);
    CLI::App* ball_code = ball->add_subcommand("code", "canonical code of a rooted ball");
    ball_code->add_option("--family", family, "family spec, JSON inline or path")->required();
    ball_code->add_option("--root", root, "center vertex address");
    ball_code->add_option("-r,--radius", ball_r, "ball radius");
    add_format(ball_code, {"text", "json"});
    ball_code->callback([&] { rc = cmd_ball_code(family, root, ball_r, format, out); });

    CLI::App* dist = app.add_subcommand("dist", "pointed-tree distances");
    dist->require_subcommand(1);
    CLI::App* dist_tau = dist->add_subcommand("tau", "2^-k distance via ball codes");
    dist_tau->add_option("--family-a", family, "first family spec")->required();
    dist_tau->add_option("--root-a", root, "first vertex");
    dist_tau->add_option("--family-b", family_b, "second family spec")->required();
    dist_tau->add_option("--root-b", root_b, "second vertex");
    dist_tau->add_option("-W,--max-radius", W, "largest radius compared");
    add_format(dist_tau, {"text", "json"});
    dist_tau->callback([&] {
        rc = cmd_dist_tau(family, root, family_b, root_b, static_cast<int>(W), format, out);
    });

    CLI::App* census_cmd = app.add_subcommand("census", "ball-code classes in a window");
    census_cmd->add_option("--family", family, "family spec, JSON inline or path")->required();
    census_cmd->add_option("-R,--window", R, "window radius");
    census_cmd->add_option("-r,--radius", ball_r, "ball radius per class");
    add_format(census_cmd, {"text", "json", "tsv"});
    census_cmd->callback([&] { rc = cmd_census(family, R, ball_r, format, out); });

    CLI::App* eqc = app.add_subcommand("eqc", "equational compactness");
    eqc->require_subcommand(1);
    CLI::App* eqc_certify = eqc->add_subcommand("certify", "anchor every recurrent code");
    eqc_certify->add_option("--family", family, "family spec, JSON inline or path")->required();
    eqc_certify->add_option("-r,--radius", eqc_r, "ball radius");
    eqc_certify->add_option("-n,--stab-len", eqc_n, "stabilizer word length");
    eqc_certify->add_option("-R,--window", R, "census window");
    eqc_certify->add_option("--search-radius", search_radius, "anchor search radius");
    add_format(eqc_certify, {"text", "json"});
    eqc_certify->callback(
        [&] { rc = cmd_eqc_certify(family, eqc_r, eqc_n, R, search_radius, format, out); });

    CLI::App* cb = app.add_subcommand("cb", "orbit-closure ranks");
    cb->require_subcommand(1);
    CLI::App* cb_rank = cb->add_subcommand("rank", "rank of the staged presentation");
    cb_rank->add_option("--alpha", alpha, "presentation level");
    cb_rank->add_option("--empirical-depth", empirical_depth,
                        "also derive the rank from prefixes at this depth (0 = skip)");
    add_format(cb_rank, {"text", "json"});
    cb_rank->callback([&] { rc = cmd_cb_rank(alpha, empirical_depth, format, out); });

    CLI::App* subshift = app.add_subcommand("subshift", "line sequences");
    subshift->require_subcommand(1);
    CLI::App* sub_stats = subshift->add_subcommand("stats", "recurrence of factors");
    sub_stats->add_option("--sequence", sequence, "sequence spec, JSON inline or path")
        ->required();
    sub_stats->add_option("--word", word_opt, "single word to scan (default: all short factors)");
    sub_stats->add_option("-W,--window", W, "seer window radius");
    sub_stats->add_option("--max-len", max_len, "factor length bound when scanning all");
    add_format(sub_stats, {"text", "json", "tsv"});
    sub_stats->callback([&] {
        rc = cmd_subshift_stats(sequence, word_opt, W, max_len, format, out);
    });
    CLI::App* sub_disc = subshift->add_subcommand("discriminate", "separate two pointed lines");
    sub_disc->add_option("--sequence-a", sequence, "first sequence spec")->required();
    sub_disc->add_option("--sequence-b", sequence_b, "second sequence spec")->required();
    sub_disc->add_option("--depth", depth, "walk and shift search depth");
    add_format(sub_disc, {"text", "json"});
    sub_disc->callback(
        [&] { rc = cmd_subshift_discriminate(sequence, sequence_b, depth, format, out); });

    CLI::App* g5 = app.add_subcommand("g5", "five-letter code-pair witnesses");
    g5->require_subcommand(1);
    CLI::App* g5_build = g5->add_subcommand("build-h", "bounce generators and alpha");
    g5_build->add_option("--code", code_s, "first code, prefix|period")->required();
    g5_build->add_option("--other", other_s, "second code, prefix|period")->required();
    g5_build->add_option("--search-depth", search_depth, "divergence search bound");
    add_format(g5_build, {"text", "json"});
    g5_build->callback([&] { rc = cmd_g5_build_h(code_s, other_s, search_depth, format, out); });
    CLI::App* g5_escape = g5->add_subcommand("escape", "words moving finite sets off themselves");
    g5_escape->add_option("--code", code_s, "first code, prefix|period")->required();
    g5_escape->add_option("--other", other_s, "second code, prefix|period")->required();
    g5_escape->add_option("--search-depth", search_depth, "divergence search bound");
    g5_escape->add_flag("--orbit-scan", orbit_scan, "certify all small sets via orbits");
    g5_escape->add_option("--window", window, "window radius on the second tree");
    g5_escape->add_option("--max-size", max_size, "sampled set size bound");
    g5_escape->add_option("--max-states", max_states, "orbit size bound for the scan");
    g5_escape->add_option("--samples", samples, "number of sampled sets");
    g5_escape->add_option("--seed", seed, "sampling seed");
    add_format(g5_escape, {"text", "json"});
    g5_escape->callback([&] {
        rc = cmd_g5_escape(code_s, other_s, search_depth, orbit_scan, window, max_size,
                           static_cast<std::size_t>(max_states), samples, seed, format, out);
    });

    CLI::App* expansion = app.add_subcommand("expansion", "boundary-growth ratios");
    expansion->require_subcommand(1);
    CLI::App* exp_search = expansion->add_subcommand("search", "minimum image/set ratio");
    exp_search->add_option("--code", code_s, "first code, prefix|period")->required();
    exp_search->add_option("--other", other_s, "second code, prefix|period")->required();
    exp_search->add_option("--search-depth", search_depth, "divergence search bound");
    exp_search->add_option("--max-size", max_size, "connected set size bound");
    exp_search->add_option("--window", window, "window radius on the second tree");
    exp_search->add_option("--strategy", strategy, "auto, exhaustive, greedy, orbit");
    exp_search->add_option("--seed", seed, "seed for greedy restarts");
    add_format(exp_search, {"text", "json"});
    exp_search->callback([&] {
        rc = cmd_expansion_search(code_s, other_s, search_depth, max_size, window, strategy, seed,
                                  format, out);
    });

    CLI::App* ergo = app.add_subcommand("ergo", "weak-incomparability certificates");
    ergo->require_subcommand(1);
    CLI::App* ergo_cert = ergo->add_subcommand("certificate", "full certificate for a code pair");
    ergo_cert->add_option("--code", code_s, "first code, prefix|period")->required();
    ergo_cert->add_option("--other", other_s, "second code, prefix|period")->required();
    ergo_cert->add_option("--search-depth", search_depth, "divergence search bound");
    ergo_cert->add_option("--window", window, "scan radius on the second tree");
    ergo_cert->add_option("--max-size", max_size, "escape and ratio set-size bound");
    ergo_cert->add_option("--escape-samples", escape_samples, "sampled sets for escapes");
    ergo_cert->add_option("--seed", seed, "sampling seed");
    ergo_cert->add_option("--free-word-len", free_word_len, "freeness word length bound");
    ergo_cert->add_option("--free-moved", free_moved, "moved vertices required per word");
    add_format(ergo_cert, {"text", "json"});
    ergo_cert->callback([&] {
        CertificateParams params;
        params.search_depth = search_depth;
        params.window = window;
        params.max_size = max_size;
        params.escape_samples = escape_samples;
        params.seed = seed;
        params.free_word_len = free_word_len;
        params.free_moved = static_cast<std::size_t>(free_moved);
        rc = cmd_ergo_certificate(code_s, other_s, params, format, out);
    });

    CLI::App* finitary = app.add_subcommand("finitary", "finitary permutation subgroups");
    finitary->require_subcommand(1);
    CLI::App* fin_dich = finitary->add_subcommand("dichotomy", "tail classification");
    fin_dich->add_option("--oracle", oracle_tag, "a0, s0inf, h_odd, cyclic:<cycles>")->required();
    fin_dich->add_option("-l,--cutoff", cutoff, "points below the cutoff are ignored");
    fin_dich->add_option("-W,--window", fin_window, "largest point examined");
    add_format(fin_dich, {"text", "json"});
    fin_dich->callback(
        [&] { rc = cmd_finitary_dichotomy(oracle_tag, cutoff, fin_window, format, out); });
    CLI::App* fin_wit = finitary->add_subcommand("witness", "stepwise conjugacy witnesses");
    fin_wit->add_option("--oracle", oracle_tag, "a0, s0inf, h_odd, cyclic:<cycles>")->required();
    fin_wit->add_option("--steps", steps, "number of consecutive steps");
    fin_wit->add_option("-W,--window", fin_window, "largest point examined");
    fin_wit->add_option("--conjugators", conjugators,
                        "comma-separated cycle strings (default: first enumerated)");
    add_format(fin_wit, {"text", "json"});
    fin_wit->callback([&] {
        rc = cmd_finitary_witness(oracle_tag, steps, fin_window, conjugators, format, out);
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

} // namespace treesub::cli
