#include <doctest.h>

#include <algorithm>
#include <set>

#include "ldsim/formspace.hpp"
#include "helpers.hpp"

using namespace ldsim;

TEST_CASE("trigram extraction pads with single boundary markers") {
    CHECK(extract_trigrams("aback") ==
          std::vector<std::string>{"#ab", "aba", "bac", "ack", "ck#"});
    CHECK(extract_trigrams("back") == std::vector<std::string>{"#ba", "bac", "ack", "ck#"});
    CHECK(extract_trigrams("a") == std::vector<std::string>{"#a#"});
    CHECK(extract_trigrams("ab") == std::vector<std::string>{"#ab", "ab#"});
}

TEST_CASE("trigram extraction dedups while keeping first-occurrence order") {
    // #aaaa# windows: #aa, aaa, aaa, aa# -> the repeat collapses
    CHECK(extract_trigrams("aaaa") == std::vector<std::string>{"#aa", "aaa", "aa#"});
}

TEST_CASE("trigram extraction rejects bad input") {
    CHECK_THROWS_AS(extract_trigrams(""), InvalidWordError);
    CHECK_THROWS_AS(extract_trigrams("ba#ck"), InvalidWordError);
    CHECK_THROWS_AS(extract_trigrams("#"), InvalidWordError);
}

TEST_CASE("trigram count bound: at most word length, equality iff all distinct") {
    testutil::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 2 + rng.below(7);
        std::string w;
        for (std::size_t i = 0; i < len; ++i) w += char('a' + rng.below(2));
        const auto tris = extract_trigrams(w);
        CHECK(tris.size() <= len); // a length-L word has exactly L padded windows
        // equality exactly when no window repeats
        std::vector<std::string> windows;
        const std::string padded = "#" + w + "#";
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
            windows.push_back(padded.substr(i, 3));
        const std::set<std::string> uniq(windows.begin(), windows.end());
        CHECK((tris.size() == len) == (uniq.size() == windows.size()));
        CHECK(tris.size() == uniq.size());
    }
}

TEST_CASE("cue matrix over aback and back shares the expected columns") {
    const CueMatrix m = CueMatrix::build({"aback", "back"});
    CHECK(m.word_count() == 2);
    CHECK(m.cue_count() == 6); // union of {#ab,aba,bac,ack,ck#} and {#ba,bac,ack,ck#}
    CHECK(m.row(0).count() == 5);
    CHECK(m.row(1).count() == 4);
    std::vector<std::uint32_t> shared;
    std::set_intersection(m.row(0).active.begin(), m.row(0).active.end(),
                          m.row(1).active.begin(), m.row(1).active.end(),
                          std::back_inserter(shared));
    REQUIRE(shared.size() == 3);
    std::vector<std::string> names;
    for (auto id : shared) names.push_back(m.index().trigram(id));
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"ack", "bac", "ck#"});
}

TEST_CASE("cue matrix for back/lack: 4 active each, 2 shared") {
    const CueMatrix m = CueMatrix::build({"back", "lack"});
    CHECK(m.row(0).count() == 4);
    CHECK(m.row(1).count() == 4);
    std::vector<std::uint32_t> shared;
    std::set_intersection(m.row(0).active.begin(), m.row(0).active.end(),
                          m.row(1).active.begin(), m.row(1).active.end(),
                          std::back_inserter(shared));
    CHECK(shared.size() == 2); // ack, ck#
}

TEST_CASE("cue matrix rejects empty and duplicated lexicons") {
    CHECK_THROWS_AS(CueMatrix::build({}), EmptyInputError);
    CHECK_THROWS_AS(CueMatrix::build({"back", "lack", "back"}), DuplicateEntryError);
}

TEST_CASE("cue index ids follow first occurrence and rebuilds are identical") {
    const std::vector<std::string> words = {"back", "lack", "tack", "aback"};
    const CueMatrix a = CueMatrix::build(words);
    const CueMatrix b = CueMatrix::build(words);
    REQUIRE(a.cue_count() == b.cue_count());
    for (std::uint32_t id = 0; id < a.cue_count(); ++id)
        CHECK(a.index().trigram(id) == b.index().trigram(id));
    // first word's trigrams take the first ids
    CHECK(a.index().trigram(0) == "#ba");
    CHECK(a.index().trigram(1) == "bac");
    CHECK(a.index().trigram(2) == "ack");
    CHECK(a.index().trigram(3) == "ck#");
    CHECK(a.index().trigram(4) == "#la");
}

TEST_CASE("row dims all equal the final index size") {
    const CueMatrix m = CueMatrix::build({"back", "lack", "tack", "aback"});
    for (std::size_t w = 0; w < m.word_count(); ++w) {
        CHECK(m.row(w).dim == m.cue_count());
        for (auto id : m.row(w).active) CHECK(id < m.row(w).dim);
    }
}

TEST_CASE("encode_form drops and counts unknown trigrams") {
    const CueMatrix only_back = CueMatrix::build({"back"});
    const EncodedForm full = encode_form("back", only_back.index());
    CHECK(full.vec.count() == 4);
    CHECK(full.dropped == 0);

    const EncodedForm none = encode_form("zzz", only_back.index());
    CHECK(none.vec.count() == 0);
    CHECK(none.dropped == 3); // #zz, zzz, zz#

    const CueMatrix two = CueMatrix::build({"back", "lack"});
    CHECK(encode_form("lack", two.index()).vec.count() == 4);
}

TEST_CASE("encoding a build-set word reproduces its matrix row") {
    const CueMatrix m = CueMatrix::build({"back", "lack", "tack", "sack", "aback", "a"});
    for (std::size_t w = 0; w < m.word_count(); ++w) {
        const EncodedForm e = encode_form(m.word(w), m.index());
        CHECK(e.dropped == 0);
        CHECK(e.vec.active == m.row(w).active);
        CHECK(e.vec.dim == m.row(w).dim);
    }
}

TEST_CASE("coltheart neighbors are same-length one-substitution entries") {
    const std::vector<std::string> lex = {"back", "lack", "tack", "sack",
                                          "buck", "bask", "aback"};
    auto got = coltheart_neighbors("back", lex);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::string>{"bask", "buck", "lack", "sack", "tack"});

    CHECK(coltheart_neighbors("a", {"b", "ab"}) == std::vector<std::string>{"b"});
    CHECK(coltheart_neighbors("back", {"back"}).empty());
}

TEST_CASE("levenshtein neighbor counts") {
    CHECK(levenshtein_neighbors("back", {"back", "lack", "aback"}) == 2);
    CHECK(levenshtein_neighbors("back", {"back"}) == 0);
    CHECK(levenshtein_neighbors("x", {"xx", "y"}) == 2); // one insertion, one substitution
    CHECK(levenshtein_neighbors("x", {"xx", "yz"}) == 1);
}

TEST_CASE("levenshtein distance spot checks") {
    CHECK(levenshtein_distance("kitten", "sitting") == 3);
    CHECK(levenshtein_distance("", "abc") == 3);
    CHECK(levenshtein_distance("abc", "abc") == 0);
    CHECK(levenshtein_distance("abc", "ac") == 1);
}

TEST_CASE("coltheart neighbors are a subset of same-length edit-distance-1 words") {
    testutil::Rng rng(23);
    std::vector<std::string> lex;
    std::set<std::string> seen;
    while (lex.size() < 60) {
        std::string w;
        const std::size_t len = 3 + rng.below(3);
        for (std::size_t i = 0; i < len; ++i) w += char('a' + rng.below(3));
        if (seen.insert(w).second) lex.push_back(w);
    }
    for (const auto& w : lex) {
        const auto colt = coltheart_neighbors(w, lex);
        std::size_t same_len_lev1 = 0;
        for (const auto& v : lex)
            if (v != w && v.size() == w.size() && levenshtein_distance(w, v) == 1)
                ++same_len_lev1;
        CHECK(colt.size() == same_len_lev1); // substitution is the only same-length edit
        CHECK(colt.size() <= levenshtein_neighbors(w, lex));
        for (const auto& v : colt) CHECK(levenshtein_distance(w, v) == 1);
    }
}
