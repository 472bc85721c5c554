#include "doctest.h"
#include "oracles.hpp"

#include "gda/error.hpp"
#include "gda/textpipe.hpp"

#include <fstream>

using namespace gda;
namespace fs = std::filesystem;

namespace {

FilterPolicy open_policy() {
    FilterPolicy p;
    p.min_occurrences = 0;
    return p;
}

std::vector<std::string> words(std::initializer_list<const char*> w) {
    return {w.begin(), w.end()};
}

}  // namespace

TEST_CASE("tokenize basics") {
    const FilterPolicy p = open_policy();
    CHECK(tokenize("", p).tokens.empty());
    CHECK(tokenize("Rick, Ilsa; rick!", p).tokens == words({"rick", "ilsa", "rick"}));
    CHECK(tokenize("don't 'quoted' l'amour", p).tokens == words({"don't", "quoted", "l'amour"}));
    CHECK(tokenize("abc123def 42", p).tokens == words({"abc", "def"}));
    CHECK(tokenize("Émile ÇA va", p).tokens == words({"émile", "ça", "va"}));
    CHECK(tokenize("it’s", p).tokens == words({"it's"}));

    FilterPolicy keep_case = p;
    keep_case.lowercase = false;
    CHECK(tokenize("Rick rick", keep_case).tokens == words({"Rick", "rick"}));
}

TEST_CASE("script filter drops and reports non-Roman tokens") {
    FilterPolicy p = open_policy();
    p.scripts = {Script::latin};
    const TokenStream ts = tokenize("Festival Москва Berlin Ελλάδα 東京 Paris", p);
    CHECK(ts.tokens == words({"festival", "berlin", "paris"}));
    REQUIRE(ts.rejected.size() == 3);
    CHECK(ts.rejected[0].token == "москва");
    CHECK(ts.rejected[0].script == Script::cyrillic);
    CHECK(ts.rejected[1].script == Script::greek);
    CHECK(ts.rejected[2].script == Script::han);
}

TEST_CASE("invalid UTF-8 reports the byte offset") {
    try {
        tokenize("ab\xFF" "cd", open_policy());
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
    }
    CHECK_THROWS_AS(decode_utf8("\xC3"), InputError);
    CHECK_THROWS_AS(decode_utf8("\xC0\xAF"), InputError);  // overlong
    CHECK(decode_utf8("\xE2\x80\x99") == std::u32string(1, char32_t{0x2019}));
}

TEST_CASE("case mapping covers Latin, Greek and Cyrillic") {
    CHECK(to_lower(U'Ä') == U'ä');
    CHECK(to_lower(U'Ł') == U'ł');
    CHECK(to_lower(U'Σ') == U'σ');
    CHECK(to_lower(U'Ж') == U'ж');
    CHECK(to_lower(U'Ё') == U'ё');
    CHECK(to_lower(U'ß') == U'ß');
    CHECK(script_of(U'×') == Script::none);
}

TEST_CASE("filter with no threshold and no stopwords is the identity") {
    const std::vector<RawSegment> raw{{"s1", "a b b"}, {"s2", "c a"}};
    const SegmentedCorpus built = build_corpus(raw, open_policy());
    const SegmentedCorpus filtered = apply_filter(built, open_policy());
    CHECK(filtered.retained == built.retained);
    CHECK(filtered.segments.size() == 2);
    CHECK(filtered.filter_log.empty());
    CHECK(filtered.retained == words({"a", "b", "c"}));
}

TEST_CASE("occurrence threshold is inclusive") {
    std::string text;
    for (int i = 0; i < 999; ++i) text += "rare ";
    for (int i = 0; i < 1000; ++i) text += "common ";
    FilterPolicy p;
    p.min_occurrences = 1000;
    const SegmentedCorpus c = apply_filter(build_corpus({{"day", text}}, p), p);
    CHECK(c.retained == words({"common"}));
    REQUIRE(c.filter_log.size() == 1);
    CHECK(c.filter_log[0] == FilterRecord{"rare", DropReason::rare, "999"});
}

TEST_CASE("stoplist classes and hand-counted retained vocabulary") {
    FilterPolicy p = open_policy();
    p.stoplist.word_class = {{"of", "prepositions"}, {"the", "articles"}, {"was", "verb-parts"}};
    p.stopword_classes = {"prepositions", "verb-parts", "articles"};
    const std::vector<RawSegment> raw{{"s1", "The kiss of the night was sweet"},
                                      {"s2", "Night of happiness, the kiss"},
                                      {"s3", "Tenderness was the word"}};
    const SegmentedCorpus c = apply_filter(build_corpus(raw, p), p);
    // Hand count: kiss 2, night 2, sweet 1, happiness 1, tenderness 1, word 1.
    CHECK(c.retained == words({"kiss", "night", "happiness", "sweet", "tenderness", "word"}));
    std::size_t stop = 0;
    for (const auto& r : c.filter_log)
        if (r.reason == DropReason::stopword) ++stop;
    CHECK(stop == 3);

    const Crosstab ct = crosstab(c, CrosstabMode::frequency);
    Eigen::MatrixXd hand(3, 6);
    hand << 1, 1, 0, 1, 0, 0,
            1, 1, 1, 0, 0, 0,
            0, 0, 0, 0, 1, 1;
    CHECK(same_values(ct.table.counts(), hand));
    CHECK(ct.table.row_labels() == words({"s1", "s2", "s3"}));
}

TEST_CASE("shipped stoplists load") {
    const Stoplist sl = load_stoplists(GDA_DATA_DIR "/stopwords", {"en", "fr", "es"});
    CHECK(sl.word_class.at("of") == "prepositions");
    CHECK(sl.word_class.at("avec") == "prepositions");
    CHECK(sl.word_class.at("según") == "prepositions");
    CHECK(sl.word_class.at("were") == "verb-parts");
    CHECK(sl.word_class.at("rt") == "abbreviations");
    CHECK(sl.classes() == std::set<std::string>{"abbreviations", "prepositions", "verb-parts"});
    CHECK_THROWS_AS(load_stoplists(GDA_DATA_DIR "/stopwords", {"xx"}), InputError);
}

TEST_CASE("crosstab presence vs frequency") {
    const SegmentedCorpus c = apply_filter(build_corpus({{"s", "a a b"}}, open_policy()), open_policy());
    const Crosstab f = crosstab(c, CrosstabMode::frequency);
    const Crosstab pr = crosstab(c, CrosstabMode::presence);
    CHECK(f.table.counts()(0, 0) == 2.0);
    CHECK(f.table.counts()(0, 1) == 1.0);
    CHECK(pr.table.counts()(0, 0) == 1.0);
    CHECK(pr.table.counts()(0, 1) == 1.0);

    FilterPolicy strict;
    strict.min_occurrences = 5;
    CHECK_THROWS_AS(crosstab(apply_filter(build_corpus({{"s", "a a b"}}, strict), strict),
                             CrosstabMode::frequency),
                    InputError);
}

TEST_CASE("empty segments are dropped with a log entry unless kept") {
    FilterPolicy p = open_policy();
    p.stoplist.word_class = {{"of", "prepositions"}};
    p.stopword_classes = {"prepositions"};
    const std::vector<RawSegment> raw{{"s1", "kiss"}, {"s2", "of of"}, {"s3", "kiss"}};
    const SegmentedCorpus dropped = apply_filter(build_corpus(raw, p), p);
    CHECK(dropped.segments.size() == 2);
    CHECK(dropped.filter_log.back() == FilterRecord{"s2", DropReason::empty_segment, ""});

    p.keep_empty_segments = true;
    const SegmentedCorpus kept = apply_filter(build_corpus(raw, p), p);
    const Crosstab ct = crosstab(kept, CrosstabMode::presence);
    CHECK(ct.zero_rows == words({"s2"}));
}

TEST_CASE("corpus invariants on random documents") {
    oracle::Rng rng(41);
    const std::vector<std::string> lexicon{"alpha", "beta", "gamma", "delta", "of", "the", "kiss",
                                           "rt", "москва", "night", "sea", "wind"};
    FilterPolicy p;
    p.min_occurrences = 3;
    p.scripts = {Script::latin};
    p.stoplist.word_class = {{"of", "prepositions"}, {"rt", "abbreviations"}};
    p.stopword_classes = {"prepositions", "abbreviations"};

    for (int rep = 0; rep < 20; ++rep) {
        std::vector<RawSegment> raw;
        const long docs = rng.uniform_int(2, 8);
        for (long d = 0; d < docs; ++d) {
            std::string text;
            const long n = rng.uniform_int(1, 30);
            for (long t = 0; t < n; ++t)
                text += lexicon[static_cast<size_t>(rng.uniform_int(0, static_cast<long>(lexicon.size()) - 1))] + " ";
            raw.push_back({"doc" + std::to_string(d), text});
        }
        const SegmentedCorpus built = build_corpus(raw, p);
        // Vocabulary frequencies equal summed token counts.
        std::size_t vocab_total = 0;
        for (const auto& [t, f] : built.vocabulary) vocab_total += f;
        CHECK(vocab_total == built.token_count());

        const SegmentedCorpus c = apply_filter(built, p);
        // Every dropped term appears exactly once in the log.
        std::map<std::string, int> logged;
        for (const auto& r : c.filter_log)
            if (r.reason != DropReason::empty_segment) ++logged[r.item];
        for (const auto& [t, n] : logged) CHECK(n == 1);
        for (const auto& [t, f] : built.vocabulary) {
            const bool kept = std::find(c.retained.begin(), c.retained.end(), t) != c.retained.end();
            CHECK(kept != (logged.count(t) == 1));
        }

        // Order independence.
        std::vector<RawSegment> shuffled = raw;
        std::reverse(shuffled.begin(), shuffled.end());
        const SegmentedCorpus c2 = apply_filter(build_corpus(shuffled, p), p);
        CHECK(c2.retained == c.retained);
        CHECK(build_corpus(raw, p, 3).vocabulary == built.vocabulary);

        if (c.retained.empty()) continue;
        const Crosstab f = crosstab(c, CrosstabMode::frequency);
        const Crosstab pr = crosstab(c, CrosstabMode::presence);
        CHECK(static_cast<std::size_t>(f.table.counts().sum()) == c.token_count());
        CHECK((pr.table.counts().array() <= f.table.counts().array()).all());
        CHECK(((pr.table.counts().array() == 0.0) || (pr.table.counts().array() == 1.0)).all());
        const Crosstab f2 = crosstab(c2, CrosstabMode::frequency);
        for (Eigen::Index i = 0; i < f.table.rows(); ++i) {
            const Eigen::Index i2 = find_label(f2.table.row_labels(), f.table.row_labels()[static_cast<size_t>(i)]);
            CHECK(same_values(f.table.counts().row(i), f2.table.counts().row(i2)));
        }
    }
}

TEST_CASE("multi-threaded corpus build matches single-threaded") {
    std::vector<RawSegment> raw;
    for (int i = 0; i < 17; ++i) raw.push_back({"d" + std::to_string(i), "w" + std::string(1, char('a' + i % 5)) + " kiss night"});
    const SegmentedCorpus one = build_corpus(raw, open_policy(), 1);
    const SegmentedCorpus many = build_corpus(raw, open_policy(), 4);
    CHECK(one.vocabulary == many.vocabulary);
    CHECK(one.retained == many.retained);
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(one.segments[i].counts == many.segments[i].counts);
}

TEST_CASE("segment per file in filename order") {
    const fs::path dir = fs::temp_directory_path() / "gda_test_segment_files";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const char* name : {"ch12.txt", "ch09.txt", "ch11.txt", "ch10.txt"}) std::ofstream(dir / name) << name;
    const auto segs = segment_files(dir);
    REQUIRE(segs.size() == 4);
    CHECK(segs[0].id == "ch09.txt");
    CHECK(segs[3].id == "ch12.txt");
    CHECK(segs[1].text == "ch10.txt");
    fs::remove_all(dir);
    CHECK_THROWS_AS(segment_files(dir), InputError);
}

TEST_CASE("segment by marker") {
    const std::string script = "FADE IN\nSCENE 1\nRick.\nSCENE 2\nIlsa.\n  SCENE 3\nSam plays.\n";
    // String-scan oracle: count lines whose first non-blank text is the marker.
    std::size_t markers = 0;
    std::istringstream lines(script);
    for (std::string l; std::getline(lines, l);)
        if (l.find_first_not_of(' ') != std::string::npos && l.substr(l.find_first_not_of(' ')).rfind("SCENE", 0) == 0)
            ++markers;
    CHECK(markers == 3);

    const auto with = segment_by_marker(script, "SCENE", true);
    const auto without = segment_by_marker(script, "SCENE", false);
    CHECK(with.size() == markers + 1);
    CHECK(without.size() == markers);
    CHECK(with[0].id == "preamble");
    CHECK(with[1].id == "SCENE-1");
    CHECK(without[0].text.rfind("FADE IN", 0) == 0);
    std::string joined;
    for (const auto& s : with) joined += s.text;
    CHECK(joined == script);
    CHECK(segment_by_marker("no markers", "SCENE", true).size() == 1);
}

TEST_CASE("per-day segmentation of a May-December stream") {
    using namespace std::chrono;
    std::vector<TimedRecord> recs;
    const sys_days first = sys_days{2015y / May / 11}, last = sys_days{2015y / December / 31};
    const sys_days gap1 = sys_days{2015y / August / 2}, gap2 = sys_days{2015y / October / 17};
    for (sys_days d = first; d <= last; d += days{1}) {
        if (d == gap1 || d == gap2) continue;
        const year_month_day ymd{d};
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT12:00:00Z", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        recs.push_back({buf, "festival"});
    }
    const auto all_days = segment_by_day(recs, true);
    CHECK(all_days.size() == static_cast<std::size_t>((last - first).count() + 1));
    CHECK(all_days.size() == 235);
    CHECK(all_days.front().id == "2015-05-11");
    CHECK(all_days.back().id == "2015-12-31");
    const auto active = segment_by_day(recs, false);
    CHECK(active.size() == 233);
}

TEST_CASE("timestamps convert to UTC days; bad ones name the record") {
    using namespace std::chrono;
    CHECK(parse_utc_day("2015-05-11") == sys_days{2015y / May / 11});
    CHECK(parse_utc_day("2015-05-11T23:30:00-02:00") == sys_days{2015y / May / 12});
    CHECK(parse_utc_day("2015-05-11T00:30:00.250+01:00") == sys_days{2015y / May / 10});
    CHECK(parse_utc_day("2015-05-11T10:00Z") == sys_days{2015y / May / 11});
    CHECK_THROWS_AS(parse_utc_day("2015-02-30"), InputError);
    CHECK_THROWS_AS(parse_utc_day("yesterday"), InputError);
    try {
        segment_by_day({{"2015-05-11", "a"}, {"2015/05/12", "b"}}, false);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    }
}
