#include <doctest.h>

#include <set>
#include <string>

#include "mciseq/corpus.hpp"
#include "mciseq/rng.hpp"
#include "mciseq/synth.hpp"
#include "test_util.hpp"

using namespace mciseq;

namespace {

// minimal theme builder for window tests
SubjectRecordSet subject_with_theme(std::size_t n_sentences, const std::string& id = "s0") {
    SubjectRecordSet s;
    s.subject_id = id;
    s.label = ClassLabel::MCI;
    auto& recs = s.themes["t0"];
    for (std::size_t i = 0; i < n_sentences; ++i)
        recs.push_back({id, "t0", i, "sentence " + std::to_string(i), 1.0});
    return s;
}

std::vector<SubjectRecordSet> flat_corpus(std::size_t n_mci, std::size_t n_nc) {
    std::vector<SubjectRecordSet> corpus;
    for (std::size_t i = 0; i < n_mci + n_nc; ++i) {
        SubjectRecordSet s = subject_with_theme(3, "subj" + std::to_string(i));
        s.label = i < n_mci ? ClassLabel::MCI : ClassLabel::NC;
        for (auto& [_, recs] : s.themes)
            for (auto& r : recs) r.subject_id = s.subject_id;
        corpus.push_back(std::move(s));
    }
    return corpus;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("load groups records by subject and theme") {
    testutil::TempDir dir("load");
    testutil::write_file(dir.file("c.jsonl"), R"({"subject_id":"a","label":"MCI","theme_id":"t0","index":1,"text":"two","duration_s":2.0}
{"subject_id":"a","label":"MCI","theme_id":"t0","index":0,"text":"one","duration_s":1.0}
{"subject_id":"a","label":"MCI","theme_id":"t1","index":0,"text":"three","duration_s":0.5}
{"subject_id":"b","label":"NC","theme_id":"t0","index":0,"text":"four","duration_s":1.5}
{"subject_id":"b","label":"NC","theme_id":"t0","index":1,"text":"five","duration_s":2.5}
{"subject_id":"b","label":"NC","theme_id":"t0","index":2,"text":"six","duration_s":3.5}
)");
    const auto corpus = load_corpus(dir.file("c.jsonl"));
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[0].subject_id == "a");
    CHECK(corpus[0].label == ClassLabel::MCI);
    CHECK(corpus[0].themes.size() == 2);
    CHECK(corpus[0].themes.at("t0").size() == 2);
    CHECK(corpus[0].themes.at("t0")[0].text == "one");  // sorted by index
    CHECK(corpus[1].label == ClassLabel::NC);
    CHECK(corpus[1].themes.at("t0").size() == 3);
}

TEST_CASE("empty file loads an empty corpus") {
    testutil::TempDir dir("empty");
    testutil::write_file(dir.file("c.jsonl"), "");
    CHECK(load_corpus(dir.file("c.jsonl")).empty());
}

TEST_CASE("load rejects bad input with line numbers") {
    testutil::TempDir dir("bad");
    const std::string good =
        R"({"subject_id":"a","label":"MCI","theme_id":"t0","index":0,"text":"x","duration_s":1.0})";

    testutil::write_file(dir.file("neg.jsonl"),
                         good + "\n" +
                             R"({"subject_id":"a","label":"MCI","theme_id":"t0","index":1,"text":"y","duration_s":-1.0})" +
                             "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("neg.jsonl")),
                         doctest::Contains("negative duration"), std::runtime_error);

    testutil::write_file(dir.file("dup.jsonl"), good + "\n" + good + "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("dup.jsonl")), doctest::Contains("duplicate"),
                         std::runtime_error);

    testutil::write_file(dir.file("labels.jsonl"),
                         good + "\n" +
                             R"({"subject_id":"a","label":"NC","theme_id":"t0","index":1,"text":"y","duration_s":1.0})" +
                             "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("labels.jsonl")),
                         doctest::Contains("conflicting label"), std::runtime_error);

    testutil::write_file(dir.file("unknown.jsonl"),
                         R"({"subject_id":"a","label":"AD","theme_id":"t0","index":0,"text":"x","duration_s":1.0})"
                         "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("unknown.jsonl")),
                         doctest::Contains("unknown label"), std::runtime_error);

    testutil::write_file(dir.file("parse.jsonl"), "{not json\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("parse.jsonl")), doctest::Contains("line 1"),
                         std::runtime_error);

    testutil::write_file(dir.file("gap.jsonl"),
                         good + "\n" +
                             R"({"subject_id":"a","label":"MCI","theme_id":"t0","index":2,"text":"y","duration_s":1.0})" +
                             "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dir.file("gap.jsonl")), doctest::Contains("contiguous"),
                         std::runtime_error);
}

TEST_CASE("corpus round-trips through jsonl") {
    testutil::TempDir dir("rt");
    SynthConfig sc;
    sc.n_subjects_per_class = 2;
    sc.seed = 5;
    const auto corpus = gen_corpus(sc);
    write_corpus_jsonl(dir.file("c.jsonl"), corpus);
    const auto loaded = load_corpus(dir.file("c.jsonl"));
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(loaded[i].subject_id == corpus[i].subject_id);
        CHECK(loaded[i].label == corpus[i].label);
        CHECK(loaded[i].sentence_count() == corpus[i].sentence_count());
    }
}

TEST_CASE("windows: L=500 gamma=200 stride=100 start at 0,100,200,300") {
    const auto seqs = build_sequences(subject_with_theme(500), 200, 100);
    REQUIRE(seqs.size() == 4);
    CHECK(seqs[0].start_index == 0);
    CHECK(seqs[1].start_index == 100);
    CHECK(seqs[2].start_index == 200);
    CHECK(seqs[3].start_index == 300);
    for (const auto& s : seqs) {
        CHECK(s.real_length() == 200);
        CHECK(s.pad_mask.size() == 200);
    }
}

TEST_CASE("windows: exact fit gives one unpadded sequence") {
    const auto seqs = build_sequences(subject_with_theme(200), 200, 100);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].real_length() == 200);
    for (const bool b : seqs[0].pad_mask) CHECK(b);
}

TEST_CASE("windows: short theme is zero-padded with a leading-true mask") {
    const auto seqs = build_sequences(subject_with_theme(50), 200, 100);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].real_length() == 50);
    REQUIRE(seqs[0].pad_mask.size() == 200);
    for (std::size_t i = 0; i < 200; ++i) CHECK(seqs[0].pad_mask[i] == (i < 50));
}

TEST_CASE("windows: empty theme yields nothing, tail window covers the end") {
    SubjectRecordSet s = subject_with_theme(0);
    CHECK(build_sequences(s, 10, 5).empty());

    // L=23, gamma=10, stride=10: full windows at 0 and 10, tail at 13
    const auto seqs = build_sequences(subject_with_theme(23), 10, 10);
    REQUIRE(seqs.size() == 3);
    CHECK(seqs[2].start_index == 13);
    CHECK(seqs[2].sentences.back().index_in_theme == 22);
}

TEST_CASE("window soundness and coverage over random themes") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t L = 1 + rng.uniform_int(60);
        const std::size_t gamma = 1 + rng.uniform_int(20);
        const std::size_t stride = 1 + rng.uniform_int(gamma);  // stride <= gamma
        const SubjectRecordSet subj = subject_with_theme(L);
        std::set<std::size_t> covered;
        for (const auto& seq : build_sequences(subj, gamma, stride)) {
            // contiguous slice of the theme
            for (std::size_t i = 0; i < seq.real_length(); ++i)
                CHECK(seq.sentences[i].index_in_theme == seq.start_index + i);
            CHECK(seq.real_length() >= 1);
            CHECK(seq.real_length() <= gamma);
            for (const auto& rec : seq.sentences) covered.insert(rec.index_in_theme);
        }
        CHECK(covered.size() == L);  // every sentence appears in >= 1 window
        CHECK(count_sequences(subj, gamma, stride) == build_sequences(subj, gamma, stride).size());
    }
}

TEST_CASE("folds: 34+34 subjects, k=5 reproduces the reference test pattern") {
    const auto corpus = flat_corpus(34, 34);
    const auto folds = make_folds(corpus, 5, 42);
    REQUIRE(folds.size() == 5);
    std::vector<std::size_t> mci_counts, nc_counts, sums;
    for (const auto& f : folds) {
        std::size_t mci = 0, nc = 0;
        for (const auto& id : f.test_subjects) {
            const auto* s = find_subject(corpus, id);
            REQUIRE(s != nullptr);
            (s->label == ClassLabel::MCI ? mci : nc) += 1;
        }
        mci_counts.push_back(mci);
        nc_counts.push_back(nc);
        sums.push_back(mci + nc);
    }
    CHECK(mci_counts == std::vector<std::size_t>{6, 7, 7, 7, 7});
    CHECK(nc_counts == std::vector<std::size_t>{7, 7, 7, 7, 6});
    CHECK(sums == std::vector<std::size_t>{13, 14, 14, 14, 13});
}

TEST_CASE("folds: 2+2 subjects, k=2 gives one of each class per test set") {
    const auto corpus = flat_corpus(2, 2);
    for (const auto& f : make_folds(corpus, 2, 7)) {
        CHECK(f.test_subjects.size() == 2);
        std::size_t mci = 0;
        for (const auto& id : f.test_subjects)
            if (find_subject(corpus, id)->label == ClassLabel::MCI) ++mci;
        CHECK(mci == 1);
    }
}

TEST_CASE("folds are deterministic and exclusive") {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n_mci = 2 + rng.uniform_int(20);
        const std::size_t n_nc = 2 + rng.uniform_int(20);
        const int k = 2 + static_cast<int>(rng.uniform_int(3));
        if (n_mci + n_nc < static_cast<std::size_t>(k)) continue;
        const auto corpus = flat_corpus(n_mci, n_nc);
        const std::uint64_t seed = rng.next_u64();
        const auto folds_a = make_folds(corpus, k, seed);
        const auto folds_b = make_folds(corpus, k, seed);
        REQUIRE(folds_a.size() == folds_b.size());

        std::set<std::string> tested;
        for (std::size_t f = 0; f < folds_a.size(); ++f) {
            CHECK(folds_a[f].test_subjects == folds_b[f].test_subjects);
            CHECK(folds_a[f].train_subjects == folds_b[f].train_subjects);
            for (const auto& id : folds_a[f].test_subjects) {
                CHECK_FALSE(folds_a[f].train_subjects.count(id));
                CHECK(tested.insert(id).second);  // each subject tested exactly once
            }
            CHECK(folds_a[f].train_subjects.size() + folds_a[f].test_subjects.size() ==
                  corpus.size());
        }
        CHECK(tested.size() == corpus.size());
    }
}

TEST_CASE("folds: fewer subjects than k is an error") {
    CHECK_THROWS(make_folds(flat_corpus(1, 1), 3, 0));
}

TEST_CASE("fold plans round-trip through json") {
    testutil::TempDir dir("folds");
    const auto folds = make_folds(flat_corpus(5, 5), 3, 11);
    save_folds(dir.file("f.json"), folds);
    const auto loaded = load_folds(dir.file("f.json"));
    REQUIRE(loaded.size() == folds.size());
    for (std::size_t i = 0; i < folds.size(); ++i) {
        CHECK(loaded[i].fold_id == folds[i].fold_id);
        CHECK(loaded[i].train_subjects == folds[i].train_subjects);
        CHECK(loaded[i].test_subjects == folds[i].test_subjects);
    }
}

TEST_CASE("summary counts themes, sentences and sequences") {
    SubjectRecordSet s = subject_with_theme(3);
    auto& t1 = s.themes["t1"];
    for (std::size_t i = 0; i < 3; ++i) t1.push_back({"s0", "t1", i, "x", 1.0});
    const CorpusSummary sum = summarize_corpus({s}, 2, 1);
    CHECK(sum.per_class[0].subjects == 1);
    CHECK(sum.per_class[0].themes == 2);
    CHECK(sum.per_class[0].sentences == 6);
    CHECK(sum.subjects[0].themes == 2);
    CHECK(sum.subjects[0].sentences == 6);

    const CorpusSummary empty = summarize_corpus({}, 2, 1);
    CHECK(empty.per_class[0].subjects == 0);
    CHECK(empty.per_class[1].sentences == 0);
    CHECK(empty.subjects.empty());
}

TEST_CASE("summary agrees with generator bookkeeping on a synthetic corpus") {
    SynthConfig sc;
    sc.n_subjects_per_class = 3;
    sc.themes_per_subject = {2, 3};
    sc.sentences_per_theme = {5, 9};
    sc.seed = 77;
    const auto corpus = gen_corpus(sc);
    const CorpusSummary sum = summarize_corpus(corpus, 4, 2);

    // independent bookkeeping straight off the generated structures
    std::size_t themes = 0, sentences = 0, sequences = 0;
    for (const auto& subj : corpus) {
        themes += subj.themes.size();
        sentences += subj.sentence_count();
        sequences += build_sequences(subj, 4, 2).size();
    }
    CHECK(sum.per_class[0].subjects + sum.per_class[1].subjects == 6);
    CHECK(sum.per_class[0].themes + sum.per_class[1].themes == themes);
    CHECK(sum.per_class[0].sentences + sum.per_class[1].sentences == sentences);
    CHECK(sum.per_class[0].sequences + sum.per_class[1].sequences == sequences);
}

}  // TEST_SUITE
