#include "mciseq/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mciseq/rng.hpp"

namespace mciseq {

using nlohmann::json;

namespace {

ClassLabel parse_label(const std::string& s, std::size_t line_no) {
    if (s == "MCI") return ClassLabel::MCI;
    if (s == "NC") return ClassLabel::NC;
    throw std::runtime_error("line " + std::to_string(line_no) + ": unknown label \"" + s + "\"");
}

}  // namespace

std::vector<SubjectRecordSet> load_corpus(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open corpus: " + path.string());

    std::map<std::string, SubjectRecordSet> by_subject;
    std::set<std::tuple<std::string, std::string, std::size_t>> seen_keys;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        SentenceRecord rec;
        try {
            rec.subject_id = j.at("subject_id").get<std::string>();
            rec.theme_id = j.at("theme_id").get<std::string>();
            const long long idx = j.at("index").get<long long>();
            if (idx < 0)
                throw std::runtime_error("line " + std::to_string(line_no) + ": negative index");
            rec.index_in_theme = static_cast<std::size_t>(idx);
            rec.text = j.at("text").get<std::string>();
            rec.duration_s = j.at("duration_s").get<double>();
        } catch (const json::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (rec.duration_s < 0.0)
            throw std::runtime_error("line " + std::to_string(line_no) + ": negative duration");
        const ClassLabel label = parse_label(j.at("label").get<std::string>(), line_no);

        const auto key = std::make_tuple(rec.subject_id, rec.theme_id, rec.index_in_theme);
        if (!seen_keys.insert(key).second)
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate record (" +
                                     rec.subject_id + ", " + rec.theme_id + ", " +
                                     std::to_string(rec.index_in_theme) + ")");

        auto [it, inserted] = by_subject.try_emplace(rec.subject_id);
        SubjectRecordSet& subj = it->second;
        if (inserted) {
            subj.subject_id = rec.subject_id;
            subj.label = label;
        } else if (subj.label != label) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": conflicting label for subject " + rec.subject_id);
        }
        subj.themes[rec.theme_id].push_back(std::move(rec));
    }

    std::vector<SubjectRecordSet> out;
    out.reserve(by_subject.size());
    for (auto& [_, subj] : by_subject) {
        for (auto& [theme_id, recs] : subj.themes) {
            std::sort(recs.begin(), recs.end(),
                      [](const SentenceRecord& a, const SentenceRecord& b) {
                          return a.index_in_theme < b.index_in_theme;
                      });
            for (std::size_t i = 0; i < recs.size(); ++i) {
                if (recs[i].index_in_theme != i)
                    throw std::runtime_error("subject " + subj.subject_id + " theme " + theme_id +
                                             ": sentence indices not contiguous from 0");
            }
        }
        out.push_back(std::move(subj));
    }
    return out;
}

void write_corpus_jsonl(const std::filesystem::path& path,
                        const std::vector<SubjectRecordSet>& corpus) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const SubjectRecordSet& subj : corpus) {
        for (const auto& [theme_id, recs] : subj.themes) {
            for (const SentenceRecord& rec : recs) {
                json j;
                j["subject_id"] = subj.subject_id;
                j["label"] = label_name(subj.label);
                j["theme_id"] = theme_id;
                j["index"] = rec.index_in_theme;
                j["text"] = rec.text;
                j["duration_s"] = rec.duration_s;
                os << j.dump() << '\n';
            }
        }
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SentenceSequence> build_sequences(const SubjectRecordSet& subject,
                                              std::size_t gamma, std::size_t stride) {
    if (gamma < 1) throw std::runtime_error("build_sequences: gamma must be >= 1");
    if (stride < 1) throw std::runtime_error("build_sequences: stride must be >= 1");

    std::vector<SentenceSequence> out;
    for (const auto& [theme_id, recs] : subject.themes) {
        const std::size_t L = recs.size();
        if (L == 0) continue;

        auto emit = [&](std::size_t start, std::size_t len) {
            SentenceSequence seq;
            seq.subject_id = subject.subject_id;
            seq.theme_id = theme_id;
            seq.start_index = start;
            seq.sentences.assign(recs.begin() + static_cast<std::ptrdiff_t>(start),
                                 recs.begin() + static_cast<std::ptrdiff_t>(start + len));
            seq.pad_mask.assign(gamma, false);
            for (std::size_t i = 0; i < len; ++i) seq.pad_mask[i] = true;
            out.push_back(std::move(seq));
        };

        if (L >= gamma) {
            std::size_t last_start = 0;
            bool any = false;
            for (std::size_t m = 0; m + gamma <= L; m += stride) {
                emit(m, gamma);
                last_start = m;
                any = true;
            }
            // tail window so the final sentences are never dropped
            const std::size_t tail_start = L - gamma;
            if (!any || last_start != tail_start) emit(tail_start, gamma);
        } else {
            emit(0, L);  // single zero-padded window
        }
    }
    return out;
}

std::size_t count_sequences(const SubjectRecordSet& subject, std::size_t gamma, std::size_t stride) {
    std::size_t n = 0;
    for (const auto& [_, recs] : subject.themes) {
        const std::size_t L = recs.size();
        if (L == 0) continue;
        if (L < gamma) {
            n += 1;
            continue;
        }
        std::size_t full = 0;
        std::size_t last_start = 0;
        for (std::size_t m = 0; m + gamma <= L; m += stride) {
            last_start = m;
            ++full;
        }
        n += full;
        if (full == 0 || last_start != L - gamma) ++n;
    }
    return n;
}

std::vector<FoldPlan> make_folds(const std::vector<SubjectRecordSet>& subjects,
                                 int k, std::uint64_t seed) {
    if (k < 2) throw std::runtime_error("make_folds: k must be >= 2");
    if (subjects.size() < static_cast<std::size_t>(k))
        throw std::runtime_error("make_folds: fewer subjects than folds");

    std::vector<std::string> by_class[2];
    for (const SubjectRecordSet& s : subjects)
        by_class[static_cast<int>(s.label)].push_back(s.subject_id);
    for (auto& ids : by_class) std::sort(ids.begin(), ids.end());
    for (int c = 0; c < 2; ++c) {
        if (by_class[c].size() < static_cast<std::size_t>(k))
            std::fprintf(stderr, "warning: class %s has %zu subjects, fewer than k=%d\n",
                         label_name(static_cast<ClassLabel>(c)), by_class[c].size(), k);
    }

    Rng rng = Rng::stream(seed, "folds");
    for (auto& ids : by_class) rng.shuffle(ids);

    // Per class, fold f tests floor(n/k) subjects plus one extra for `n mod k`
    // folds. Extras for class 0 fill from the last fold backwards and for
    // class 1 from the first fold forwards, which keeps per-fold totals even
    // (the test-row pattern 6/7 ... 7/6 for 34+34 subjects and k=5).
    std::vector<FoldPlan> folds(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) folds[static_cast<std::size_t>(f)].fold_id = f + 1;

    for (int c = 0; c < 2; ++c) {
        const std::size_t n = by_class[c].size();
        const std::size_t base = n / static_cast<std::size_t>(k);
        const std::size_t extra = n % static_cast<std::size_t>(k);
        std::size_t cursor = 0;
        for (int f = 0; f < k; ++f) {
            const bool gets_extra =
                c == 0 ? static_cast<std::size_t>(k - 1 - f) < extra
                       : static_cast<std::size_t>(f) < extra;
            const std::size_t take = base + (gets_extra ? 1 : 0);
            for (std::size_t i = 0; i < take; ++i)
                folds[static_cast<std::size_t>(f)].test_subjects.insert(by_class[c][cursor++]);
        }
    }

    for (FoldPlan& fold : folds)
        for (const SubjectRecordSet& s : subjects)
            if (!fold.test_subjects.count(s.subject_id)) fold.train_subjects.insert(s.subject_id);

    return folds;
}

CorpusSummary summarize_corpus(const std::vector<SubjectRecordSet>& subjects,
                               std::size_t gamma, std::size_t stride) {
    CorpusSummary sum;
    for (const SubjectRecordSet& s : subjects) {
        SubjectSummary ss;
        ss.subject_id = s.subject_id;
        ss.label = s.label;
        ss.themes = s.themes.size();
        ss.sentences = s.sentence_count();
        ss.sequences = count_sequences(s, gamma, stride);
        ClassSummary& cs = sum.per_class[static_cast<int>(s.label)];
        cs.subjects += 1;
        cs.themes += ss.themes;
        cs.sentences += ss.sentences;
        cs.sequences += ss.sequences;
        sum.subjects.push_back(std::move(ss));
    }
    std::sort(sum.subjects.begin(), sum.subjects.end(),
              [](const SubjectSummary& a, const SubjectSummary& b) {
                  return a.subject_id < b.subject_id;
              });
    return sum;
}

void save_folds(const std::filesystem::path& path, const std::vector<FoldPlan>& folds) {
    json arr = json::array();
    for (const FoldPlan& f : folds) {
        json j;
        j["fold_id"] = f.fold_id;
        j["train"] = std::vector<std::string>(f.train_subjects.begin(), f.train_subjects.end());
        j["test"] = std::vector<std::string>(f.test_subjects.begin(), f.test_subjects.end());
        arr.push_back(std::move(j));
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << arr.dump(2) << '\n';
}

std::vector<FoldPlan> load_folds(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open fold plan: " + path.string());
    json arr = json::parse(is);
    std::vector<FoldPlan> folds;
    for (const json& j : arr) {
        FoldPlan f;
        f.fold_id = j.at("fold_id").get<int>();
        for (const auto& s : j.at("train")) f.train_subjects.insert(s.get<std::string>());
        for (const auto& s : j.at("test")) f.test_subjects.insert(s.get<std::string>());
        folds.push_back(std::move(f));
    }
    return folds;
}

const SubjectRecordSet* find_subject(const std::vector<SubjectRecordSet>& corpus,
                                     const std::string& subject_id) {
    for (const SubjectRecordSet& s : corpus)
        if (s.subject_id == subject_id) return &s;
    return nullptr;
}

}  // namespace mciseq
