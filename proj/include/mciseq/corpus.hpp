#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mciseq {

// Label coding follows the task convention: MCI = 0, NC = 1.
enum class ClassLabel : int { MCI = 0, NC = 1 };

inline const char* label_name(ClassLabel l) { return l == ClassLabel::MCI ? "MCI" : "NC"; }

struct SentenceRecord {
    std::string subject_id;
    std::string theme_id;
    std::size_t index_in_theme = 0;
    std::string text;
    double duration_s = 0.0;
};

struct SubjectRecordSet {
    std::string subject_id;
    ClassLabel label = ClassLabel::MCI;
    // theme id -> records sorted by index_in_theme (indices contiguous from 0)
    std::map<std::string, std::vector<SentenceRecord>> themes;

    std::size_t sentence_count() const {
        std::size_t n = 0;
        for (const auto& [_, recs] : themes) n += recs.size();
        return n;
    }
};

// One gamma-window of sentences from a single theme. `sentences` holds only
// the real records (length <= gamma); pad_mask has length gamma with the real
// positions first.
struct SentenceSequence {
    std::string subject_id;
    std::string theme_id;
    std::size_t start_index = 0;
    std::vector<SentenceRecord> sentences;
    std::vector<bool> pad_mask;

    std::size_t real_length() const { return sentences.size(); }
};

struct FoldPlan {
    int fold_id = 0;  // 1-based
    std::set<std::string> train_subjects;
    std::set<std::string> test_subjects;
};

// Records which subjects a computation touched; used to assert that
// train-only statistics never read test data.
struct AccessLog {
    std::set<std::string> touched;
    void note(const std::string& subject_id) { touched.insert(subject_id); }
};

struct SubjectSummary {
    std::string subject_id;
    ClassLabel label = ClassLabel::MCI;
    std::size_t themes = 0;
    std::size_t sentences = 0;
    std::size_t sequences = 0;
};

struct ClassSummary {
    std::size_t subjects = 0;
    std::size_t themes = 0;
    std::size_t sentences = 0;
    std::size_t sequences = 0;
};

struct CorpusSummary {
    ClassSummary per_class[2];  // indexed by ClassLabel
    std::vector<SubjectSummary> subjects;
};

// One JSON object per line:
// {"subject_id","label","theme_id","index","text","duration_s"}
std::vector<SubjectRecordSet> load_corpus(const std::filesystem::path& path);
void write_corpus_jsonl(const std::filesystem::path& path,
                        const std::vector<SubjectRecordSet>& corpus);

// Windows are taken per theme and never straddle theme boundaries. Themes of
// length >= gamma produce stride-spaced full windows plus a tail window ending
// at the last sentence; shorter non-empty themes produce one zero-padded
// window.
std::vector<SentenceSequence> build_sequences(const SubjectRecordSet& subject,
                                              std::size_t gamma, std::size_t stride);

std::size_t count_sequences(const SubjectRecordSet& subject, std::size_t gamma, std::size_t stride);

// Stratified, deterministic K-fold split at subject level. Each subject lands
// in exactly one test set; per-fold test class counts differ from an even
// per-class split by at most one.
std::vector<FoldPlan> make_folds(const std::vector<SubjectRecordSet>& subjects,
                                 int k, std::uint64_t seed);

CorpusSummary summarize_corpus(const std::vector<SubjectRecordSet>& subjects,
                               std::size_t gamma, std::size_t stride);

void save_folds(const std::filesystem::path& path, const std::vector<FoldPlan>& folds);
std::vector<FoldPlan> load_folds(const std::filesystem::path& path);

const SubjectRecordSet* find_subject(const std::vector<SubjectRecordSet>& corpus,
                                     const std::string& subject_id);

}  // namespace mciseq
