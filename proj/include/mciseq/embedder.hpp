#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mciseq/corpus.hpp"

namespace mciseq {

enum class DurationTransform { raw_seconds, zscore };

struct DurationStats {
    double mean = 0.0;
    double stddev = 1.0;
};

// Deterministic feature hashing of word unigrams and bigrams into `dim`
// signed buckets, L2-normalized. Empty text maps to the zero vector.
std::vector<double> hash_embed(std::string_view text, std::size_t dim);

// Externally produced sentence vectors keyed by (subject, theme, index).
class PrecomputedEmbeddings {
public:
    static PrecomputedEmbeddings load(const std::filesystem::path& path);

    const std::vector<double>& lookup(const std::string& subject_id,
                                      const std::string& theme_id,
                                      std::size_t index) const;
    // Every sentence of the corpus must be present.
    void verify_covers(const std::vector<SubjectRecordSet>& corpus) const;

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return table_.size(); }

private:
    std::size_t dim_ = 0;
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> table_;
};

struct EmbedderBackend {
    enum class Kind { hash, precomputed };

    Kind kind = Kind::hash;
    std::size_t dim = 768;
    DurationTransform duration_transform = DurationTransform::raw_seconds;
    DurationStats duration_stats;                       // used by zscore
    const PrecomputedEmbeddings* precomputed = nullptr;  // owned by caller

    // D-dimensional sentence embedding.
    std::vector<double> embed(const SentenceRecord& rec) const;
    // (D+1)-dimensional sentential vector: transformed duration prepended.
    std::vector<double> sentential(const SentenceRecord& rec) const;

    std::size_t model_dim() const { return dim + 1; }
};

// output[0] = transformed duration, output[1..] = embedding unchanged.
std::vector<double> attach_duration(const std::vector<double>& embedding, double duration_s,
                                    DurationTransform transform, const DurationStats& stats);

// Population mean/stddev of sentence durations over the listed subjects only.
DurationStats compute_duration_stats(const std::vector<SubjectRecordSet>& corpus,
                                     const std::set<std::string>& subject_ids,
                                     AccessLog* log = nullptr);

// One JSON object per line: {"subject_id","theme_id","index","vec":[...]}.
void write_embeddings_jsonl(const std::filesystem::path& path,
                            const std::vector<SubjectRecordSet>& corpus,
                            const EmbedderBackend& backend);

}  // namespace mciseq
