#include "mciseq/embedder.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mciseq {

using nlohmann::json;

namespace {

std::uint64_t fnv1a_bytes(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (const char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

void hash_into(std::string_view feature, std::size_t dim, std::vector<double>& acc) {
    const std::uint64_t h = fnv1a_bytes(feature);
    const std::size_t bucket = static_cast<std::size_t>(h % dim);
    // sign from a high bit so it is independent of the bucket
    const double sign = (h >> 63) ? -1.0 : 1.0;
    acc[bucket] += sign;
}

}  // namespace

std::vector<double> hash_embed(std::string_view text, std::size_t dim) {
    if (dim < 1) throw std::runtime_error("hash_embed: dim must be >= 1");
    std::vector<double> v(dim, 0.0);
    const std::vector<std::string> tokens = tokenize(text);
    for (const std::string& t : tokens) hash_into(t, dim, v);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        hash_into(tokens[i] + "\x1f" + tokens[i + 1], dim, v);

    double norm2 = 0.0;
    for (const double x : v) norm2 += x * x;
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : v) x *= inv;
    }
    return v;  // zero vector when the text has no tokens
}

PrecomputedEmbeddings PrecomputedEmbeddings::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open embeddings: " + path.string());
    PrecomputedEmbeddings out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("embeddings line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string subject = j.at("subject_id").get<std::string>();
        const std::string theme = j.at("theme_id").get<std::string>();
        const std::size_t index = j.at("index").get<std::size_t>();
        std::vector<double> vec = j.at("vec").get<std::vector<double>>();
        for (const double v : vec)
            if (!std::isfinite(v))
                throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                         ": non-finite value");
        if (out.dim_ == 0) {
            out.dim_ = vec.size();
        } else if (vec.size() != out.dim_) {
            throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                     ": dimension mismatch (" + std::to_string(vec.size()) +
                                     " vs " + std::to_string(out.dim_) + ")");
        }
        out.table_[{subject, theme, index}] = std::move(vec);
    }
    return out;
}

const std::vector<double>& PrecomputedEmbeddings::lookup(const std::string& subject_id,
                                                         const std::string& theme_id,
                                                         std::size_t index) const {
    const auto it = table_.find({subject_id, theme_id, index});
    if (it == table_.end())
        throw std::runtime_error("missing embedding for (" + subject_id + ", " + theme_id + ", " +
                                 std::to_string(index) + ")");
    return it->second;
}

void PrecomputedEmbeddings::verify_covers(const std::vector<SubjectRecordSet>& corpus) const {
    for (const SubjectRecordSet& subj : corpus)
        for (const auto& [theme_id, recs] : subj.themes)
            for (const SentenceRecord& rec : recs)
                lookup(subj.subject_id, theme_id, rec.index_in_theme);
}

std::vector<double> EmbedderBackend::embed(const SentenceRecord& rec) const {
    if (kind == Kind::hash) return hash_embed(rec.text, dim);
    if (precomputed == nullptr)
        throw std::runtime_error("precomputed backend has no embeddings loaded");
    const std::vector<double>& v = precomputed->lookup(rec.subject_id, rec.theme_id, rec.index_in_theme);
    if (v.size() != dim) throw std::runtime_error("embedding dimension mismatch");
    return v;
}

std::vector<double> EmbedderBackend::sentential(const SentenceRecord& rec) const {
    return attach_duration(embed(rec), rec.duration_s, duration_transform, duration_stats);
}

std::vector<double> attach_duration(const std::vector<double>& embedding, double duration_s,
                                    DurationTransform transform, const DurationStats& stats) {
    if (duration_s < 0.0) throw std::runtime_error("attach_duration: negative duration");
    std::vector<double> out;
    out.reserve(embedding.size() + 1);
    double d = duration_s;
    if (transform == DurationTransform::zscore)
        d = (duration_s - stats.mean) / (stats.stddev > 0.0 ? stats.stddev : 1.0);
    out.push_back(d);
    out.insert(out.end(), embedding.begin(), embedding.end());
    return out;
}

DurationStats compute_duration_stats(const std::vector<SubjectRecordSet>& corpus,
                                     const std::set<std::string>& subject_ids,
                                     AccessLog* log) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const SubjectRecordSet& subj : corpus) {
        if (!subject_ids.count(subj.subject_id)) continue;
        if (log) log->note(subj.subject_id);
        for (const auto& [_, recs] : subj.themes)
            for (const SentenceRecord& rec : recs) {
                sum += rec.duration_s;
                ++n;
            }
    }
    if (n == 0) throw std::runtime_error("compute_duration_stats: no sentences");
    DurationStats stats;
    stats.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const SubjectRecordSet& subj : corpus) {
        if (!subject_ids.count(subj.subject_id)) continue;
        for (const auto& [_, recs] : subj.themes)
            for (const SentenceRecord& rec : recs) {
                const double t = rec.duration_s - stats.mean;
                ss += t * t;
            }
    }
    stats.stddev = std::sqrt(ss / static_cast<double>(n));
    return stats;
}

void write_embeddings_jsonl(const std::filesystem::path& path,
                            const std::vector<SubjectRecordSet>& corpus,
                            const EmbedderBackend& backend) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const SubjectRecordSet& subj : corpus) {
        for (const auto& [theme_id, recs] : subj.themes) {
            for (const SentenceRecord& rec : recs) {
                json j;
                j["subject_id"] = subj.subject_id;
                j["theme_id"] = theme_id;
                j["index"] = rec.index_in_theme;
                j["vec"] = backend.embed(rec);
                os << j.dump() << '\n';
            }
        }
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mciseq
