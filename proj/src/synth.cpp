#include "mciseq/synth.hpp"

#include <stdexcept>
#include <string>

#include "mciseq/rng.hpp"

namespace mciseq {

namespace {

std::string zero_pad(std::size_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

// Tokens of a signal-bearing sentence come from the class half of the
// vocabulary; neutral sentences are uniform over the whole vocabulary.
std::size_t sample_token(Rng& rng, const SynthConfig& cfg, ClassLabel label, bool signal_sentence) {
    const std::size_t half = cfg.vocab_size / 2;
    if (half > 0 && signal_sentence) {
        const std::size_t off = label == ClassLabel::MCI ? 0 : half;
        const std::size_t span = label == ClassLabel::MCI ? half : cfg.vocab_size - half;
        return off + rng.uniform_int(span);
    }
    return rng.uniform_int(cfg.vocab_size);
}

double sample_duration(Rng& rng, double mean, double std) {
    // truncate at zero by rejection, with a clamp as a last resort
    for (int tries = 0; tries < 64; ++tries) {
        const double d = rng.normal(mean, std);
        if (d >= 0.0) return d;
    }
    return 0.0;
}

}  // namespace

std::vector<SubjectRecordSet> gen_corpus(const SynthConfig& cfg) {
    if (cfg.themes_per_subject.lo > cfg.themes_per_subject.hi ||
        cfg.sentences_per_theme.lo > cfg.sentences_per_theme.hi)
        throw std::runtime_error("gen_corpus: empty range");
    if (cfg.signal_strength < 0.0 || cfg.signal_strength > 1.0)
        throw std::runtime_error("gen_corpus: signal_strength must be in [0,1]");
    if (cfg.vocab_size < 2) throw std::runtime_error("gen_corpus: vocab_size must be >= 2");

    Rng rng = Rng::stream(cfg.seed, "synth");
    std::vector<SubjectRecordSet> corpus;
    corpus.reserve(2 * cfg.n_subjects_per_class);

    for (const ClassLabel label : {ClassLabel::MCI, ClassLabel::NC}) {
        for (std::size_t si = 0; si < cfg.n_subjects_per_class; ++si) {
            SubjectRecordSet subj;
            subj.subject_id =
                std::string(label == ClassLabel::MCI ? "mci_" : "nc_") + zero_pad(si, 3);
            subj.label = label;

            const std::size_t n_themes =
                rng.uniform_range(cfg.themes_per_subject.lo, cfg.themes_per_subject.hi);
            const double dmean = cfg.duration_mean +
                                 (label == ClassLabel::MCI ? cfg.duration_class_shift : 0.0);
            for (std::size_t t = 0; t < n_themes; ++t) {
                const std::string theme_id = "theme_" + zero_pad(t, 2);
                const std::size_t n_sent =
                    rng.uniform_range(cfg.sentences_per_theme.lo, cfg.sentences_per_theme.hi);
                std::vector<SentenceRecord>& recs = subj.themes[theme_id];
                recs.reserve(n_sent);
                for (std::size_t s = 0; s < n_sent; ++s) {
                    SentenceRecord rec;
                    rec.subject_id = subj.subject_id;
                    rec.theme_id = theme_id;
                    rec.index_in_theme = s;
                    // signal gates whole sentences: the corpus mixes
                    // class-bearing and neutral sentences, so windows vary in
                    // how much label information they carry
                    const bool signal_sentence = rng.uniform() < cfg.signal_strength;
                    const std::size_t n_words = rng.uniform_range(4, 12);
                    for (std::size_t w = 0; w < n_words; ++w) {
                        if (w > 0) rec.text += ' ';
                        rec.text += 'w' + zero_pad(sample_token(rng, cfg, label, signal_sentence), 4);
                    }
                    rec.duration_s = sample_duration(rng, dmean, cfg.duration_std);
                    recs.push_back(std::move(rec));
                }
            }
            corpus.push_back(std::move(subj));
        }
    }
    return corpus;
}

}  // namespace mciseq
