#pragma once

#include <cstdint>
#include <vector>

#include "mciseq/corpus.hpp"

namespace mciseq {

struct IntRange {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

// Controls a deterministic synthetic transcript corpus. Each sentence is
// signal-bearing with probability signal_strength (its tokens then come from
// the class half of the vocabulary) and neutral otherwise (uniform tokens), so
// the marginal token distributions of the two classes are mixtures whose
// distance scales with signal_strength: identical at 0, disjoint supports at
// 1, and a mix of informative and uninformative sentences in between.
struct SynthConfig {
    std::size_t n_subjects_per_class = 10;
    IntRange themes_per_subject{2, 4};
    IntRange sentences_per_theme{30, 60};
    std::size_t vocab_size = 400;
    double signal_strength = 1.0;
    double duration_mean = 2.5;
    double duration_std = 1.0;
    // Optional class-conditional mean shift added for MCI subjects; exercises
    // the duration feature path. Off by default.
    double duration_class_shift = 0.0;
    std::uint64_t seed = 0;
};

std::vector<SubjectRecordSet> gen_corpus(const SynthConfig& config);

}  // namespace mciseq
