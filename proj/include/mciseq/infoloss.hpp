#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "mciseq/corpus.hpp"

namespace mciseq {

// Per-training-subject sequence counts |Seq^i| with cached extrema.
struct FrequencySet {
    std::map<std::string, std::size_t> counts;
    std::size_t min_count = 0;
    std::size_t max_count = 0;
};

enum class LossKind { infoloss_kld, cross_entropy, fixed_smoothing };

// The printed uncertainty formula puts (count - epsilon/2) in the numerator,
// which cannot land in the documented [epsilon/2, 3*epsilon/2] range; the
// min-max form follows the stated range mapping and is the default. The
// printed form stays available for comparison.
enum class PsiFormula { minmax, printed };

struct LossConfig {
    LossKind kind = LossKind::infoloss_kld;
    double epsilon = 0.2;
    PsiFormula psi_formula = PsiFormula::minmax;
};

struct SmoothLabel {
    double psi = 0.0;
    std::array<double, 2> dist{0.0, 0.0};  // [p_mci, p_nc]
};

// Sequence counts over the listed (training) subjects only.
FrequencySet compute_frequency_set(const std::vector<SubjectRecordSet>& corpus,
                                   const std::set<std::string>& train_subjects,
                                   std::size_t gamma, std::size_t stride,
                                   AccessLog* log = nullptr);

// Uncertainty factor: epsilon * (count - min) / (max - min) + epsilon / 2,
// i.e. counts mapped linearly onto [epsilon/2, 3*epsilon/2]. Degenerate
// min == max maps to epsilon. Out-of-range counts (test-time subjects) are
// clamped with a warning.
double compute_psi(std::size_t count, const FrequencySet& sf, double epsilon,
                   PsiFormula formula = PsiFormula::minmax);

// [1-psi, psi] for MCI, [psi, 1-psi] for NC.
SmoothLabel smooth_label(ClassLabel label, double psi);

// KL(target || predicted) in nats; predicted components are clamped to
// [1e-12, 1-1e-12].
double kld_loss(const std::array<double, 2>& target, const std::array<double, 2>& predicted);

// Negative log-likelihood of the hard label.
double ce_loss(ClassLabel label, const std::array<double, 2>& predicted);

// Entropy bookkeeping for a subject with k sequences, before and after m
// observations, and the fractional reduction per observation (1/k).
double entropy_initial(std::size_t k);
double entropy_after(std::size_t k, std::size_t m);
double entropy_reduction(std::size_t k);

// CSV audit table: subject_id, count, psi.
void write_psi_table_csv(const std::filesystem::path& path, const FrequencySet& sf,
                         double epsilon, PsiFormula formula = PsiFormula::minmax);

}  // namespace mciseq
