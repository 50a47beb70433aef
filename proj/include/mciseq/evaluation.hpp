#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mciseq/corpus.hpp"
#include "mciseq/embedder.hpp"
#include "mciseq/model.hpp"
#include "mciseq/training.hpp"

namespace mciseq {

struct SubjectScore {
    std::string subject_id;
    double mean_p_mci = 0.0;
    double mean_p_nc = 0.0;
    std::size_t n_sequences = 0;
    ClassLabel predicted = ClassLabel::NC;
    ClassLabel truth = ClassLabel::NC;
};

struct PerClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_division = false;  // a denominator was zero; the metric was set to 0
};

struct MetricsReport {
    double accuracy = 0.0;
    double auc = 0.0;
    PerClassMetrics per_class[2];                      // indexed by ClassLabel
    std::array<std::array<std::size_t, 2>, 2> confusion{};  // [truth][predicted]
    std::size_t n_units = 0;
};

enum class EvalLevel { subject, sequence };

// Mean of the per-sequence probability pairs; MCI wins only on a strict
// majority of probability mass (ties go to NC).
SubjectScore aggregate_subject(const std::vector<std::array<double, 2>>& seq_probs,
                               ClassLabel truth, std::string subject_id = {});

// Comparator rule: per-sequence argmax, then the most frequent label
// (ties, including equal votes, go to NC).
SubjectScore majority_vote(const std::vector<std::array<double, 2>>& seq_probs,
                           ClassLabel truth, std::string subject_id = {});

// Mann-Whitney rank AUC; `positive` marks the MCI-class items and ties in
// score count one half. Requires both classes present.
double auc(const std::vector<std::pair<double, bool>>& score_positive);

// One scored unit: positive-class score, predicted label, true label.
struct ScoredUnit {
    double p_mci = 0.0;
    ClassLabel predicted = ClassLabel::NC;
    ClassLabel truth = ClassLabel::NC;
};

std::array<std::array<std::size_t, 2>, 2> confusion_matrix(const std::vector<ScoredUnit>& units);
MetricsReport metrics_from_units(const std::vector<ScoredUnit>& units);

struct FoldEvaluation {
    MetricsReport subject_report;
    MetricsReport sequence_report;
    std::vector<SubjectScore> subject_scores;   // mean-probability rule
    std::vector<SubjectScore> majority_scores;  // majority-voting comparator
    // temporal representation vector per test sequence, for external plotting
    std::vector<std::pair<ClassLabel, std::vector<double>>> temporal_vectors;
};

FoldEvaluation evaluate_fold(ModelParams& params, const FoldPlan& fold,
                             const std::vector<SubjectRecordSet>& corpus,
                             const EmbedderBackend& backend, std::size_t gamma,
                             std::size_t stride);

MetricsReport evaluate_fold_level(ModelParams& params, const FoldPlan& fold,
                                  const std::vector<SubjectRecordSet>& corpus,
                                  const EmbedderBackend& backend, std::size_t gamma,
                                  std::size_t stride, EvalLevel level);

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over folds
};

struct KfoldSummary {
    MetricAggregate accuracy, auc;
    MetricAggregate precision[2], recall[2], f1[2];
};

struct FoldOutcome {
    FoldPlan fold;
    TrainResult train;
    FoldEvaluation eval;
};

struct KfoldResult {
    std::vector<FoldOutcome> folds;
    KfoldSummary subject_summary;
    KfoldSummary sequence_summary;
};

MetricAggregate aggregate_metric(const std::vector<double>& values);

KfoldResult kfold_run(const std::vector<SubjectRecordSet>& corpus, int k, std::uint64_t seed,
                      const EmbedderBackend& backend, const ScaConfig& sca_cfg,
                      const MlpConfig& mlp_cfg, const TrainConfig& train_cfg);

struct RobustnessResult {
    std::vector<std::uint64_t> seeds;
    std::vector<double> config_mean_auc;  // subject-level, one per fold configuration
    MetricAggregate overall;
};

RobustnessResult robustness_run(const std::vector<SubjectRecordSet>& corpus, int k,
                                const std::vector<std::uint64_t>& seeds,
                                const EmbedderBackend& backend, const ScaConfig& sca_cfg,
                                const MlpConfig& mlp_cfg, const TrainConfig& train_cfg);

}  // namespace mciseq
