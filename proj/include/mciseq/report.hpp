#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mciseq/evaluation.hpp"

namespace mciseq {

// Per-fold metric rows plus mean and sample-std columns.
void write_metrics_csv(const std::filesystem::path& path, const std::vector<FoldOutcome>& folds,
                       const KfoldSummary& summary, EvalLevel level);

// Raw counts, [truth][predicted], classes ordered MCI, NC.
void write_confusion_csv(const std::filesystem::path& path, const MetricsReport& report);
// Row-normalized percentages of the same matrix.
void write_confusion_pct_csv(const std::filesystem::path& path, const MetricsReport& report);

void write_subject_scores_csv(const std::filesystem::path& path,
                              const std::vector<SubjectScore>& scores);

// label, v0, v1, ... one row per test sequence; for external plotting.
void write_temporal_vectors_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<ClassLabel, std::vector<double>>>& vectors);

// Full machine-readable result: per-fold metrics, confusions, summaries.
void write_kfold_report_json(const std::filesystem::path& path, const KfoldResult& result);

// Per-class subject/theme/sentence/sequence totals plus per-subject rows.
void write_corpus_summary_json(const std::filesystem::path& path, const CorpusSummary& summary);

void write_robustness_csv(const std::filesystem::path& path, const RobustnessResult& result);
void write_robustness_json(const std::filesystem::path& path, const RobustnessResult& result);

struct AblationRun {
    std::string setting;                 // e.g. "infoloss", "gamma=100", "ffn=1024"
    bool diverged = false;
    std::vector<double> fold_subject_auc;
    std::vector<double> fold_sequence_auc;
    MetricAggregate subject_auc;
    MetricAggregate sequence_auc;
};

void write_ablation_csv(const std::filesystem::path& path, const std::string& axis,
                        const std::vector<AblationRun>& runs);
void write_ablation_json(const std::filesystem::path& path, const std::string& axis,
                         const std::vector<AblationRun>& runs);

}  // namespace mciseq
