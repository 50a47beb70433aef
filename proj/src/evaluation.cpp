#include "mciseq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mciseq {

SubjectScore aggregate_subject(const std::vector<std::array<double, 2>>& seq_probs,
                               ClassLabel truth, std::string subject_id) {
    if (seq_probs.empty()) throw std::runtime_error("aggregate_subject: no sequences");
    SubjectScore s;
    s.subject_id = std::move(subject_id);
    s.truth = truth;
    s.n_sequences = seq_probs.size();
    for (const auto& p : seq_probs) {
        s.mean_p_mci += p[0];
        s.mean_p_nc += p[1];
    }
    s.mean_p_mci /= static_cast<double>(seq_probs.size());
    s.mean_p_nc /= static_cast<double>(seq_probs.size());
    s.predicted = s.mean_p_mci > s.mean_p_nc ? ClassLabel::MCI : ClassLabel::NC;
    return s;
}

SubjectScore majority_vote(const std::vector<std::array<double, 2>>& seq_probs,
                           ClassLabel truth, std::string subject_id) {
    if (seq_probs.empty()) throw std::runtime_error("majority_vote: no sequences");
    SubjectScore s = aggregate_subject(seq_probs, truth, std::move(subject_id));
    std::size_t votes_mci = 0;
    for (const auto& p : seq_probs) votes_mci += p[0] > p[1] ? 1 : 0;
    s.predicted =
        2 * votes_mci > seq_probs.size() ? ClassLabel::MCI : ClassLabel::NC;
    return s;
}

double auc(const std::vector<std::pair<double, bool>>& score_positive) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const auto& [_, pos] : score_positive) (pos ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw std::runtime_error("auc: both classes must be present");

    std::vector<std::pair<double, bool>> sorted = score_positive;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // average ranks over tied scores, then the Mann-Whitney statistic
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t)
            if (sorted[t].second) rank_sum_pos += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

std::array<std::array<std::size_t, 2>, 2> confusion_matrix(const std::vector<ScoredUnit>& units) {
    std::array<std::array<std::size_t, 2>, 2> m{};
    for (const ScoredUnit& u : units)
        m[static_cast<std::size_t>(u.truth)][static_cast<std::size_t>(u.predicted)] += 1;
    return m;
}

MetricsReport metrics_from_units(const std::vector<ScoredUnit>& units) {
    if (units.empty()) throw std::runtime_error("metrics: no scored units");
    MetricsReport r;
    r.n_units = units.size();
    r.confusion = confusion_matrix(units);
    r.accuracy = static_cast<double>(r.confusion[0][0] + r.confusion[1][1]) /
                 static_cast<double>(units.size());
    for (int c = 0; c < 2; ++c) {
        const double tp = static_cast<double>(r.confusion[c][c]);
        const double pred_c = static_cast<double>(r.confusion[0][c] + r.confusion[1][c]);
        const double true_c = static_cast<double>(r.confusion[c][0] + r.confusion[c][1]);
        PerClassMetrics& m = r.per_class[c];
        if (pred_c > 0.0) {
            m.precision = tp / pred_c;
        } else {
            m.precision = 0.0;
            m.zero_division = true;
        }
        if (true_c > 0.0) {
            m.recall = tp / true_c;
        } else {
            m.recall = 0.0;
            m.zero_division = true;
        }
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            m.f1 = 0.0;
            m.zero_division = true;
        }
    }
    std::vector<std::pair<double, bool>> scored;
    scored.reserve(units.size());
    for (const ScoredUnit& u : units)
        scored.emplace_back(u.p_mci, u.truth == ClassLabel::MCI);
    r.auc = auc(scored);
    return r;
}

FoldEvaluation evaluate_fold(ModelParams& params, const FoldPlan& fold,
                             const std::vector<SubjectRecordSet>& corpus,
                             const EmbedderBackend& backend, std::size_t gamma,
                             std::size_t stride) {
    FoldEvaluation out;
    std::vector<ScoredUnit> subject_units, sequence_units;

    for (const SubjectRecordSet& subj : corpus) {
        if (!fold.test_subjects.count(subj.subject_id)) continue;
        const std::vector<SentenceSequence> seqs = build_sequences(subj, gamma, stride);
        if (seqs.empty())
            throw std::runtime_error("evaluate_fold: test subject " + subj.subject_id +
                                     " has zero sequences");
        std::vector<std::array<double, 2>> probs;
        probs.reserve(seqs.size());
        for (const SentenceSequence& seq : seqs) {
            const Tensor win = window_matrix(seq, backend, gamma);
            // keep the temporal vector for export alongside the prediction
            Graph g;
            const Graph::NodeId x = g.constant(win);
            const Graph::NodeId t = sca_forward(g, x, seq.pad_mask, params, false, nullptr);
            const Graph::NodeId p = mlp_forward(g, t, params, false, nullptr);
            const Tensor& P = g.val(p);
            probs.push_back({P.data[0], P.data[1]});
            out.temporal_vectors.emplace_back(subj.label, g.val(t).data);
            sequence_units.push_back({P.data[0],
                                      P.data[0] > P.data[1] ? ClassLabel::MCI : ClassLabel::NC,
                                      subj.label});
        }
        SubjectScore score = aggregate_subject(probs, subj.label, subj.subject_id);
        out.subject_scores.push_back(score);
        out.majority_scores.push_back(majority_vote(probs, subj.label, subj.subject_id));
        subject_units.push_back({score.mean_p_mci, score.predicted, score.truth});
    }

    if (subject_units.empty()) throw std::runtime_error("evaluate_fold: empty test set");
    out.subject_report = metrics_from_units(subject_units);
    out.sequence_report = metrics_from_units(sequence_units);
    return out;
}

MetricsReport evaluate_fold_level(ModelParams& params, const FoldPlan& fold,
                                  const std::vector<SubjectRecordSet>& corpus,
                                  const EmbedderBackend& backend, std::size_t gamma,
                                  std::size_t stride, EvalLevel level) {
    const FoldEvaluation ev = evaluate_fold(params, fold, corpus, backend, gamma, stride);
    return level == EvalLevel::subject ? ev.subject_report : ev.sequence_report;
}

MetricAggregate aggregate_metric(const std::vector<double>& values) {
    MetricAggregate a;
    if (values.empty()) return a;
    for (const double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

namespace {

KfoldSummary summarize(const std::vector<FoldOutcome>& folds, bool subject_level) {
    auto collect = [&](auto&& get) {
        std::vector<double> vals;
        vals.reserve(folds.size());
        for (const FoldOutcome& f : folds)
            vals.push_back(get(subject_level ? f.eval.subject_report : f.eval.sequence_report));
        return aggregate_metric(vals);
    };
    KfoldSummary s;
    s.accuracy = collect([](const MetricsReport& r) { return r.accuracy; });
    s.auc = collect([](const MetricsReport& r) { return r.auc; });
    for (int c = 0; c < 2; ++c) {
        s.precision[c] = collect([c](const MetricsReport& r) { return r.per_class[c].precision; });
        s.recall[c] = collect([c](const MetricsReport& r) { return r.per_class[c].recall; });
        s.f1[c] = collect([c](const MetricsReport& r) { return r.per_class[c].f1; });
    }
    return s;
}

}  // namespace

KfoldResult kfold_run(const std::vector<SubjectRecordSet>& corpus, int k, std::uint64_t seed,
                      const EmbedderBackend& backend, const ScaConfig& sca_cfg,
                      const MlpConfig& mlp_cfg, const TrainConfig& train_cfg) {
    KfoldResult result;
    const std::vector<FoldPlan> folds = make_folds(corpus, k, seed);
    for (const FoldPlan& fold : folds) {
        FoldOutcome outcome{fold,
                            train_fold(fold, corpus, backend, sca_cfg, mlp_cfg, train_cfg),
                            {}};
        outcome.eval = evaluate_fold(outcome.train.params, fold, corpus, outcome.train.backend,
                                     train_cfg.gamma, train_cfg.stride);
        result.folds.push_back(std::move(outcome));
    }
    result.subject_summary = summarize(result.folds, true);
    result.sequence_summary = summarize(result.folds, false);
    return result;
}

RobustnessResult robustness_run(const std::vector<SubjectRecordSet>& corpus, int k,
                                const std::vector<std::uint64_t>& seeds,
                                const EmbedderBackend& backend, const ScaConfig& sca_cfg,
                                const MlpConfig& mlp_cfg, const TrainConfig& train_cfg) {
    if (seeds.empty()) throw std::runtime_error("robustness_run: need at least one seed");
    RobustnessResult out;
    out.seeds = seeds;
    for (const std::uint64_t s : seeds) {
        TrainConfig cfg = train_cfg;
        cfg.seed = s;
        const KfoldResult r = kfold_run(corpus, k, s, backend, sca_cfg, mlp_cfg, cfg);
        out.config_mean_auc.push_back(r.subject_summary.auc.mean);
    }
    out.overall = aggregate_metric(out.config_mean_auc);
    return out;
}

}  // namespace mciseq
