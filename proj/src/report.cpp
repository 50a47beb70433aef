#include "mciseq/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mciseq {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

json metrics_to_json(const MetricsReport& r) {
    json j;
    j["accuracy"] = r.accuracy;
    j["auc"] = r.auc;
    j["n_units"] = r.n_units;
    for (int c = 0; c < 2; ++c) {
        json m;
        m["precision"] = r.per_class[c].precision;
        m["recall"] = r.per_class[c].recall;
        m["f1"] = r.per_class[c].f1;
        m["zero_division"] = r.per_class[c].zero_division;
        j[label_name(static_cast<ClassLabel>(c))] = std::move(m);
    }
    j["confusion"] = {{r.confusion[0][0], r.confusion[0][1]},
                      {r.confusion[1][0], r.confusion[1][1]}};
    return j;
}

json aggregate_to_json(const MetricAggregate& a) {
    return json{{"mean", a.mean}, {"std", a.stddev}};
}

json summary_to_json(const KfoldSummary& s) {
    json j;
    j["accuracy"] = aggregate_to_json(s.accuracy);
    j["auc"] = aggregate_to_json(s.auc);
    for (int c = 0; c < 2; ++c) {
        json m;
        m["precision"] = aggregate_to_json(s.precision[c]);
        m["recall"] = aggregate_to_json(s.recall[c]);
        m["f1"] = aggregate_to_json(s.f1[c]);
        j[label_name(static_cast<ClassLabel>(c))] = std::move(m);
    }
    return j;
}

}  // namespace

void write_metrics_csv(const std::filesystem::path& path, const std::vector<FoldOutcome>& folds,
                       const KfoldSummary& summary, EvalLevel level) {
    std::ofstream os = open_out(path);
    os << "fold,accuracy,auc,precision_mci,recall_mci,f1_mci,precision_nc,recall_nc,f1_nc\n";
    for (const FoldOutcome& f : folds) {
        const MetricsReport& r =
            level == EvalLevel::subject ? f.eval.subject_report : f.eval.sequence_report;
        os << f.fold.fold_id << ',' << fmt(r.accuracy) << ',' << fmt(r.auc) << ','
           << fmt(r.per_class[0].precision) << ',' << fmt(r.per_class[0].recall) << ','
           << fmt(r.per_class[0].f1) << ',' << fmt(r.per_class[1].precision) << ','
           << fmt(r.per_class[1].recall) << ',' << fmt(r.per_class[1].f1) << '\n';
    }
    os << "mean," << fmt(summary.accuracy.mean) << ',' << fmt(summary.auc.mean) << ','
       << fmt(summary.precision[0].mean) << ',' << fmt(summary.recall[0].mean) << ','
       << fmt(summary.f1[0].mean) << ',' << fmt(summary.precision[1].mean) << ','
       << fmt(summary.recall[1].mean) << ',' << fmt(summary.f1[1].mean) << '\n';
    os << "std," << fmt(summary.accuracy.stddev) << ',' << fmt(summary.auc.stddev) << ','
       << fmt(summary.precision[0].stddev) << ',' << fmt(summary.recall[0].stddev) << ','
       << fmt(summary.f1[0].stddev) << ',' << fmt(summary.precision[1].stddev) << ','
       << fmt(summary.recall[1].stddev) << ',' << fmt(summary.f1[1].stddev) << '\n';
}

void write_confusion_csv(const std::filesystem::path& path, const MetricsReport& report) {
    std::ofstream os = open_out(path);
    os << "truth\\pred,MCI,NC\n";
    os << "MCI," << report.confusion[0][0] << ',' << report.confusion[0][1] << '\n';
    os << "NC," << report.confusion[1][0] << ',' << report.confusion[1][1] << '\n';
}

void write_confusion_pct_csv(const std::filesystem::path& path, const MetricsReport& report) {
    std::ofstream os = open_out(path);
    os << "truth\\pred,MCI,NC\n";
    for (int c = 0; c < 2; ++c) {
        const double row_total =
            static_cast<double>(report.confusion[c][0] + report.confusion[c][1]);
        const double p0 = row_total > 0 ? 100.0 * report.confusion[c][0] / row_total : 0.0;
        const double p1 = row_total > 0 ? 100.0 * report.confusion[c][1] / row_total : 0.0;
        os << label_name(static_cast<ClassLabel>(c)) << ',' << fmt(p0) << ',' << fmt(p1) << '\n';
    }
}

void write_subject_scores_csv(const std::filesystem::path& path,
                              const std::vector<SubjectScore>& scores) {
    std::ofstream os = open_out(path);
    os << "subject_id,mean_p_mci,mean_p_nc,n_sequences,predicted,truth\n";
    for (const SubjectScore& s : scores)
        os << s.subject_id << ',' << fmt(s.mean_p_mci) << ',' << fmt(s.mean_p_nc) << ','
           << s.n_sequences << ',' << label_name(s.predicted) << ',' << label_name(s.truth)
           << '\n';
}

void write_temporal_vectors_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<ClassLabel, std::vector<double>>>& vectors) {
    std::ofstream os = open_out(path);
    os << "label";
    if (!vectors.empty())
        for (std::size_t j = 0; j < vectors.front().second.size(); ++j) os << ",v" << j;
    os << '\n';
    for (const auto& [label, vec] : vectors) {
        os << label_name(label);
        for (const double v : vec) os << ',' << fmt(v);
        os << '\n';
    }
}

void write_kfold_report_json(const std::filesystem::path& path, const KfoldResult& result) {
    json j;
    j["folds"] = json::array();
    for (const FoldOutcome& f : result.folds) {
        json jf;
        jf["fold_id"] = f.fold.fold_id;
        jf["test_subjects"] =
            std::vector<std::string>(f.fold.test_subjects.begin(), f.fold.test_subjects.end());
        jf["subject_level"] = metrics_to_json(f.eval.subject_report);
        jf["sequence_level"] = metrics_to_json(f.eval.sequence_report);
        json psij;
        for (const auto& [id, p] : f.train.psi) psij[id] = p;
        jf["psi"] = std::move(psij);
        j["folds"].push_back(std::move(jf));
    }
    j["subject_summary"] = summary_to_json(result.subject_summary);
    j["sequence_summary"] = summary_to_json(result.sequence_summary);
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

void write_corpus_summary_json(const std::filesystem::path& path, const CorpusSummary& summary) {
    json j;
    for (int c = 0; c < 2; ++c) {
        const ClassSummary& cs = summary.per_class[c];
        j["per_class"][label_name(static_cast<ClassLabel>(c))] = {{"subjects", cs.subjects},
                                                                  {"themes", cs.themes},
                                                                  {"sentences", cs.sentences},
                                                                  {"sequences", cs.sequences}};
    }
    j["subjects"] = json::array();
    for (const SubjectSummary& s : summary.subjects)
        j["subjects"].push_back({{"subject_id", s.subject_id},
                                 {"label", label_name(s.label)},
                                 {"themes", s.themes},
                                 {"sentences", s.sentences},
                                 {"sequences", s.sequences}});
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

void write_robustness_csv(const std::filesystem::path& path, const RobustnessResult& result) {
    std::ofstream os = open_out(path);
    os << "configuration,seed,mean_subject_auc\n";
    for (std::size_t i = 0; i < result.config_mean_auc.size(); ++i)
        os << (i + 1) << ',' << result.seeds[i] << ',' << fmt(result.config_mean_auc[i]) << '\n';
    os << "overall_mean,," << fmt(result.overall.mean) << '\n';
    os << "overall_std,," << fmt(result.overall.stddev) << '\n';
}

void write_robustness_json(const std::filesystem::path& path, const RobustnessResult& result) {
    json j;
    j["seeds"] = result.seeds;
    j["config_mean_auc"] = result.config_mean_auc;
    j["overall"] = aggregate_to_json(result.overall);
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

void write_ablation_csv(const std::filesystem::path& path, const std::string& axis,
                        const std::vector<AblationRun>& runs) {
    std::ofstream os = open_out(path);
    os << "axis:" << axis << '\n';
    os << "setting,diverged";
    std::size_t max_folds = 0;
    for (const AblationRun& r : runs) max_folds = std::max(max_folds, r.fold_subject_auc.size());
    for (std::size_t f = 0; f < max_folds; ++f) os << ",subject_auc_fold" << (f + 1);
    os << ",subject_auc_mean,subject_auc_std";
    for (std::size_t f = 0; f < max_folds; ++f) os << ",sequence_auc_fold" << (f + 1);
    os << ",sequence_auc_mean,sequence_auc_std\n";
    for (const AblationRun& r : runs) {
        os << r.setting << ',' << (r.diverged ? "yes" : "no");
        for (std::size_t f = 0; f < max_folds; ++f)
            os << ',' << (f < r.fold_subject_auc.size() ? fmt(r.fold_subject_auc[f]) : "");
        os << ',' << (r.diverged ? "" : fmt(r.subject_auc.mean)) << ','
           << (r.diverged ? "" : fmt(r.subject_auc.stddev));
        for (std::size_t f = 0; f < max_folds; ++f)
            os << ',' << (f < r.fold_sequence_auc.size() ? fmt(r.fold_sequence_auc[f]) : "");
        os << ',' << (r.diverged ? "" : fmt(r.sequence_auc.mean)) << ','
           << (r.diverged ? "" : fmt(r.sequence_auc.stddev)) << '\n';
    }
}

void write_ablation_json(const std::filesystem::path& path, const std::string& axis,
                         const std::vector<AblationRun>& runs) {
    json j;
    j["axis"] = axis;
    j["runs"] = json::array();
    for (const AblationRun& r : runs) {
        json jr;
        jr["setting"] = r.setting;
        jr["diverged"] = r.diverged;
        jr["fold_subject_auc"] = r.fold_subject_auc;
        jr["fold_sequence_auc"] = r.fold_sequence_auc;
        jr["subject_auc"] = aggregate_to_json(r.subject_auc);
        jr["sequence_auc"] = aggregate_to_json(r.sequence_auc);
        j["runs"].push_back(std::move(jr));
    }
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

}  // namespace mciseq
