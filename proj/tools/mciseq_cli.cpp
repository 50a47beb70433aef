#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mciseq/corpus.hpp"
#include "mciseq/embedder.hpp"
#include "mciseq/evaluation.hpp"
#include "mciseq/infoloss.hpp"
#include "mciseq/kernels.hpp"
#include "mciseq/manifest.hpp"
#include "mciseq/model.hpp"
#include "mciseq/report.hpp"
#include "mciseq/synth.hpp"
#include "mciseq/training.hpp"

namespace fs = std::filesystem;
using namespace mciseq;

namespace {

// Flags shared by the train/eval/kfold/ablate commands. Defaults follow the
// reference configuration: gamma 200, stride 100, epsilon 0.2, 8 heads,
// FFN 128, dropout 0.3, 100 epochs, warm-up 0.1, lr 1e-4, batch 32, 5 folds.
struct PipelineOpts {
    std::string corpus_path;
    std::string embedder = "hash";
    std::string embeddings_path;
    std::size_t dim = 768;
    std::string duration = "raw";
    std::size_t gamma = 200;
    std::size_t stride = 100;
    double epsilon = 0.2;
    std::string loss = "infoloss";
    std::string psi_formula = "minmax";
    std::size_t heads = 8;
    std::size_t ffn = 128;
    double dropout = 0.3;
    std::size_t hidden = 384;
    std::size_t epochs = 100;
    double warmup = 0.1;
    double lr = 1e-4;
    std::size_t batch = 32;
    int k = 5;
    std::uint64_t seed = 0;
    std::string out = "run";
};

void add_pipeline_flags(CLI::App* cmd, PipelineOpts& o, bool needs_corpus = true) {
    auto* c = cmd->add_option("--corpus", o.corpus_path, "Transcript JSONL file");
    if (needs_corpus) c->required();
    cmd->add_option("--embedder", o.embedder, "Sentence embedder backend")
        ->check(CLI::IsMember({"hash", "precomputed"}));
    cmd->add_option("--embeddings", o.embeddings_path, "Precomputed embedding JSONL");
    cmd->add_option("--dim", o.dim, "Sentence embedding dimension D (model dim is D+1)");
    cmd->add_option("--duration", o.duration, "Duration transform")
        ->check(CLI::IsMember({"raw", "zscore"}));
    cmd->add_option("--gamma", o.gamma, "Sentences per sequence window");
    cmd->add_option("--stride", o.stride, "Window stride");
    cmd->add_option("--epsilon", o.epsilon, "Label smoothing factor");
    cmd->add_option("--loss", o.loss, "Training loss")
        ->check(CLI::IsMember({"infoloss", "ce", "fixed"}));
    cmd->add_option("--psi-formula", o.psi_formula, "Uncertainty mapping variant")
        ->check(CLI::IsMember({"minmax", "printed"}));
    cmd->add_option("--heads", o.heads, "Attention heads");
    cmd->add_option("--ffn", o.ffn, "Encoder feed-forward size");
    cmd->add_option("--dropout", o.dropout, "Dropout rate");
    cmd->add_option("--hidden", o.hidden, "MLP hidden size");
    cmd->add_option("--epochs", o.epochs, "Training epochs");
    cmd->add_option("--warmup", o.warmup, "Warm-up fraction of epochs");
    cmd->add_option("--lr", o.lr, "Adam learning rate");
    cmd->add_option("--batch", o.batch, "Batch size");
    cmd->add_option("--k", o.k, "Number of folds");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->set_config("--config");
}

PipelineConfig to_pipeline_config(const PipelineOpts& o) {
    PipelineConfig cfg;
    cfg.sca.model_dim = o.dim + 1;
    cfg.sca.heads = o.heads;
    cfg.sca.ffn_dim = o.ffn;
    cfg.sca.dropout = o.dropout;
    cfg.sca.gamma = o.gamma;
    cfg.mlp.hidden = o.hidden;
    cfg.train.epochs = o.epochs;
    cfg.train.warmup_fraction = o.warmup;
    cfg.train.batch_size = o.batch;
    cfg.train.seed = o.seed;
    cfg.train.gamma = o.gamma;
    cfg.train.stride = o.stride;
    cfg.train.loss.epsilon = o.epsilon;
    cfg.train.loss.kind = o.loss == "ce"      ? LossKind::cross_entropy
                          : o.loss == "fixed" ? LossKind::fixed_smoothing
                                              : LossKind::infoloss_kld;
    cfg.train.loss.psi_formula =
        o.psi_formula == "printed" ? PsiFormula::printed : PsiFormula::minmax;
    cfg.train.adam.lr = o.lr;
    cfg.backend.kind = o.embedder == "precomputed" ? EmbedderBackend::Kind::precomputed
                                                   : EmbedderBackend::Kind::hash;
    cfg.backend.dim = o.dim;
    cfg.backend.duration_transform =
        o.duration == "zscore" ? DurationTransform::zscore : DurationTransform::raw_seconds;
    return cfg;
}

void snapshot_config(RunManifest& m, const PipelineOpts& o) {
    m.config["corpus"] = o.corpus_path;
    m.config["embedder"] = o.embedder;
    m.config["embeddings"] = o.embeddings_path;
    m.config["dim"] = std::to_string(o.dim);
    m.config["duration"] = o.duration;
    m.config["gamma"] = std::to_string(o.gamma);
    m.config["stride"] = std::to_string(o.stride);
    m.config["epsilon"] = std::to_string(o.epsilon);
    m.config["loss"] = o.loss;
    m.config["psi_formula"] = o.psi_formula;
    m.config["heads"] = std::to_string(o.heads);
    m.config["ffn"] = std::to_string(o.ffn);
    m.config["dropout"] = std::to_string(o.dropout);
    m.config["hidden"] = std::to_string(o.hidden);
    m.config["epochs"] = std::to_string(o.epochs);
    m.config["warmup"] = std::to_string(o.warmup);
    m.config["lr"] = std::to_string(o.lr);
    m.config["batch"] = std::to_string(o.batch);
    m.config["k"] = std::to_string(o.k);
    m.config["seed"] = std::to_string(o.seed);
    m.config["out"] = o.out;
    m.seed = o.seed;
}

// Loads precomputed embeddings when requested; the table must outlive the
// returned backend.
std::unique_ptr<PrecomputedEmbeddings> attach_embeddings(
    PipelineConfig& cfg, const PipelineOpts& o,
    const std::vector<SubjectRecordSet>& corpus) {
    if (cfg.backend.kind != EmbedderBackend::Kind::precomputed) return nullptr;
    if (o.embeddings_path.empty())
        throw std::runtime_error("--embedder precomputed requires --embeddings");
    auto table = std::make_unique<PrecomputedEmbeddings>(
        PrecomputedEmbeddings::load(o.embeddings_path));
    table->verify_covers(corpus);
    cfg.backend.dim = table->dim();
    cfg.sca.model_dim = table->dim() + 1;
    cfg.backend.precomputed = table.get();
    return table;
}

void write_fold_artifacts(const fs::path& dir, const FoldOutcome& f, const PipelineOpts& o,
                          RunManifest& manifest) {
    const std::string tag = "_fold" + std::to_string(f.fold.fold_id);
    const fs::path ckpt = dir / ("checkpoint" + tag + ".bin");
    f.train.params.save(ckpt);
    manifest.add_artifact(ckpt);
    write_loss_trace_csv(dir / ("loss_trace" + tag + ".csv"), f.train.trace);
    write_psi_table_csv(dir / ("psi" + tag + ".csv"), f.train.freq, o.epsilon,
                        o.psi_formula == "printed" ? PsiFormula::printed : PsiFormula::minmax);
    write_confusion_csv(dir / ("confusion_subject" + tag + ".csv"), f.eval.subject_report);
    write_confusion_pct_csv(dir / ("confusion_subject" + tag + "_pct.csv"),
                            f.eval.subject_report);
    write_confusion_csv(dir / ("confusion_sequence" + tag + ".csv"), f.eval.sequence_report);
    write_confusion_pct_csv(dir / ("confusion_sequence" + tag + "_pct.csv"),
                            f.eval.sequence_report);
    write_subject_scores_csv(dir / ("subject_scores" + tag + ".csv"), f.eval.subject_scores);
    write_temporal_vectors_csv(dir / ("temporal_vectors" + tag + ".csv"),
                               f.eval.temporal_vectors);
}

int cmd_synth(const SynthConfig& sc, const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::vector<SubjectRecordSet> corpus = gen_corpus(sc);
    const fs::path corpus_path = dir / "corpus.jsonl";
    write_corpus_jsonl(corpus_path, corpus);
    write_corpus_summary_json(dir / "corpus_summary.json", summarize_corpus(corpus, 200, 100));

    RunManifest m;
    m.command = "synth";
    m.seed = sc.seed;
    m.config["n_subjects_per_class"] = std::to_string(sc.n_subjects_per_class);
    m.config["themes_min"] = std::to_string(sc.themes_per_subject.lo);
    m.config["themes_max"] = std::to_string(sc.themes_per_subject.hi);
    m.config["sentences_min"] = std::to_string(sc.sentences_per_theme.lo);
    m.config["sentences_max"] = std::to_string(sc.sentences_per_theme.hi);
    m.config["vocab"] = std::to_string(sc.vocab_size);
    m.config["signal"] = std::to_string(sc.signal_strength);
    m.config["duration_mean"] = std::to_string(sc.duration_mean);
    m.config["duration_std"] = std::to_string(sc.duration_std);
    m.config["duration_shift"] = std::to_string(sc.duration_class_shift);
    m.config["seed"] = std::to_string(sc.seed);
    m.add_artifact(corpus_path);
    m.write(dir / "manifest.json");
    std::printf("wrote %s (%zu subjects)\n", corpus_path.string().c_str(), corpus.size());
    return 0;
}

int cmd_embed(const PipelineOpts& o) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const std::vector<SubjectRecordSet> corpus = load_corpus(o.corpus_path);
    PipelineConfig cfg = to_pipeline_config(o);
    const auto table = attach_embeddings(cfg, o, corpus);
    const fs::path out_path = dir / "embeddings.jsonl";
    write_embeddings_jsonl(out_path, corpus, cfg.backend);

    RunManifest m;
    m.command = "embed";
    snapshot_config(m, o);
    m.add_input(o.corpus_path);
    if (!o.embeddings_path.empty()) m.add_input(o.embeddings_path);
    m.add_artifact(out_path);
    m.write(dir / "manifest.json");
    std::printf("wrote %s\n", out_path.string().c_str());
    return 0;
}

int cmd_train(const PipelineOpts& o, const std::string& folds_path, int fold_id) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const std::vector<SubjectRecordSet> corpus = load_corpus(o.corpus_path);
    PipelineConfig cfg = to_pipeline_config(o);
    const auto table = attach_embeddings(cfg, o, corpus);

    const std::vector<FoldPlan> folds = load_folds(folds_path);
    const FoldPlan* fold = nullptr;
    for (const FoldPlan& f : folds)
        if (f.fold_id == fold_id) fold = &f;
    if (fold == nullptr)
        throw std::runtime_error("fold " + std::to_string(fold_id) + " not in " + folds_path);

    TrainResult result = train_fold(*fold, corpus, cfg.backend, cfg.sca, cfg.mlp, cfg.train);
    cfg.backend = result.backend;

    const fs::path ckpt = dir / "checkpoint.bin";
    result.params.save(ckpt);
    save_pipeline_config(dir / "model_config.json", cfg);
    write_loss_trace_csv(dir / "loss_trace.csv", result.trace);
    write_psi_table_csv(dir / "psi.csv", result.freq, o.epsilon, cfg.train.loss.psi_formula);

    RunManifest m;
    m.command = "train";
    snapshot_config(m, o);
    m.config["folds"] = folds_path;
    m.config["fold_id"] = std::to_string(fold_id);
    m.add_input(o.corpus_path);
    m.add_input(folds_path);
    if (!o.embeddings_path.empty()) m.add_input(o.embeddings_path);
    m.add_artifact(ckpt);
    m.add_artifact(dir / "model_config.json");
    m.add_artifact(dir / "loss_trace.csv");
    m.add_artifact(dir / "psi.csv");
    m.write(dir / "manifest.json");
    std::printf("trained fold %d: final mean loss %.6f\n", fold_id,
                result.trace.back().mean_loss);
    return 0;
}

int cmd_eval(const PipelineOpts& o, const std::string& checkpoint_path,
             std::string model_config_path, const std::string& folds_path, int fold_id,
             const std::string& level) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    if (model_config_path.empty())
        model_config_path = (fs::path(checkpoint_path).parent_path() / "model_config.json").string();

    const std::vector<SubjectRecordSet> corpus = load_corpus(o.corpus_path);
    PipelineConfig cfg = load_pipeline_config(model_config_path);
    std::unique_ptr<PrecomputedEmbeddings> table;
    if (cfg.backend.kind == EmbedderBackend::Kind::precomputed) {
        if (o.embeddings_path.empty())
            throw std::runtime_error("checkpoint uses precomputed embeddings; pass --embeddings");
        table = std::make_unique<PrecomputedEmbeddings>(
            PrecomputedEmbeddings::load(o.embeddings_path));
        cfg.backend.precomputed = table.get();
    }

    ModelParams params = ModelParams::init(cfg.sca, cfg.mlp, 0);
    params.load(checkpoint_path);

    const std::vector<FoldPlan> folds = load_folds(folds_path);
    const FoldPlan* fold = nullptr;
    for (const FoldPlan& f : folds)
        if (f.fold_id == fold_id) fold = &f;
    if (fold == nullptr)
        throw std::runtime_error("fold " + std::to_string(fold_id) + " not in " + folds_path);

    const FoldEvaluation ev =
        evaluate_fold(params, *fold, corpus, cfg.backend, cfg.train.gamma, cfg.train.stride);

    RunManifest m;
    m.command = "eval";
    snapshot_config(m, o);
    m.config["checkpoint"] = checkpoint_path;
    m.config["folds"] = folds_path;
    m.config["fold_id"] = std::to_string(fold_id);
    m.config["level"] = level;
    m.add_input(o.corpus_path);
    m.add_input(checkpoint_path);
    m.add_input(folds_path);

    auto emit = [&](const MetricsReport& r, const std::string& tag) {
        write_confusion_csv(dir / ("confusion_" + tag + ".csv"), r);
        write_confusion_pct_csv(dir / ("confusion_" + tag + "_pct.csv"), r);
        std::printf("%s level: accuracy %.4f auc %.4f over %zu units\n", tag.c_str(), r.accuracy,
                    r.auc, r.n_units);
    };
    if (level == "subject" || level == "both") emit(ev.subject_report, "subject");
    if (level == "sequence" || level == "both") emit(ev.sequence_report, "sequence");
    write_subject_scores_csv(dir / "subject_scores.csv", ev.subject_scores);
    write_temporal_vectors_csv(dir / "temporal_vectors.csv", ev.temporal_vectors);
    m.add_artifact(dir / "subject_scores.csv");
    m.write(dir / "manifest.json");
    return 0;
}

int cmd_kfold(const PipelineOpts& o) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const std::vector<SubjectRecordSet> corpus = load_corpus(o.corpus_path);
    PipelineConfig cfg = to_pipeline_config(o);
    const auto table = attach_embeddings(cfg, o, corpus);

    const KfoldResult result =
        kfold_run(corpus, o.k, o.seed, cfg.backend, cfg.sca, cfg.mlp, cfg.train);

    RunManifest m;
    m.command = "kfold";
    snapshot_config(m, o);
    m.add_input(o.corpus_path);
    if (!o.embeddings_path.empty()) m.add_input(o.embeddings_path);

    std::vector<FoldPlan> folds;
    for (const FoldOutcome& f : result.folds) folds.push_back(f.fold);
    save_folds(dir / "folds.json", folds);
    m.add_artifact(dir / "folds.json");
    write_corpus_summary_json(dir / "corpus_summary.json",
                              summarize_corpus(corpus, o.gamma, o.stride));
    for (const FoldOutcome& f : result.folds) write_fold_artifacts(dir, f, o, m);
    save_pipeline_config(dir / "model_config.json", cfg);
    write_metrics_csv(dir / "subject_metrics.csv", result.folds, result.subject_summary,
                      EvalLevel::subject);
    write_metrics_csv(dir / "sequence_metrics.csv", result.folds, result.sequence_summary,
                      EvalLevel::sequence);
    write_kfold_report_json(dir / "report.json", result);
    m.add_artifact(dir / "subject_metrics.csv");
    m.add_artifact(dir / "sequence_metrics.csv");
    m.add_artifact(dir / "report.json");
    m.write(dir / "manifest.json");

    std::printf("subject-level AUC %.4f +/- %.4f, accuracy %.4f +/- %.4f over %d folds\n",
                result.subject_summary.auc.mean, result.subject_summary.auc.stddev,
                result.subject_summary.accuracy.mean, result.subject_summary.accuracy.stddev,
                o.k);
    return 0;
}

int cmd_ablate(const PipelineOpts& o, const std::string& axis, const std::string& values_csv) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const std::vector<SubjectRecordSet> corpus = load_corpus(o.corpus_path);
    PipelineConfig base = to_pipeline_config(o);
    const auto table = attach_embeddings(base, o, corpus);

    struct Setting {
        std::string name;
        PipelineConfig cfg;
    };
    std::vector<Setting> settings;
    auto split_values = [&]() {
        std::vector<std::string> vals;
        std::string cur;
        for (const char c : values_csv) {
            if (c == ',') {
                if (!cur.empty()) vals.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) vals.push_back(cur);
        return vals;
    };

    if (axis == "loss") {
        for (const char* name : {"infoloss", "ce"}) {
            Setting s{name, base};
            s.cfg.train.loss.kind =
                std::string(name) == "ce" ? LossKind::cross_entropy : LossKind::infoloss_kld;
            settings.push_back(std::move(s));
        }
    } else if (axis == "gamma") {
        for (const std::string& v : split_values()) {
            Setting s{"gamma=" + v, base};
            const std::size_t g = std::stoul(v);
            s.cfg.train.gamma = g;
            s.cfg.sca.gamma = g;
            s.cfg.train.stride = std::max<std::size_t>(1, g / 2);
            settings.push_back(std::move(s));
        }
    } else if (axis == "ffn") {
        for (const std::string& v : split_values()) {
            Setting s{"ffn=" + v, base};
            s.cfg.sca.ffn_dim = std::stoul(v);
            settings.push_back(std::move(s));
        }
    } else {
        throw std::runtime_error("unknown ablation axis: " + axis);
    }

    std::vector<AblationRun> runs;
    for (const Setting& s : settings) {
        AblationRun run;
        run.setting = s.name;
        try {
            const KfoldResult r =
                kfold_run(corpus, o.k, o.seed, s.cfg.backend, s.cfg.sca, s.cfg.mlp, s.cfg.train);
            for (const FoldOutcome& f : r.folds) {
                run.fold_subject_auc.push_back(f.eval.subject_report.auc);
                run.fold_sequence_auc.push_back(f.eval.sequence_report.auc);
            }
            run.subject_auc = r.subject_summary.auc;
            run.sequence_auc = r.sequence_summary.auc;
            std::printf("%s: subject AUC %.4f +/- %.4f\n", s.name.c_str(), run.subject_auc.mean,
                        run.subject_auc.stddev);
        } catch (const DivergedError& e) {
            run.diverged = true;
            std::printf("%s: diverged (%s)\n", s.name.c_str(), e.what());
        }
        runs.push_back(std::move(run));
    }

    write_ablation_csv(dir / ("ablation_" + axis + ".csv"), axis, runs);
    write_ablation_json(dir / ("ablation_" + axis + ".json"), axis, runs);

    RunManifest m;
    m.command = "ablate";
    snapshot_config(m, o);
    m.config["axis"] = axis;
    m.config["values"] = values_csv;
    m.add_input(o.corpus_path);
    m.add_artifact(dir / ("ablation_" + axis + ".csv"));
    m.add_artifact(dir / ("ablation_" + axis + ".json"));
    m.write(dir / "manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transcript-based MCI/NC sequence classification pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    bool serial = false;
    app.add_flag("--serial", serial, "Use the serial reference kernels");

    // synth
    SynthConfig sc;
    std::string synth_out = "run";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic transcript corpus");
    synth->add_option("--subjects-per-class", sc.n_subjects_per_class, "Subjects per class");
    synth->add_option("--themes-min", sc.themes_per_subject.lo, "Min themes per subject");
    synth->add_option("--themes-max", sc.themes_per_subject.hi, "Max themes per subject");
    synth->add_option("--sentences-min", sc.sentences_per_theme.lo, "Min sentences per theme");
    synth->add_option("--sentences-max", sc.sentences_per_theme.hi, "Max sentences per theme");
    synth->add_option("--vocab", sc.vocab_size, "Vocabulary size");
    synth->add_option("--signal", sc.signal_strength, "Class signal strength in [0,1]");
    synth->add_option("--duration-mean", sc.duration_mean, "Mean sentence duration (s)");
    synth->add_option("--duration-std", sc.duration_std, "Duration stddev (s)");
    synth->add_option("--duration-shift", sc.duration_class_shift,
                      "Class-conditional duration mean shift");
    synth->add_option("--seed", sc.seed, "Seed");
    synth->add_option("--out", synth_out, "Output directory");
    synth->set_config("--config");

    PipelineOpts embed_opts;
    auto* embed = app.add_subcommand("embed", "Write sentence embeddings for a corpus");
    add_pipeline_flags(embed, embed_opts);

    PipelineOpts train_opts;
    std::string train_folds;
    int train_fold_id = 1;
    auto* train = app.add_subcommand("train", "Train one fold");
    add_pipeline_flags(train, train_opts);
    train->add_option("--folds", train_folds, "Fold plan JSON")->required();
    train->add_option("--fold-id", train_fold_id, "Fold to train");

    PipelineOpts eval_opts;
    std::string eval_ckpt, eval_model_config, eval_folds, eval_level = "both";
    int eval_fold_id = 1;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a fold's test set");
    add_pipeline_flags(eval, eval_opts);
    eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
    eval->add_option("--model-config", eval_model_config,
                     "Pipeline config JSON (default: sibling model_config.json)");
    eval->add_option("--folds", eval_folds, "Fold plan JSON")->required();
    eval->add_option("--fold-id", eval_fold_id, "Fold to evaluate");
    eval->add_option("--level", eval_level, "Evaluation level")
        ->check(CLI::IsMember({"subject", "sequence", "both"}));

    PipelineOpts kfold_opts;
    auto* kfold = app.add_subcommand("kfold", "Full K-fold train/evaluate run");
    add_pipeline_flags(kfold, kfold_opts);

    PipelineOpts ablate_opts;
    std::string ablate_axis, ablate_values = "100,200";
    auto* ablate = app.add_subcommand("ablate", "Compare settings along one axis");
    add_pipeline_flags(ablate, ablate_opts);
    ablate->add_option("--axis", ablate_axis, "Ablation axis")
        ->required()
        ->check(CLI::IsMember({"loss", "gamma", "ffn"}));
    ablate->add_option("--values", ablate_values, "Comma-separated values for gamma/ffn axes");

    CLI11_PARSE(app, argc, argv);
    kernels::set_parallel(!serial);

    try {
        if (synth->parsed()) return cmd_synth(sc, synth_out);
        if (embed->parsed()) return cmd_embed(embed_opts);
        if (train->parsed()) return cmd_train(train_opts, train_folds, train_fold_id);
        if (eval->parsed())
            return cmd_eval(eval_opts, eval_ckpt, eval_model_config, eval_folds, eval_fold_id,
                            eval_level);
        if (kfold->parsed()) return cmd_kfold(kfold_opts);
        if (ablate->parsed()) return cmd_ablate(ablate_opts, ablate_axis, ablate_values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
