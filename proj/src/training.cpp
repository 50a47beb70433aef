#include "mciseq/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace mciseq {

double lr_schedule(std::size_t epoch, const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw std::runtime_error("lr_schedule: epochs must be >= 1");
    if (epoch >= cfg.epochs) throw std::runtime_error("lr_schedule: epoch out of range");
    if (cfg.warmup_fraction < 0.0 || cfg.warmup_fraction >= 1.0)
        throw std::runtime_error("lr_schedule: warmup_fraction must be in [0, 1)");
    const auto warmup_epochs = static_cast<std::size_t>(
        std::ceil(cfg.warmup_fraction * static_cast<double>(cfg.epochs)));
    if (warmup_epochs == 0 || epoch >= warmup_epochs) return 1.0;
    return static_cast<double>(epoch + 1) / static_cast<double>(warmup_epochs);
}

TrainResult train_fold(const FoldPlan& fold, const std::vector<SubjectRecordSet>& corpus,
                       const EmbedderBackend& backend_in, const ScaConfig& sca_cfg,
                       const MlpConfig& mlp_cfg, const TrainConfig& cfg, AccessLog* log) {
    if (fold.train_subjects.empty()) throw std::runtime_error("train_fold: empty training set");

    EmbedderBackend backend = backend_in;
    if (backend.duration_transform == DurationTransform::zscore)
        backend.duration_stats = compute_duration_stats(corpus, fold.train_subjects, log);

    FrequencySet freq =
        compute_frequency_set(corpus, fold.train_subjects, cfg.gamma, cfg.stride, log);

    std::map<std::string, double> psi;
    for (const auto& [id, count] : freq.counts)
        psi[id] = compute_psi(count, freq, cfg.loss.epsilon, cfg.loss.psi_formula);

    // training examples: every window of every training subject
    struct Example {
        SentenceSequence seq;
        ClassLabel label;
    };
    std::vector<Example> examples;
    std::size_t class_count[2] = {0, 0};
    for (const SubjectRecordSet& subj : corpus) {
        if (!fold.train_subjects.count(subj.subject_id)) continue;
        if (log) log->note(subj.subject_id);
        class_count[static_cast<int>(subj.label)] += 1;
        for (SentenceSequence& s : build_sequences(subj, cfg.gamma, cfg.stride))
            examples.push_back({std::move(s), subj.label});
    }
    if (class_count[0] == 0 || class_count[1] == 0)
        throw std::runtime_error("train_fold: a class is missing from the training set");

    const std::uint64_t fold_seed =
        Rng::stream(cfg.seed, "fold", static_cast<std::uint64_t>(fold.fold_id)).next_u64();

    TrainResult result{ModelParams::init(sca_cfg, mlp_cfg, fold_seed), {}, std::move(freq),
                       std::move(psi), backend};
    ModelParams& params = result.params;

    Adam sca_opt(params.sca, cfg.adam);
    Adam mlp_opt(params.mlp, cfg.adam);
    Rng dropout_rng = Rng::stream(fold_seed, "dropout");

    std::vector<std::size_t> order(examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double mult = lr_schedule(epoch, cfg);
        Rng shuffle_rng = Rng::stream(fold_seed, "shuffle", epoch);
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, order.size());
            params.zero_grads();
            for (std::size_t bi = begin; bi < end; ++bi) {
                const Example& ex = examples[order[bi]];
                double loss_value = 0.0;
                try {
                    Graph g;
                    const Graph::NodeId x =
                        g.constant(window_matrix(ex.seq, backend, cfg.gamma));
                    const Graph::NodeId t =
                        sca_forward(g, x, ex.seq.pad_mask, params, true, &dropout_rng);
                    const Graph::NodeId probs = mlp_forward(g, t, params, true, &dropout_rng);
                    Graph::NodeId loss;
                    switch (cfg.loss.kind) {
                        case LossKind::infoloss_kld:
                            loss = g.kld_to_target(
                                probs,
                                smooth_label(ex.label, result.psi.at(ex.seq.subject_id)).dist);
                            break;
                        case LossKind::fixed_smoothing:
                            loss = g.kld_to_target(probs,
                                                   smooth_label(ex.label, cfg.loss.epsilon).dist);
                            break;
                        case LossKind::cross_entropy:
                            loss = g.nll(probs, static_cast<int>(ex.label));
                            break;
                        default:
                            throw std::runtime_error("train_fold: unknown loss kind");
                    }
                    loss_value = g.val(loss).data[0];
                    g.backward(loss);
                } catch (const NonFiniteError& e) {
                    throw DivergedError("training diverged at fold " +
                                        std::to_string(fold.fold_id) + " epoch " +
                                        std::to_string(epoch) + ": " + e.what());
                }
                if (!std::isfinite(loss_value))
                    throw DivergedError("training diverged at fold " +
                                        std::to_string(fold.fold_id) + " epoch " +
                                        std::to_string(epoch) + ": non-finite loss");
                loss_sum += loss_value;
            }
            const double grad_scale = 1.0 / static_cast<double>(end - begin);
            sca_opt.step(params.sca, mult, grad_scale);
            mlp_opt.step(params.mlp, mult, grad_scale);
        }
        result.trace.push_back(
            {epoch, loss_sum / static_cast<double>(std::max<std::size_t>(1, order.size())), mult});
    }
    return result;
}

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<EpochStat>& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "epoch,mean_loss,lr_multiplier\n";
    char buf[96];
    for (const EpochStat& e : trace) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", e.epoch, e.mean_loss, e.lr_multiplier);
        os << buf << '\n';
    }
}

namespace {

const char* loss_kind_name(LossKind k) {
    switch (k) {
        case LossKind::infoloss_kld: return "infoloss";
        case LossKind::cross_entropy: return "ce";
        case LossKind::fixed_smoothing: return "fixed";
    }
    return "infoloss";
}

LossKind parse_loss_kind(const std::string& s) {
    if (s == "infoloss") return LossKind::infoloss_kld;
    if (s == "ce") return LossKind::cross_entropy;
    if (s == "fixed") return LossKind::fixed_smoothing;
    throw std::runtime_error("unknown loss kind: " + s);
}

}  // namespace

void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& cfg) {
    nlohmann::json j;
    j["sca"] = {{"model_dim", cfg.sca.model_dim}, {"heads", cfg.sca.heads},
                {"ffn_dim", cfg.sca.ffn_dim},     {"dropout", cfg.sca.dropout},
                {"layers", cfg.sca.layers},       {"gamma", cfg.sca.gamma}};
    j["mlp"] = {{"hidden", cfg.mlp.hidden}, {"out", cfg.mlp.out}};
    j["train"] = {{"epochs", cfg.train.epochs},
                  {"warmup_fraction", cfg.train.warmup_fraction},
                  {"batch_size", cfg.train.batch_size},
                  {"seed", cfg.train.seed},
                  {"gamma", cfg.train.gamma},
                  {"stride", cfg.train.stride},
                  {"loss", loss_kind_name(cfg.train.loss.kind)},
                  {"epsilon", cfg.train.loss.epsilon},
                  {"psi_formula",
                   cfg.train.loss.psi_formula == PsiFormula::minmax ? "minmax" : "printed"},
                  {"lr", cfg.train.adam.lr},
                  {"beta1", cfg.train.adam.beta1},
                  {"beta2", cfg.train.adam.beta2},
                  {"decay", cfg.train.adam.decay}};
    j["embed"] = {{"kind", cfg.backend.kind == EmbedderBackend::Kind::hash ? "hash" : "precomputed"},
                  {"dim", cfg.backend.dim},
                  {"duration_transform",
                   cfg.backend.duration_transform == DurationTransform::raw_seconds ? "raw"
                                                                                    : "zscore"},
                  {"duration_mean", cfg.backend.duration_stats.mean},
                  {"duration_stddev", cfg.backend.duration_stats.stddev}};
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << j.dump(2) << '\n';
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open pipeline config: " + path.string());
    const nlohmann::json j = nlohmann::json::parse(is);
    PipelineConfig cfg;
    const auto& s = j.at("sca");
    cfg.sca.model_dim = s.at("model_dim").get<std::size_t>();
    cfg.sca.heads = s.at("heads").get<std::size_t>();
    cfg.sca.ffn_dim = s.at("ffn_dim").get<std::size_t>();
    cfg.sca.dropout = s.at("dropout").get<double>();
    cfg.sca.layers = s.at("layers").get<std::size_t>();
    cfg.sca.gamma = s.at("gamma").get<std::size_t>();
    const auto& m = j.at("mlp");
    cfg.mlp.hidden = m.at("hidden").get<std::size_t>();
    cfg.mlp.out = m.at("out").get<std::size_t>();
    const auto& t = j.at("train");
    cfg.train.epochs = t.at("epochs").get<std::size_t>();
    cfg.train.warmup_fraction = t.at("warmup_fraction").get<double>();
    cfg.train.batch_size = t.at("batch_size").get<std::size_t>();
    cfg.train.seed = t.at("seed").get<std::uint64_t>();
    cfg.train.gamma = t.at("gamma").get<std::size_t>();
    cfg.train.stride = t.at("stride").get<std::size_t>();
    cfg.train.loss.kind = parse_loss_kind(t.at("loss").get<std::string>());
    cfg.train.loss.epsilon = t.at("epsilon").get<double>();
    cfg.train.loss.psi_formula = t.at("psi_formula").get<std::string>() == "printed"
                                     ? PsiFormula::printed
                                     : PsiFormula::minmax;
    cfg.train.adam.lr = t.at("lr").get<double>();
    cfg.train.adam.beta1 = t.at("beta1").get<double>();
    cfg.train.adam.beta2 = t.at("beta2").get<double>();
    cfg.train.adam.decay = t.at("decay").get<double>();
    const auto& e = j.at("embed");
    cfg.backend.kind = e.at("kind").get<std::string>() == "precomputed"
                           ? EmbedderBackend::Kind::precomputed
                           : EmbedderBackend::Kind::hash;
    cfg.backend.dim = e.at("dim").get<std::size_t>();
    cfg.backend.duration_transform = e.at("duration_transform").get<std::string>() == "zscore"
                                         ? DurationTransform::zscore
                                         : DurationTransform::raw_seconds;
    cfg.backend.duration_stats.mean = e.at("duration_mean").get<double>();
    cfg.backend.duration_stats.stddev = e.at("duration_stddev").get<double>();
    return cfg;
}

}  // namespace mciseq
