// Acceptance suite: runs every criterion at its stated tolerance and prints
// one [PASS]/[FAIL] line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mciseq/corpus.hpp"
#include "mciseq/embedder.hpp"
#include "mciseq/evaluation.hpp"
#include "mciseq/infoloss.hpp"
#include "mciseq/model.hpp"
#include "mciseq/synth.hpp"
#include "mciseq/training.hpp"

namespace fs = std::filesystem;
using namespace mciseq;

namespace {

Tensor random_window(std::size_t rows, std::size_t cols, std::size_t real_rows, Rng& rng) {
    Tensor w = Tensor::zeros(rows, cols);
    for (std::size_t i = 0; i < real_rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) w(i, j) = rng.uniform(-1, 1);
    return w;
}

std::vector<bool> mask_of(std::size_t rows, std::size_t real_rows) {
    std::vector<bool> m(rows, false);
    for (std::size_t i = 0; i < real_rows; ++i) m[i] = true;
    return m;
}

// ---- criterion 1: InfoLoss algebra -----------------------------------------

bool criterion_infoloss_algebra(std::string& detail) {
    FrequencySet sf;
    sf.counts = {{"a", 10}, {"b", 55}, {"c", 100}};
    sf.min_count = 10;
    sf.max_count = 100;
    const double at_min = compute_psi(10, sf, 0.2);
    const double at_mid = compute_psi(55, sf, 0.2);
    const double at_max = compute_psi(100, sf, 0.2);
    bool ok = std::abs(at_min - 0.1) <= 1e-15 && std::abs(at_mid - 0.2) <= 1e-15 &&
              std::abs(at_max - 0.3) <= 1e-15;

    const SmoothLabel mci = smooth_label(ClassLabel::MCI, 0.1);
    const SmoothLabel nc = smooth_label(ClassLabel::NC, 0.3);
    ok = ok && mci.dist[0] == 0.9 && mci.dist[1] == 0.1;
    ok = ok && nc.dist[0] == 0.3 && nc.dist[1] == 0.7;

    std::ostringstream os;
    os << "psi(min,mid,max) = (" << at_min << ", " << at_mid << ", " << at_max
       << "), MCI label [" << mci.dist[0] << ", " << mci.dist[1] << "], NC label ["
       << nc.dist[0] << ", " << nc.dist[1] << "]";
    detail = os.str();
    return ok;
}

// ---- criterion 2: entropy oracle --------------------------------------------

bool criterion_entropy_oracle(std::string& detail) {
    bool ok = entropy_initial(10) == 5.0 && entropy_initial(100) == 50.0;
    for (std::size_t k = 1; ok && k <= 10000; ++k) {
        ok = ok && entropy_reduction(k) == 1.0 / static_cast<double>(k);
        ok = ok && std::abs(entropy_reduction(k) * entropy_initial(k) * 2.0 - 1.0) <= 1e-12;
    }
    detail = "H0(10) = 5, H0(100) = 50, fractional reduction 1/k verified for k in [1, 10000]";
    return ok;
}

// ---- criterion 3: gradient fidelity -----------------------------------------

bool criterion_gradient_fidelity(std::string& detail) {
    double worst = 0.0;
    for (std::uint64_t draw = 0; draw < 10; ++draw) {
        Rng rng = Rng::stream(draw, "gradcheck");

        // encoder block (attention + FFN + layer norm + pooling)
        {
            ScaConfig sca;
            sca.model_dim = 17;
            sca.heads = 4;
            sca.ffn_dim = 8;
            sca.dropout = 0.0;
            sca.gamma = 6;
            MlpConfig mlp;
            mlp.hidden = 12;
            ModelParams params = ModelParams::init(sca, mlp, draw + 1);
            const Tensor w = random_window(6, 17, 5, rng);
            const std::vector<bool> mask = mask_of(6, 5);
            // random readout weights keep the scalar small so finite-difference
            // cancellation noise stays well below the tolerance
            const Tensor readout = random_window(17, 1, 17, rng);
            auto f = [&](bool with_grad) {
                Graph g;
                const auto t = sca_forward(g, g.constant(w), mask, params, false, nullptr);
                const auto loss = g.matmul(t, g.constant(readout));
                if (with_grad) g.backward(loss);
                return g.val(loss).data[0];
            };
            std::vector<Parameter*> ps;
            for (auto& p : params.sca.items) ps.push_back(p.get());
            Rng sampler = Rng::stream(draw, "coords");
            worst = std::max(worst, grad_check(f, ps, 1e-5, 4, &sampler));
        }

        // standalone FFN
        {
            ParamSet ps;
            Parameter& w1 = ps.add("w1", random_window(8, 6, 8, rng));
            Parameter& b1 = ps.add("b1", random_window(1, 6, 1, rng));
            Parameter& w2 = ps.add("w2", random_window(6, 8, 6, rng));
            Parameter& b2 = ps.add("b2", random_window(1, 8, 1, rng));
            const Tensor x = random_window(4, 8, 4, rng);
            const Tensor readout = random_window(8, 1, 8, rng);
            auto f = [&](bool with_grad) {
                Graph g;
                auto h = g.relu(g.add_rowvec(g.matmul(g.constant(x), g.param(w1)), g.param(b1)));
                h = g.add_rowvec(g.matmul(h, g.param(w2)), g.param(b2));
                const auto loss = g.sum(g.matmul(g.sigmoid(h), g.constant(readout)));
                if (with_grad) g.backward(loss);
                return g.val(loss).data[0];
            };
            worst = std::max(worst, grad_check(f, {&w1, &b1, &w2, &b2}, 1e-5));
        }

        // masked mean pooling
        {
            ParamSet ps;
            Parameter& x = ps.add("x", random_window(6, 5, 6, rng));
            const std::vector<bool> mask = mask_of(6, 4);
            auto f = [&](bool with_grad) {
                Graph g;
                const auto loss = g.sum(g.sigmoid(g.mean_pool_rows(g.param(x), mask)));
                if (with_grad) g.backward(loss);
                return g.val(loss).data[0];
            };
            worst = std::max(worst, grad_check(f, {&x}, 1e-5));
        }

        // MLP under CE, then the same network under the smoothed KLD target
        {
            ScaConfig sca;
            sca.model_dim = 9;
            sca.heads = 3;
            sca.ffn_dim = 4;
            sca.dropout = 0.0;
            MlpConfig mlp;
            mlp.hidden = 7;
            ModelParams params = ModelParams::init(sca, mlp, draw + 17);
            Tensor t = Tensor::zeros(1, 9);
            for (double& v : t.data) v = rng.uniform(0.0, 1.0);
            std::vector<Parameter*> ps;
            for (auto& p : params.mlp.items) ps.push_back(p.get());

            auto f_ce = [&](bool with_grad) {
                Graph g;
                const auto probs = mlp_forward(g, g.constant(t), params, false, nullptr);
                const auto loss = g.nll(probs, 0);
                if (with_grad) g.backward(loss);
                return g.val(loss).data[0];
            };
            worst = std::max(worst, grad_check(f_ce, ps, 1e-5));

            const double psi = 0.1 + 0.2 * rng.uniform();
            auto f_kld = [&](bool with_grad) {
                Graph g;
                const auto probs = mlp_forward(g, g.constant(t), params, false, nullptr);
                const auto loss = g.kld_to_target(probs, {1.0 - psi, psi});
                if (with_grad) g.backward(loss);
                return g.val(loss).data[0];
            };
            worst = std::max(worst, grad_check(f_kld, ps, 1e-5));
        }
    }
    std::ostringstream os;
    os << "max relative error " << worst << " over 10 draws (tolerance 1e-4)";
    detail = os.str();
    return worst <= 1e-4;
}

// ---- criterion 4: permutation invariance ------------------------------------

bool criterion_permutation_invariance(std::string& detail) {
    ModelParams params = ModelParams::init({}, {}, 99);  // full 769-dim model
    Rng rng = Rng::stream(4, "perm");
    double worst = 0.0;
    for (int w = 0; w < 100; ++w) {
        const std::size_t real = 2 + rng.uniform_int(11);
        const Tensor win = random_window(12, 769, real, rng);
        const std::vector<bool> mask = mask_of(12, real);
        const auto base = predict_sequence(win, mask, params);
        for (int p = 0; p < 5; ++p) {
            std::vector<std::size_t> perm(real);
            for (std::size_t i = 0; i < real; ++i) perm[i] = i;
            rng.shuffle(perm);
            Tensor shuffled = win;
            for (std::size_t i = 0; i < real; ++i)
                for (std::size_t j = 0; j < 769; ++j) shuffled(i, j) = win(perm[i], j);
            const auto permuted = predict_sequence(shuffled, mask, params);
            worst = std::max(worst, std::abs(base[0] - permuted[0]));
            worst = std::max(worst, std::abs(base[1] - permuted[1]));
        }
    }
    std::ostringstream os;
    os << "max drift " << worst << " over 100 windows x 5 permutations (tolerance 1e-9)";
    detail = os.str();
    return worst <= 1e-9;
}

// ---- criterion 5: AUC oracle -------------------------------------------------

double auc_bruteforce(const std::vector<std::pair<double, bool>>& scored) {
    double good = 0.0;
    std::size_t pairs = 0;
    for (const auto& [sp, p] : scored) {
        if (!p) continue;
        for (const auto& [sn, n] : scored) {
            if (n) continue;
            ++pairs;
            if (sp > sn)
                good += 1.0;
            else if (sp == sn)
                good += 0.5;
        }
    }
    return good / static_cast<double>(pairs);
}

bool criterion_auc_oracle(std::string& detail) {
    Rng rng = Rng::stream(5, "auc");
    double worst = 0.0;
    int checked = 0;
    while (checked < 1000) {
        const std::size_t n = 2 + rng.uniform_int(11);
        std::vector<std::pair<double, bool>> scored;
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            // quantize half the sets so ties are exercised
            const double s = checked % 2 == 0 ? rng.uniform()
                                              : static_cast<double>(rng.uniform_int(5)) / 4.0;
            const bool pos = rng.uniform() < 0.5;
            scored.emplace_back(s, pos);
            (pos ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        worst = std::max(worst, std::abs(auc(scored) - auc_bruteforce(scored)));
        ++checked;
    }
    std::ostringstream os;
    os << "max |rank - bruteforce| = " << worst << " over 1000 score sets (tolerance 1e-12)";
    detail = os.str();
    return worst <= 1e-12;
}

// ---- criterion 6: aggregation semantics --------------------------------------

bool criterion_aggregation(std::string& detail) {
    Rng rng = Rng::stream(6, "agg");
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng.uniform_int(10);
        std::vector<std::array<double, 2>> probs;
        double sum_mci = 0.0, sum_nc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = rng.uniform();
            probs.push_back({p, 1 - p});
            sum_mci += p;
            sum_nc += 1 - p;
        }
        const ClassLabel by_sum = sum_mci > sum_nc ? ClassLabel::MCI : ClassLabel::NC;
        if (aggregate_subject(probs, ClassLabel::MCI).predicted != by_sum) {
            detail = "argmax(sum) != argmax(mean) at trial " + std::to_string(trial);
            return false;
        }
    }
    // the documented disagreement between mean probability and majority voting
    const std::vector<std::array<double, 2>> probs{{0.9, 0.1}, {0.45, 0.55}, {0.45, 0.55}};
    const SubjectScore mean_rule = aggregate_subject(probs, ClassLabel::MCI);
    const SubjectScore vote_rule = majority_vote(probs, ClassLabel::MCI);
    const bool diverges =
        mean_rule.predicted == ClassLabel::MCI && vote_rule.predicted == ClassLabel::NC;
    detail = "argmax(sum) = argmax(mean) on 10000 sets; mean rule says MCI while majority "
             "voting says NC on the hand-built example";
    return diverges;
}

// ---- criteria 7/8: end-to-end synthetic runs ---------------------------------

SynthConfig e2e_corpus(double signal, std::uint64_t seed) {
    SynthConfig sc;
    sc.n_subjects_per_class = 20;
    sc.themes_per_subject = {2, 3};
    sc.sentences_per_theme = {50, 90};
    sc.vocab_size = 300;
    sc.signal_strength = signal;
    sc.seed = seed;
    return sc;
}

struct E2eOutcome {
    double subject_auc = 0.0;
    double mean_p_correct = 0.0;
};

// filled by criterion 7 for the supplementary confidence check
double g_signal_p_correct = -1.0;

E2eOutcome run_e2e(const SynthConfig& sc, LossKind loss, std::uint64_t seed) {
    const auto corpus = gen_corpus(sc);
    EmbedderBackend backend;
    backend.dim = 64;
    ScaConfig sca;
    sca.model_dim = 65;
    sca.heads = 8;
    sca.ffn_dim = 128;
    sca.dropout = 0.3;
    sca.gamma = 50;
    MlpConfig mlp;
    mlp.hidden = 384;
    TrainConfig train;
    train.epochs = 30;
    train.batch_size = 16;
    train.seed = seed;
    train.gamma = 50;
    train.stride = 25;
    train.loss.kind = loss;
    train.adam.lr = 1e-3;

    const KfoldResult r = kfold_run(corpus, 2, seed, backend, sca, mlp, train);
    E2eOutcome out;
    out.subject_auc = r.subject_summary.auc.mean;
    double p_sum = 0.0;
    std::size_t n = 0;
    for (const FoldOutcome& f : r.folds) {
        for (const SubjectScore& s : f.eval.subject_scores) {
            const double pc = s.truth == ClassLabel::MCI ? s.mean_p_mci : s.mean_p_nc;
            p_sum += pc * static_cast<double>(s.n_sequences);
            n += s.n_sequences;
        }
    }
    out.mean_p_correct = p_sum / static_cast<double>(n);
    return out;
}

bool criterion_learnability(std::string& detail) {
    double signal_auc = 0.0, control_auc = 0.0, p_correct = 0.0;
    for (const std::uint64_t seed : {1, 2, 3}) {
        const E2eOutcome e = run_e2e(e2e_corpus(1.0, seed), LossKind::infoloss_kld, seed);
        signal_auc += e.subject_auc;
        p_correct += e.mean_p_correct;
        control_auc +=
            run_e2e(e2e_corpus(0.0, seed), LossKind::infoloss_kld, seed).subject_auc;
    }
    signal_auc /= 3.0;
    control_auc /= 3.0;
    p_correct /= 3.0;
    g_signal_p_correct = p_correct;
    std::ostringstream os;
    os << "signal-1 subject AUC " << signal_auc << " (need >= 0.90), signal-0 control "
       << control_auc << " (need 0.5 +/- 0.15)";
    detail = os.str();
    return signal_auc >= 0.90 && control_auc >= 0.35 && control_auc <= 0.65;
}

bool criterion_ablation_direction(std::string& detail) {
    SynthConfig base;
    base.n_subjects_per_class = 20;
    base.themes_per_subject = {1, 5};
    base.sentences_per_theme = {15, 75};
    base.vocab_size = 300;
    base.signal_strength = 0.5;

    EmbedderBackend backend;
    backend.dim = 32;
    ScaConfig sca;
    sca.model_dim = 33;
    sca.heads = 4;
    sca.ffn_dim = 64;
    sca.dropout = 0.3;
    sca.gamma = 30;
    MlpConfig mlp;
    mlp.hidden = 128;
    TrainConfig train;
    train.epochs = 40;
    train.batch_size = 16;
    train.gamma = 30;
    train.stride = 15;
    train.adam.lr = 2e-3;

    double info_auc = 0.0, ce_auc = 0.0;
    for (const std::uint64_t seed : {11, 12, 13, 14, 15}) {
        SynthConfig sc = base;
        sc.seed = seed;
        const auto corpus = gen_corpus(sc);
        TrainConfig t = train;
        t.seed = seed;
        t.loss.kind = LossKind::infoloss_kld;
        info_auc += kfold_run(corpus, 2, seed, backend, sca, mlp, t).subject_summary.auc.mean;
        t.loss.kind = LossKind::cross_entropy;
        ce_auc += kfold_run(corpus, 2, seed, backend, sca, mlp, t).subject_summary.auc.mean;
    }
    info_auc /= 5.0;
    ce_auc /= 5.0;
    std::ostringstream os;
    os << "mean subject AUC over 5 seeds: InfoLoss " << info_auc << " vs CE " << ce_auc
       << " (need InfoLoss >= CE)";
    detail = os.str();
    return info_auc >= ce_auc;
}

// ---- criterion 9: reproducibility --------------------------------------------

bool criterion_reproducibility(std::string& detail) {
    const fs::path root = fs::temp_directory_path() / "mciseq_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);

    const std::string cli = MCISEQ_CLI_PATH;
    const std::string synth_cmd =
        cli + " synth --subjects-per-class 8 --themes-min 1 --themes-max 2"
              " --sentences-min 20 --sentences-max 40 --vocab 100 --signal 0.8 --seed 21 --out " +
        (root / "synth").string() + " > /dev/null";
    if (std::system(synth_cmd.c_str()) != 0) {
        detail = "synth command failed";
        return false;
    }
    const std::string kfold_flags =
        " kfold --corpus " + (root / "synth" / "corpus.jsonl").string() +
        " --dim 32 --gamma 20 --stride 10 --heads 4 --ffn 32 --hidden 64 --dropout 0.3"
        " --epochs 8 --batch 16 --lr 0.002 --k 2 --seed 21 --out ";
    for (const char* run : {"run_a", "run_b"}) {
        const std::string cmd = cli + kfold_flags + (root / run).string() + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            detail = std::string("kfold run failed: ") + run;
            return false;
        }
    }

    // every artifact must match byte for byte; only the manifest records the
    // differing --out paths
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "run_a")) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(root / "run_b" / name, std::ios::binary);
        if (!b) {
            detail = "missing in run_b: " + name;
            return false;
        }
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str()) {
            detail = "file differs between identical runs: " + name;
            return false;
        }
        ++compared;
    }
    fs::remove_all(root);
    detail = std::to_string(compared) + " report files bitwise identical across two runs";
    return compared > 0;
}

// ---- criterion 10: leakage guard ----------------------------------------------

bool criterion_leakage_guard(std::string& detail) {
    SynthConfig sc;
    sc.n_subjects_per_class = 6;
    sc.themes_per_subject = {1, 2};
    sc.sentences_per_theme = {8, 16};
    sc.vocab_size = 80;
    sc.signal_strength = 0.5;
    sc.seed = 33;
    const auto corpus = gen_corpus(sc);

    EmbedderBackend backend;
    backend.dim = 16;
    backend.duration_transform = DurationTransform::zscore;  // exercises the stats path
    ScaConfig sca;
    sca.model_dim = 17;
    sca.heads = 4;
    sca.ffn_dim = 8;
    sca.dropout = 0.1;
    sca.gamma = 8;
    MlpConfig mlp;
    mlp.hidden = 12;
    TrainConfig train;
    train.epochs = 1;
    train.batch_size = 8;
    train.gamma = 8;
    train.stride = 4;
    train.seed = 33;

    for (const FoldPlan& fold : make_folds(corpus, 3, 33)) {
        // the individually traced statistics
        AccessLog freq_log, stats_log;
        compute_frequency_set(corpus, fold.train_subjects, train.gamma, train.stride, &freq_log);
        compute_duration_stats(corpus, fold.train_subjects, &stats_log);
        // and the whole training path
        AccessLog train_log;
        train_fold(fold, corpus, backend, sca, mlp, train, &train_log);
        for (const AccessLog* log : {&freq_log, &stats_log, &train_log}) {
            if (log->touched.empty()) {
                detail = "empty access log on fold " + std::to_string(fold.fold_id);
                return false;
            }
            for (const std::string& id : log->touched) {
                if (!fold.train_subjects.count(id) || fold.test_subjects.count(id)) {
                    detail = "fold " + std::to_string(fold.fold_id) +
                             " touched non-train subject " + id;
                    return false;
                }
            }
        }
    }
    detail = "frequency set, duration statistics and the training path touched only "
             "train subjects across 3 folds";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "InfoLoss algebra", criterion_infoloss_algebra},
        {2, "entropy oracle", criterion_entropy_oracle},
        {3, "gradient fidelity", criterion_gradient_fidelity},
        {4, "permutation invariance", criterion_permutation_invariance},
        {5, "AUC oracle", criterion_auc_oracle},
        {6, "aggregation semantics", criterion_aggregation},
        {7, "end-to-end learnability", criterion_learnability},
        {8, "ablation direction", criterion_ablation_direction},
        {9, "reproducibility", criterion_reproducibility},
        {10, "leakage guard", criterion_leakage_guard},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %-24s (%7.2f s)  %s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name, secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }

    // supplementary check on data criterion 7 already produced: after training
    // on the fully separable corpus, test sequences should be classified with
    // confidence, not just ranked correctly
    {
        const bool ok = g_signal_p_correct > 0.7;
        std::printf("[%s] supplementary: mean test p_correct %.4f on the signal-1 runs "
                    "(need > 0.7)\n",
                    ok ? "PASS" : "FAIL", g_signal_p_correct);
        if (!ok) ++failures;
    }

    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
