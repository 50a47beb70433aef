#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mciseq/adam.hpp"
#include "mciseq/corpus.hpp"
#include "mciseq/embedder.hpp"
#include "mciseq/infoloss.hpp"
#include "mciseq/model.hpp"

namespace mciseq {

struct TrainConfig {
    std::size_t epochs = 100;
    double warmup_fraction = 0.1;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    LossConfig loss;
    std::size_t gamma = 200;
    std::size_t stride = 100;
    AdamConfig adam;
};

// Thrown when training produces a non-finite loss or activation.
struct DivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Warm-up multiplier: linear ramp over the first ceil(warmup_fraction*epochs)
// epochs, then 1.
double lr_schedule(std::size_t epoch, const TrainConfig& cfg);

struct EpochStat {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double lr_multiplier = 1.0;
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStat> trace;
    FrequencySet freq;
    std::map<std::string, double> psi;  // per training subject
    EmbedderBackend backend;            // duration stats fitted on train data
};

// Trains the SCA encoder and MLP on the fold's training subjects with two
// separate Adam optimizers sharing one loss. The frequency set and any
// normalization statistics are computed from training subjects only; every
// subject read is recorded in `log` when given.
TrainResult train_fold(const FoldPlan& fold, const std::vector<SubjectRecordSet>& corpus,
                       const EmbedderBackend& backend, const ScaConfig& sca_cfg,
                       const MlpConfig& mlp_cfg, const TrainConfig& cfg,
                       AccessLog* log = nullptr);

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<EpochStat>& trace);

// Everything needed to reload a checkpoint and evaluate it: model shapes,
// training settings, and the embedder configuration including any duration
// statistics fitted during training. The precomputed-embedding table itself
// is not serialized; callers reattach it after loading.
struct PipelineConfig {
    ScaConfig sca;
    MlpConfig mlp;
    TrainConfig train;
    EmbedderBackend backend;
};

void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& cfg);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace mciseq
