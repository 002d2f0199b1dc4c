#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingcurr/corpus_store.hpp"
#include "lingcurr/difficulty.hpp"
#include "lingcurr/importance.hpp"
#include "lingcurr/model.hpp"
#include "lingcurr/schedulers.hpp"

namespace lingcurr {

// Where the curriculum's per-sample difficulty comes from.
enum class DifficultyInput {
    ling,         // aggregated standardized indices under the current rho
    loss,         // mean recorded loss of a proxy run (TrainInputs::proxy_losses)
    online_loss,  // current model's training loss, refreshed every epoch
};

std::string_view to_string(DifficultyInput d);
std::optional<DifficultyInput> parse_difficulty_input(std::string_view text);

struct TrainConfig {
    std::size_t epochs = 3;
    std::size_t batch_size = 16;
    double learning_rate = 0.1;
    double weight_decay = 0.01;
    std::uint64_t seed = 1;
    std::size_t validation_steps_per_epoch = 2;
    ImportanceMethod importance_method = ImportanceMethod::optimization;
    double lambda = kDefaultLassoLambda;
    AggregationMethod aggregation = AggregationMethod::max;
    ArgmaxMode argmax_mode = ArgmaxMode::signed_rho;
    CurriculumConfig curriculum;
    DifficultyInput difficulty = DifficultyInput::ling;
    bool concat_indices = false;
    std::size_t hash_dim = kDefaultHashDim;

    // Throws UsageError.
    void validate() const;
    // Stable textual form; hashed into checkpoint headers.
    std::string canonical() const;
    std::uint64_t hash() const;
};

struct TrainInputs {
    // Required when difficulty == DifficultyInput::loss; must cover every
    // train sample.
    const LossTraces* proxy_losses = nullptr;
};

struct RhoSnapshot {
    std::int64_t step = 0;
    std::vector<double> rho;
    std::size_t best_index = 0;  // single column that best explains validation loss
};

struct LossSnapshot {
    std::int64_t step = 0;
    std::vector<double> losses;  // aligned with TrainRecord::train_ids
};

struct MetricPoint {
    std::int64_t step = 0;
    std::size_t epoch = 0;
    double validation_loss = 0.0;
    double validation_accuracy = 0.0;
    double train_loss = 0.0;
};

struct Checkpoint {
    ModelParams params;
    std::int64_t step = 0;
    double validation_accuracy = 0.0;
};

struct TrainRecord {
    TrainConfig config;
    std::vector<std::string> index_names;
    std::vector<std::string> train_ids;
    std::vector<RhoSnapshot> rho_trajectory;
    std::vector<LossSnapshot> loss_traces;
    std::vector<MetricPoint> metric_history;
    Checkpoint best;
    ModelParams initial_params;
    ModelParams final_params;
    std::int64_t total_steps = 0;
    std::size_t skipped_updates = 0;
};

struct ValidationResult {
    std::vector<double> losses;  // per sample, in the given order
    std::vector<int> predictions;
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

ValidationResult validate(const ModelParams& params, std::span<const SparseVector> features, std::span<const int> labels);

// Evaluates the samples of one split (dataset order).
ValidationResult validate(const ModelParams& params, const Featurizer& featurizer, const Dataset& d, Split split);

// `index_matrix` must be aligned to dataset order and standardized on the
// train split.
TrainRecord train(const Dataset& d, const IndexMatrix& index_matrix, const TrainConfig& cfg,
                  const TrainInputs& inputs = {});

// Per-sample traces keyed by id, for loss_difficulty.
LossTraces to_loss_traces(const TrainRecord& record);

// `step,index_name,rho`
std::string format_rho_trajectory(const TrainRecord& record);
// `sample_id,step,loss`
std::string format_loss_traces(const TrainRecord& record);
// `step,epoch,validation_loss,validation_accuracy,train_loss`
std::string format_metric_history(const TrainRecord& record);

struct CheckpointFile {
    ModelParams params;
    std::int64_t step = 0;
    std::int64_t total_steps = 0;  // steps the producing run took; 0 means untrained
    std::uint64_t config_hash = 0;
    CurriculumKind curriculum = CurriculumKind::none;
    std::size_t hash_dim = kDefaultHashDim;
    bool concat_indices = false;
    std::vector<std::string> index_names;  // concatenated feature columns
};

CheckpointFile make_checkpoint_file(const TrainRecord& record);
std::string format_checkpoint(const CheckpointFile& ckpt);
void save_checkpoint(const std::filesystem::path& path, const CheckpointFile& ckpt);
CheckpointFile parse_checkpoint(std::string_view text, const std::string& source = "<memory>");
CheckpointFile load_checkpoint(const std::filesystem::path& path);

// Runs a saved model over one split. Concat checkpoints take their feature
// columns from `indices` by name (standardized values expected); throws
// ArgumentError when a column is missing and ValidationError when the feature
// width does not match the stored weights.
ValidationResult evaluate_checkpoint(const CheckpointFile& ckpt, const Dataset& d, const IndexMatrix& indices,
                                     Split split);

}  // namespace lingcurr
