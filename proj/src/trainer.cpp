#include "lingcurr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "lingcurr/error.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::string_view to_string(DifficultyInput d) {
    switch (d) {
        case DifficultyInput::ling: return "ling";
        case DifficultyInput::loss: return "loss";
        case DifficultyInput::online_loss: return "online_loss";
    }
    return "ling";
}

std::optional<DifficultyInput> parse_difficulty_input(std::string_view text) {
    if (text == "ling") return DifficultyInput::ling;
    if (text == "loss") return DifficultyInput::loss;
    if (text == "online_loss") return DifficultyInput::online_loss;
    return std::nullopt;
}

void TrainConfig::validate() const {
    if (batch_size == 0) throw UsageError("batch size must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw UsageError("learning rate must be > 0");
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) throw UsageError("weight decay must be >= 0");
    if (validation_steps_per_epoch == 0) throw UsageError("validation steps per epoch must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be >= 0");
    if (hash_dim == 0) throw UsageError("hash dimension must be positive");
    curriculum.validate();
}

std::string TrainConfig::canonical() const {
    std::ostringstream s;
    s << "epochs=" << epochs << ";batch_size=" << batch_size << ";learning_rate=" << io::format_double(learning_rate)
      << ";weight_decay=" << io::format_double(weight_decay) << ";seed=" << seed
      << ";validation_steps_per_epoch=" << validation_steps_per_epoch
      << ";importance=" << to_string(importance_method) << ";lambda=" << io::format_double(lambda)
      << ";aggregation=" << to_string(aggregation)
      << ";argmax=" << (argmax_mode == ArgmaxMode::signed_rho ? "signed" : "absolute")
      << ";curriculum=" << to_string(curriculum.kind) << ";beta=" << io::format_double(curriculum.beta)
      << ";gamma=" << io::format_double(curriculum.gamma) << ";c0=" << io::format_double(curriculum.competence_c0)
      << ";competence_shape=" << to_string(curriculum.competence_shape)
      << ";warmup=" << io::format_double(curriculum.warmup_fraction)
      << ";drop_low=" << io::format_double(curriculum.selection_drop_low)
      << ";drop_high=" << io::format_double(curriculum.selection_drop_high) << ";difficulty=" << to_string(difficulty)
      << ";concat=" << (concat_indices ? 1 : 0) << ";hash_dim=" << hash_dim;
    return s.str();
}

std::uint64_t TrainConfig::hash() const { return fnv1a(canonical()); }

ValidationResult validate(const ModelParams& params, std::span<const SparseVector> features, std::span<const int> labels) {
    if (features.size() != labels.size()) throw ArgumentError("validate: features and labels differ in length");
    ValidationResult out;
    out.losses.reserve(features.size());
    out.predictions.reserve(features.size());
    std::size_t correct = 0;
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double l = cross_entropy(params, features[i], labels[i]);
        const int pred = predict(params, features[i]);
        out.losses.push_back(l);
        out.predictions.push_back(pred);
        loss_sum += l;
        if (pred == labels[i]) ++correct;
    }
    if (!features.empty()) {
        out.accuracy = static_cast<double>(correct) / static_cast<double>(features.size());
        out.mean_loss = loss_sum / static_cast<double>(features.size());
    }
    return out;
}

ValidationResult validate(const ModelParams& params, const Featurizer& featurizer, const Dataset& d, Split split) {
    const auto positions = d.positions(split);
    const auto features = featurizer.featurize(d, positions);
    std::vector<int> labels;
    labels.reserve(positions.size());
    for (std::size_t p : positions) labels.push_back(d[p].label);
    return validate(params, features, labels);
}

namespace {

std::vector<double> zscore(std::vector<double> v) {
    if (v.empty()) return v;
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    for (double& x : v) x = sd > 0.0 ? (x - mean) / sd : 0.0;
    return v;
}

class TrainingRun {
public:
    TrainingRun(const Dataset& d, const IndexMatrix& z, const TrainConfig& cfg, const TrainInputs& inputs)
        : d_(d), z_(z), cfg_(cfg), inputs_(inputs), rng_(cfg.seed),
          featurizer_(cfg.hash_dim, cfg.concat_indices ? &z : nullptr) {}

    TrainRecord run() {
        check_inputs();

        const auto train_pos = d_.positions(Split::train);
        const auto val_pos = d_.positions(Split::validation);
        n_train_ = train_pos.size();

        record_.config = cfg_;
        record_.index_names = z_.index_names();
        record_.train_ids = d_.ids(Split::train);

        train_x_ = featurizer_.featurize(d_, train_pos);
        val_x_ = featurizer_.featurize(d_, val_pos);
        for (std::size_t p : train_pos) train_y_.push_back(d_[p].label);
        for (std::size_t p : val_pos) val_y_.push_back(d_[p].label);
        z_train_ = z_.values().select_rows(train_pos);
        z_val_ = z_.values().select_rows(val_pos);
        flags_ = z_.zero_variance_flags();

        const std::size_t steps_per_epoch = (n_train_ + cfg_.batch_size - 1) / cfg_.batch_size;
        if (cfg_.epochs > 0 && steps_per_epoch < cfg_.validation_steps_per_epoch)
            throw UsageError("an epoch has " + std::to_string(steps_per_epoch) + " steps, fewer than the " +
                             std::to_string(cfg_.validation_steps_per_epoch) + " validation steps requested");
        const std::int64_t total = static_cast<std::int64_t>(cfg_.epochs * steps_per_epoch);
        record_.total_steps = total;

        params_ = init_params(static_cast<std::size_t>(d_.num_classes()), featurizer_.dim(), rng_);
        record_.initial_params = params_;
        rho_.rho.assign(z_.cols(), 0.0);
        rho_.method = cfg_.importance_method;
        rho_.lambda = cfg_.lambda;
        if (cfg_.difficulty == DifficultyInput::loss) {
            proxy_difficulty_ = loss_difficulty(*inputs_.proxy_losses, record_.train_ids).values;
        }

        record_.best = {params_, 0, validate(params_, val_x_, val_y_).accuracy};

        std::vector<std::size_t> checkpoints;
        for (std::size_t v = 0; v < cfg_.validation_steps_per_epoch; ++v)
            checkpoints.push_back((steps_per_epoch * (v + 1) + cfg_.validation_steps_per_epoch - 1) /
                                  cfg_.validation_steps_per_epoch);

        std::int64_t step = 0;
        for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
            const double t_start = static_cast<double>(step) / static_cast<double>(total);
            const double t_end = static_cast<double>(step + static_cast<std::int64_t>(steps_per_epoch)) /
                                 static_cast<double>(total);
            begin_epoch(t_start, t_end);

            std::size_t next_checkpoint = 0;
            for (std::size_t local = 1; local <= steps_per_epoch; ++local) {
                const double t = static_cast<double>(step) / static_cast<double>(total);
                train_step(next_batch(), t);
                ++step;
                if (next_checkpoint < checkpoints.size() && local == checkpoints[next_checkpoint]) {
                    ++next_checkpoint;
                    validation_point(step, epoch);
                }
            }
        }
        record_.final_params = params_;
        return std::move(record_);
    }

private:
    void check_inputs() const {
        cfg_.validate();
        if (d_.positions(Split::train).empty()) throw ArgumentError("train: empty train split");
        if (d_.positions(Split::validation).empty()) throw ArgumentError("train: empty validation split");
        if (z_.sample_ids() != d_.ids()) throw AlignmentError("train: index matrix rows are not in dataset order");
        if (!z_.standardized()) throw ArgumentError("train: index matrix must be standardized on the train split");
        if (cfg_.difficulty == DifficultyInput::loss && inputs_.proxy_losses == nullptr)
            throw UsageError("loss difficulty needs recorded proxy losses (run `train --curriculum none` first)");
    }

    bool ling_ready() const { return !record_.rho_trajectory.empty(); }

    // Difficulty over the train split for the current epoch, or nullopt when
    // not yet defined (ling difficulty before the first rho estimate).
    std::optional<std::vector<double>> train_difficulty() const {
        switch (cfg_.difficulty) {
            case DifficultyInput::ling:
                if (!ling_ready()) return std::nullopt;
                return aggregate(cfg_.aggregation, z_train_, rho_, flags_, cfg_.argmax_mode).values;
            case DifficultyInput::loss: return proxy_difficulty_;
            case DifficultyInput::online_loss: return validate(params_, train_x_, train_y_).losses;
        }
        return std::nullopt;
    }

    void begin_epoch(double t_start, double t_end) {
        const auto kind = cfg_.curriculum.kind;
        pool_.resize(n_train_);
        std::iota(pool_.begin(), pool_.end(), std::size_t{0});

        if (is_subset(kind)) {
            if (auto diff = train_difficulty()) {
                switch (kind) {
                    case CurriculumKind::sampling: pool_ = subset_sampling(*diff, record_.train_ids, t_end); break;
                    case CurriculumKind::competence:
                        pool_ = subset_competence(*diff, record_.train_ids, t_end, cfg_.curriculum);
                        break;
                    default: pool_ = subset_data_selection(*diff, record_.train_ids, t_start, cfg_.curriculum); break;
                }
            }
        } else if (is_weighting(kind) && cfg_.difficulty != DifficultyInput::ling) {
            // Loss values are rescaled to the standard scale the weight
            // functions expect.
            epoch_scores_ = zscore(*train_difficulty());
        }
        order_ = pool_;
        std::shuffle(order_.begin(), order_.end(), rng_);
        cursor_ = 0;
    }

    std::vector<std::size_t> next_batch() {
        std::vector<std::size_t> batch;
        const std::size_t take = std::min(cfg_.batch_size, order_.size() - cursor_);
        if (take == 0) {
            order_ = pool_;
            std::shuffle(order_.begin(), order_.end(), rng_);
            cursor_ = 0;
            return next_batch();
        }
        batch.assign(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                     order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
        cursor_ += take;
        return batch;
    }

    void train_step(const std::vector<std::size_t>& batch, double t) {
        std::vector<SparseVector> xs;
        std::vector<int> ys;
        xs.reserve(batch.size());
        ys.reserve(batch.size());
        for (std::size_t i : batch) {
            xs.push_back(train_x_[i]);
            ys.push_back(train_y_[i]);
        }
        std::vector<double> weights(batch.size(), 1.0);
        if (is_weighting(cfg_.curriculum.kind)) {
            if (cfg_.difficulty == DifficultyInput::ling) {
                if (ling_ready())
                    for (std::size_t b = 0; b < batch.size(); ++b)
                        weights[b] = curriculum_weight(cfg_.curriculum, ling_scores_[batch[b]], t);
            } else {
                for (std::size_t b = 0; b < batch.size(); ++b)
                    weights[b] = curriculum_weight(cfg_.curriculum, epoch_scores_[batch[b]], t);
            }
        }
        const double loss = weighted_loss_and_gradient(params_, xs, ys, weights, grad_);
        if (std::isnan(loss)) {
            ++record_.skipped_updates;
            return;
        }
        apply_update(params_, grad_, cfg_.learning_rate, cfg_.weight_decay);
    }

    void validation_point(std::int64_t step, std::size_t epoch) {
        const auto val = validate(params_, val_x_, val_y_);
        ImportanceVector estimate = cfg_.importance_method == ImportanceMethod::correlation
                                        ? estimate_rho_correlation(z_val_, val.losses)
                                        : estimate_rho_lasso(z_val_, val.losses, cfg_.lambda);
        estimate.step = step;
        estimate.lambda = cfg_.importance_method == ImportanceMethod::optimization ? cfg_.lambda : 0.0;
        rho_ = std::move(estimate);

        RhoSnapshot snap;
        snap.step = step;
        snap.rho = rho_.rho;
        snap.best_index = z_.cols() > 0 ? best_single_index(z_val_, val.losses, rho_) : 0;
        record_.rho_trajectory.push_back(std::move(snap));
        if (is_weighting(cfg_.curriculum.kind) && cfg_.difficulty == DifficultyInput::ling)
            ling_scores_ = aggregate(cfg_.aggregation, z_train_, rho_, flags_, cfg_.argmax_mode).values;

        const auto train_eval = validate(params_, train_x_, train_y_);
        record_.loss_traces.push_back({step, train_eval.losses});
        record_.metric_history.push_back({step, epoch, val.mean_loss, val.accuracy, train_eval.mean_loss});

        if (val.accuracy > record_.best.validation_accuracy) record_.best = {params_, step, val.accuracy};
    }

    const Dataset& d_;
    const IndexMatrix& z_;
    const TrainConfig& cfg_;
    const TrainInputs& inputs_;
    std::mt19937_64 rng_;
    Featurizer featurizer_;

    TrainRecord record_;
    std::size_t n_train_ = 0;
    std::vector<SparseVector> train_x_, val_x_;
    std::vector<int> train_y_, val_y_;
    Matrix z_train_, z_val_;
    std::vector<bool> flags_;

    ModelParams params_;
    Gradient grad_;
    ImportanceVector rho_;
    std::vector<double> ling_scores_;
    std::vector<double> proxy_difficulty_;
    std::vector<double> epoch_scores_;

    std::vector<std::size_t> pool_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

}  // namespace

TrainRecord train(const Dataset& d, const IndexMatrix& index_matrix, const TrainConfig& cfg, const TrainInputs& inputs) {
    return TrainingRun(d, index_matrix, cfg, inputs).run();
}

LossTraces to_loss_traces(const TrainRecord& record) {
    LossTraces traces;
    for (const auto& snap : record.loss_traces)
        for (std::size_t i = 0; i < snap.losses.size(); ++i) traces[record.train_ids[i]].push_back(snap.losses[i]);
    return traces;
}

std::string format_rho_trajectory(const TrainRecord& record) {
    std::string out = "step,index_name,rho\n";
    for (const auto& snap : record.rho_trajectory)
        for (std::size_t j = 0; j < snap.rho.size(); ++j)
            out += std::to_string(snap.step) + "," + io::quote_csv_field(record.index_names[j]) + "," +
                   io::format_double(snap.rho[j]) + "\n";
    return out;
}

std::string format_loss_traces(const TrainRecord& record) {
    std::string out = "sample_id,step,loss\n";
    for (const auto& snap : record.loss_traces)
        for (std::size_t i = 0; i < snap.losses.size(); ++i)
            out += io::quote_csv_field(record.train_ids[i]) + "," + std::to_string(snap.step) + "," +
                   io::format_double(snap.losses[i]) + "\n";
    return out;
}

std::string format_metric_history(const TrainRecord& record) {
    std::string out = "step,epoch,validation_loss,validation_accuracy,train_loss\n";
    for (const auto& m : record.metric_history)
        out += std::to_string(m.step) + "," + std::to_string(m.epoch) + "," + io::format_double(m.validation_loss) +
               "," + io::format_double(m.validation_accuracy) + "," + io::format_double(m.train_loss) + "\n";
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kCheckpointMagic = "lingcurr-checkpoint 1";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

CheckpointFile make_checkpoint_file(const TrainRecord& record) {
    CheckpointFile ckpt;
    ckpt.params = record.best.params;
    ckpt.step = record.best.step;
    ckpt.total_steps = record.total_steps;
    ckpt.config_hash = record.config.hash();
    ckpt.curriculum = record.config.curriculum.kind;
    ckpt.hash_dim = record.config.hash_dim;
    ckpt.concat_indices = record.config.concat_indices;
    if (ckpt.concat_indices) ckpt.index_names = record.index_names;
    return ckpt;
}

std::string format_checkpoint(const CheckpointFile& ckpt) {
    std::string out(kCheckpointMagic);
    out += "\nconfig_hash " + hex64(ckpt.config_hash);
    out += "\nstep " + std::to_string(ckpt.step);
    out += "\ntotal_steps " + std::to_string(ckpt.total_steps);
    out += "\ncurriculum " + std::string(to_string(ckpt.curriculum));
    out += "\nhash_dim " + std::to_string(ckpt.hash_dim);
    out += "\nconcat " + std::string(ckpt.concat_indices ? "1" : "0");
    out += "\nindex_names " + std::to_string(ckpt.index_names.size()) + "\n";
    for (const auto& name : ckpt.index_names) out += name + "\n";
    out += "shape " + std::to_string(ckpt.params.classes()) + " " + std::to_string(ckpt.params.features()) + "\n";
    out += "bias";
    for (double b : ckpt.params.bias) out += " " + io::format_double(b);
    out += "\n";
    for (std::size_t c = 0; c < ckpt.params.classes(); ++c) {
        out += "w";
        for (double w : ckpt.params.weights.row(c)) out += " " + io::format_double(w);
        out += "\n";
    }
    return out;
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointFile& ckpt) {
    io::write_text(path, format_checkpoint(ckpt));
}

CheckpointFile parse_checkpoint(std::string_view text, const std::string& source) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) throw ParseError(source, lineno + 1, "unexpected end of checkpoint");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto keyed = [&](std::string_view key) -> std::string {
        const std::string l = next();
        if (l.rfind(std::string(key) + " ", 0) != 0) throw ParseError(source, lineno, "expected \"" + std::string(key) + "\"");
        return l.substr(key.size() + 1);
    };
    auto integer = [&](const std::string& s) {
        auto v = io::parse_integer(s);
        if (!v || *v < 0) throw ParseError(source, lineno, "expected a non-negative integer, got \"" + s + "\"");
        return *v;
    };

    if (next() != kCheckpointMagic) throw ParseError(source, lineno, "not a checkpoint file (bad magic line)");
    CheckpointFile ckpt;
    ckpt.config_hash = std::stoull(keyed("config_hash"), nullptr, 16);
    ckpt.step = integer(keyed("step"));
    ckpt.total_steps = integer(keyed("total_steps"));
    const auto kind = parse_curriculum_kind(keyed("curriculum"));
    if (!kind) throw ParseError(source, lineno, "unknown curriculum");
    ckpt.curriculum = *kind;
    ckpt.hash_dim = static_cast<std::size_t>(integer(keyed("hash_dim")));
    ckpt.concat_indices = keyed("concat") == "1";
    const auto names = integer(keyed("index_names"));
    for (long long i = 0; i < names; ++i) ckpt.index_names.push_back(next());

    std::istringstream shape(keyed("shape"));
    std::size_t classes = 0, features = 0;
    if (!(shape >> classes >> features)) throw ParseError(source, lineno, "bad shape line");

    auto numbers = [&](std::string_view key, std::size_t count) {
        std::istringstream fields(keyed(key));
        std::vector<double> out;
        std::string tok;
        while (fields >> tok) {
            auto v = io::parse_double(tok);
            if (!v || !std::isfinite(*v)) throw ParseError(source, lineno, "bad number \"" + tok + "\"");
            out.push_back(*v);
        }
        if (out.size() != count) throw ParseError(source, lineno, "expected " + std::to_string(count) + " values");
        return out;
    };
    ckpt.params.bias = numbers("bias", classes);
    ckpt.params.weights = Matrix(classes, features);
    for (std::size_t c = 0; c < classes; ++c) {
        const auto row = numbers("w", features);
        std::copy(row.begin(), row.end(), ckpt.params.weights.row(c).begin());
    }
    return ckpt;
}

CheckpointFile load_checkpoint(const std::filesystem::path& path) {
    std::string content;
    for (const auto& l : io::read_lines(path)) {
        content += l;
        content.push_back('\n');
    }
    return parse_checkpoint(content, path.string());
}

ValidationResult evaluate_checkpoint(const CheckpointFile& ckpt, const Dataset& d, const IndexMatrix& indices,
                                     Split split) {
    std::optional<IndexMatrix> columns;
    if (ckpt.concat_indices) columns = indices.select_columns(ckpt.index_names);
    const Featurizer featurizer(ckpt.hash_dim, columns ? &*columns : nullptr);
    if (featurizer.dim() != ckpt.params.features() || ckpt.params.classes() < static_cast<std::size_t>(d.num_classes()))
        throw ValidationError("checkpoint shape (" + std::to_string(ckpt.params.classes()) + " classes, " +
                              std::to_string(ckpt.params.features()) + " features) does not fit this dataset (" +
                              std::to_string(d.num_classes()) + " classes, " + std::to_string(featurizer.dim()) +
                              " features)");
    return validate(ckpt.params, featurizer, d, split);
}

}  // namespace lingcurr
