#include "lingcurr/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lingcurr/corpus_store.hpp"
#include "lingcurr/difficulty.hpp"
#include "lingcurr/error.hpp"
#include "lingcurr/evaluation.hpp"
#include "lingcurr/index_filtering.hpp"
#include "lingcurr/lexical_metrics.hpp"
#include "lingcurr/rho_analysis.hpp"
#include "lingcurr/text_io.hpp"
#include "lingcurr/trainer.hpp"

namespace fs = std::filesystem;

namespace lingcurr {

namespace {

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

fs::path output_path(const GlobalOptions& g, const std::string& given, const char* fallback) {
    return given.empty() ? fs::path(g.out_dir) / fallback : fs::path(given);
}

void require_file(const std::string& path, const std::string& what, const std::string& producer) {
    if (path.empty() || !fs::exists(path))
        throw UsageError("missing " + what + (path.empty() ? "" : " at " + path) + "; produce it with `" + producer +
                         "`");
}

std::vector<std::string> read_name_list(const std::string& path) {
    std::vector<std::string> names;
    for (const auto& line : io::read_lines(path)) {
        auto name = io::trim(line);
        if (!name.empty()) names.push_back(std::move(name));
    }
    return names;
}

// Loads the dataset and its raw index matrix, optionally restricted to a
// name list, standardized on the train split.
struct Inputs {
    Dataset dataset;
    IndexMatrix indices;
};

Inputs load_inputs(const std::string& dataset_path, const std::string& indices_path, const std::string& index_list) {
    require_file(dataset_path, "dataset", "the dataset file given with --dataset");
    require_file(indices_path, "index matrix", "lingcurr extract");
    Inputs in{load_dataset(dataset_path), {}};
    IndexMatrix raw = load_index_matrix(indices_path, in.dataset);
    if (!index_list.empty()) {
        require_file(index_list, "index list", "lingcurr filter");
        raw = raw.select_columns(read_name_list(index_list));
    }
    in.indices = standardize_on_train(raw, in.dataset);
    return in;
}

std::string available_names(const IndexMatrix& m) {
    std::string out;
    for (const auto& n : m.index_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
}

// ---------------------------------------------------------------------------

struct ExtractOptions {
    std::string dataset;
    std::string freq;
    std::string tags;
    std::string out;
    std::string groups = "auto";
    std::size_t freq_cutoff = kDefaultFrequencyCutoff;
    std::size_t segment = kDefaultSegmentLength;
    std::size_t first_k = kDefaultFirstK;
};

std::string base_name(const std::string& name) {
    for (const char* tag : {" (P)", " (H)"}) {
        const std::string t(tag);
        if (name.size() > t.size() && name.compare(name.size() - t.size(), t.size(), t) == 0)
            return name.substr(0, name.size() - t.size());
    }
    return name;
}

int cmd_extract(const GlobalOptions& g, const ExtractOptions& o, std::ostream& out) {
    std::vector<std::string> groups;
    if (o.groups == "auto") {
        groups = {"ttr", "counts"};
        if (!o.freq.empty()) groups.push_back("sophistication");
        if (!o.tags.empty()) groups.push_back("pos");
    } else {
        for (const auto& field : io::split_csv_line(o.groups)) groups.push_back(io::trim(field));
    }
    auto wants = [&](std::string_view group) { return std::find(groups.begin(), groups.end(), group) != groups.end(); };
    for (const auto& group : groups)
        if (group != "ttr" && group != "counts" && group != "sophistication" && group != "pos")
            throw UsageError("unknown index group \"" + group + "\" (choose from ttr, counts, sophistication, pos)");
    if (wants("sophistication") && o.freq.empty())
        throw UsageError("sophistication indices need a frequency list: pass --freq");
    if (wants("pos") && o.tags.empty()) throw UsageError("POS indices need tagged tokens: pass --tags");

    require_file(o.dataset, "dataset", "the dataset file given with --dataset");
    const Dataset d = load_dataset(o.dataset);
    std::optional<FrequencyList> freq;
    std::optional<TaggedCorpus> tags;
    MetricOptions opts;
    opts.k_segment = o.segment;
    opts.first_k = o.first_k;
    if (wants("sophistication")) {
        freq = load_frequency_list(o.freq, o.freq_cutoff);
        opts.frequency = &*freq;
    }
    if (wants("pos")) {
        tags = load_tagged_corpus(o.tags);
        opts.tags = &*tags;
    }
    const IndexMatrix full = compute_index_matrix(d, opts);

    std::vector<std::string> keep;
    auto in_group = [&](const std::string& base) {
        auto has = [&](const std::vector<std::string>& names) {
            return std::find(names.begin(), names.end(), base) != names.end();
        };
        return (wants("ttr") && has(ttr_index_names())) || (wants("counts") && has(frequency_free_count_names())) ||
               (wants("sophistication") && has(sophistication_index_names())) ||
               (wants("pos") && has(pos_index_names()));
    };
    for (const auto& name : full.index_names())
        if (in_group(base_name(name))) keep.push_back(name);
    const IndexMatrix selected = full.select_columns(keep);

    const fs::path path = output_path(g, o.out, "indices.csv");
    save_index_matrix(path, selected);
    out << "wrote " << selected.rows() << " x " << selected.cols() << " index matrix to " << path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct TrainOptions {
    std::string dataset;
    std::string indices;
    std::string index_list;
    std::string proxy_losses;
    std::string curriculum = "none";
    std::string importance = "optimization";
    std::string aggregation = "max";
    std::string argmax = "signed";
    std::string difficulty = "ling";
    std::string competence_shape = "linear";
    TrainConfig cfg;
};

TrainConfig resolve_train_config(const GlobalOptions& g, const TrainOptions& o) {
    TrainConfig cfg = o.cfg;
    cfg.seed = g.seed;
    cfg.curriculum.kind = *parse_curriculum_kind(o.curriculum);
    cfg.importance_method = *parse_importance_method(o.importance);
    cfg.aggregation = *parse_aggregation_method(o.aggregation);
    cfg.argmax_mode = o.argmax == "absolute" ? ArgmaxMode::absolute_rho : ArgmaxMode::signed_rho;
    cfg.difficulty = *parse_difficulty_input(o.difficulty);
    cfg.curriculum.competence_shape = *parse_competence_shape(o.competence_shape);
    cfg.validate();
    return cfg;
}

int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& out) {
    const TrainConfig cfg = resolve_train_config(g, o);
    std::optional<LossTraces> proxy;
    if (cfg.difficulty == DifficultyInput::loss) {
        require_file(o.proxy_losses, "proxy loss traces (--proxy-losses)", "lingcurr train --curriculum none");
        proxy = load_loss_traces(o.proxy_losses);
    }
    const Inputs in = load_inputs(o.dataset, o.indices, o.index_list);
    TrainInputs inputs;
    if (proxy) inputs.proxy_losses = &*proxy;

    const TrainRecord record = train(in.dataset, in.indices, cfg, inputs);
    const fs::path dir(g.out_dir);
    const auto ckpt = make_checkpoint_file(record);
    save_checkpoint(dir / "checkpoint.txt", ckpt);
    io::write_text(dir / "rho_trajectory.csv", format_rho_trajectory(record));
    io::write_text(dir / "loss_traces.csv", format_loss_traces(record));
    io::write_text(dir / "metrics.csv", format_metric_history(record));

    out << "steps=" << record.total_steps << " skipped_updates=" << record.skipped_updates
        << " best_step=" << record.best.step
        << " best_validation_accuracy=" << io::format_double(record.best.validation_accuracy);
    if (!in.dataset.positions(Split::test).empty()) {
        const auto test = evaluate_checkpoint(ckpt, in.dataset, in.indices, Split::test);
        out << " test_accuracy=" << io::format_double(test.accuracy);
    }
    out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string dataset;
    std::string indices;
    std::string index_list;
    std::string checkpoint;
    std::string loss_checkpoint;
    std::string rho;
    std::string split = "test";
    std::string by;
    std::string by_index;
    std::string aggregation = "max";
    std::string argmax = "signed";
    std::string out;
    std::size_t bins = kDefaultBinCount;
    std::size_t min_count = kDefaultMinBinCount;
};

int cmd_eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
    std::string by = o.by_index.empty() ? o.by : o.by_index;
    if (by.empty()) throw UsageError("choose a difficulty with --by (index name, loss or aggregate) or --by-index");
    require_file(o.checkpoint, "checkpoint", "lingcurr train");
    const Inputs in = load_inputs(o.dataset, o.indices, o.index_list);
    const Split split = *parse_split(o.split);
    const auto positions = in.dataset.positions(split);
    if (positions.empty()) throw ArgumentError("split \"" + o.split + "\" has no samples");

    const CheckpointFile ckpt = load_checkpoint(o.checkpoint);
    const auto result = evaluate_checkpoint(ckpt, in.dataset, in.indices, split);
    std::vector<int> labels;
    for (std::size_t p : positions) labels.push_back(in.dataset[p].label);

    std::vector<double> difficulty;
    if (by == "loss" && o.by_index.empty()) {
        if (o.loss_checkpoint.empty()) {
            difficulty = result.losses;
        } else {
            require_file(o.loss_checkpoint, "loss reference checkpoint", "lingcurr train --curriculum none");
            difficulty = evaluate_checkpoint(load_checkpoint(o.loss_checkpoint), in.dataset, in.indices, split).losses;
        }
    } else if (by == "aggregate" && o.by_index.empty()) {
        require_file(o.rho, "rho trajectory (--rho)", "lingcurr train");
        const RhoTrajectory traj = load_rho_trajectory(o.rho);
        if (traj.steps.empty()) throw ValidationError("rho trajectory " + o.rho + " has no snapshots");
        if (traj.index_names != in.indices.index_names())
            throw AlignmentError("rho trajectory indices differ from the index matrix columns");
        ImportanceVector rho;
        const auto last = traj.values.row(traj.steps.size() - 1);
        rho.rho.assign(last.begin(), last.end());
        const auto method = *parse_aggregation_method(o.aggregation);
        const auto mode = o.argmax == "absolute" ? ArgmaxMode::absolute_rho : ArgmaxMode::signed_rho;
        difficulty =
            aggregate(method, in.indices.values().select_rows(positions), rho, in.indices.zero_variance_flags(), mode)
                .values;
    } else {
        const auto column = in.indices.column_of(by);
        if (!column) throw UsageError("unknown index \"" + by + "\"; available: " + available_names(in.indices));
        difficulty = in.indices.values().select_rows(positions).column(*column);
    }

    const BinReport report = binned_balanced_accuracy(result.predictions, labels, difficulty, o.bins, o.min_count);
    const fs::path path = output_path(g, o.out, "eval_bins.csv");
    io::write_text(path, format_bin_report(report));
    out << "split=" << o.split << " by=" << by << " n=" << report.n << " bins=" << report.bins.size()
        << " plain_accuracy=" << io::format_double(report.plain_accuracy)
        << " balanced_accuracy=" << io::format_double(report.balanced_accuracy) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct FilterOptions {
    std::string method = "cluster";
    std::string dataset;
    std::string indices;
    std::string index_list;
    std::string checkpoint;
    std::string rank_hint;
    double keep = kDefaultKeepFraction;
    double threshold = kDefaultClusterThreshold;
    std::size_t bins = kDefaultBinCount;
    std::size_t min_count = kDefaultMinBinCount;
};

int cmd_filter(const GlobalOptions& g, const FilterOptions& o, std::ostream& out) {
    const fs::path dir(g.out_dir);
    if (o.method == "trend") {
        require_file(o.checkpoint, "baseline checkpoint (--checkpoint)", "lingcurr train --curriculum none");
        const Inputs in = load_inputs(o.dataset, o.indices, o.index_list);
        const auto kept = filter_by_trend(in.dataset, in.indices, load_checkpoint(o.checkpoint), o.bins, o.keep,
                                          o.min_count);
        std::vector<std::string> names;
        for (const auto& s : kept) names.push_back(s.index);
        io::write_text(dir / "filter_trend.txt", format_name_list(names));
        io::write_text(dir / "filter_trend.csv", format_trend_csv(kept));
        out << "kept " << names.size() << " of " << in.indices.cols() << " indices by accuracy trend\n";
        return 0;
    }

    const Inputs in = load_inputs(o.dataset, o.indices, o.index_list);
    const auto train_rows = in.dataset.positions(Split::train);
    const Matrix corr = correlation_matrix(in.indices.values().select_rows(train_rows));
    const auto labels = complete_linkage_clusters(correlation_distance(corr), o.threshold);

    std::optional<std::vector<double>> hint;
    if (!o.rank_hint.empty()) {
        // `index,slope` from a trend run; |slope| ranks, unlisted indices last.
        require_file(o.rank_hint, "rank hint", "lingcurr filter --method trend");
        hint.emplace(in.indices.cols(), -1.0);
        const auto lines = io::read_lines(o.rank_hint);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (io::trim(lines[i]).empty()) continue;
            const auto fields = io::split_csv_line(lines[i]);
            const auto slope = fields.size() == 2 ? io::parse_double(fields[1]) : std::nullopt;
            if (!slope) throw ParseError(o.rank_hint, i + 1, "expected index,slope");
            if (const auto c = in.indices.column_of(fields[0])) (*hint)[*c] = std::abs(*slope);
        }
    }
    const auto reps = hint ? select_representatives(labels, corr, std::span<const double>(*hint))
                           : select_representatives(labels, corr);
    std::vector<std::string> names;
    for (std::size_t c : reps) names.push_back(in.indices.index_names()[c]);
    io::write_text(dir / "filter_cluster.txt", format_name_list(names));
    io::write_text(dir / "filter_cluster.csv", format_cluster_csv(in.indices.index_names(), labels));
    out << "selected " << names.size() << " representatives from " << in.indices.cols() << " indices\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string rho;
    bool stages = false;
    bool changes = false;
    bool clusters = false;
    std::size_t top_k = 3;
    double threshold = 0.05;
};

int cmd_analyze(const GlobalOptions& g, const AnalyzeOptions& o, std::ostream& out) {
    const std::string rho_path = o.rho.empty() ? (fs::path(g.out_dir) / "rho_trajectory.csv").string() : o.rho;
    require_file(rho_path, "rho trajectory", "lingcurr train");
    const RhoTrajectory traj = load_rho_trajectory(rho_path);
    const bool all = !o.stages && !o.changes && !o.clusters;
    const fs::path dir(g.out_dir);

    if (all || o.stages || o.changes) {
        const StageMeans means = stage_means(traj);
        if (all || o.stages) {
            io::write_text(dir / "rho_stages.tsv", format_stage_table(top_k_per_stage(means, o.top_k)));
            out << "wrote " << (dir / "rho_stages.tsv").string() << "\n";
        }
        if (all || o.changes) {
            io::write_text(dir / "rho_changes.tsv", format_change_table(max_change_indices(means)));
            out << "wrote " << (dir / "rho_changes.tsv").string() << "\n";
        }
    }
    if (all || o.clusters) {
        const auto labels = cluster_trajectories(traj, o.threshold);
        io::write_text(dir / "rho_clusters.csv", format_cluster_csv(traj.index_names, labels));
        out << "wrote " << (dir / "rho_clusters.csv").string() << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Curriculum learning driven by linguistic complexity indices", "lingcurr"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (flags given on the command line win)");

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--out-dir", g.out_dir, "Directory for written artifacts");

    ExtractOptions ex;
    auto* extract = app.add_subcommand("extract", "Compute the native lexical indices of a dataset");
    extract->add_option("--dataset", ex.dataset, "Dataset JSON-lines file")->required();
    extract->add_option("--freq", ex.freq, "Frequency list, one word per line, most frequent first");
    extract->add_option("--tags", ex.tags, "Tagged tokens JSON-lines (id, tokens, tags)");
    extract->add_option("--groups", ex.groups,
                        "Comma list from ttr,counts,sophistication,pos; auto adds sophistication with --freq and pos "
                        "with --tags");
    extract->add_option("--freq-cutoff", ex.freq_cutoff, "Words ranked below this count as sophisticated")
        ->check(CLI::PositiveNumber);
    extract->add_option("--segment", ex.segment, "Segment length for msttr")->check(CLI::PositiveNumber);
    extract->add_option("--first-k", ex.first_k, "Window for unique words in the first k tokens")
        ->check(CLI::PositiveNumber);
    extract->add_option("--out", ex.out, "Output CSV (default <out-dir>/indices.csv)");

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Train the classifier with an optional curriculum");
    train_cmd->add_option("--dataset", tr.dataset, "Dataset JSON-lines file")->required();
    train_cmd->add_option("--indices", tr.indices, "Index matrix CSV")->required();
    train_cmd->add_option("--index-list", tr.index_list, "Restrict to the indices named in this file");
    train_cmd->add_option("--curriculum", tr.curriculum, "Curriculum")
        ->check(CLI::IsMember({"none", "sigmoid", "neg_sigmoid", "gaussian", "sampling", "competence",
                               "data_selection"}));
    train_cmd->add_option("--importance", tr.importance, "Importance estimator")
        ->check(CLI::IsMember({"correlation", "optimization"}));
    train_cmd->add_option("--lambda", tr.cfg.lambda,
                          "L1 penalty of the optimization estimator, which minimizes "
                          "||loss - Z rho||^2 + lambda ||rho||_1 (sum, no 1/n)")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--aggregation", tr.aggregation, "Difficulty aggregation")
        ->check(CLI::IsMember({"max", "weighted"}));
    train_cmd->add_option("--argmax", tr.argmax, "Column choice for max aggregation")
        ->check(CLI::IsMember({"signed", "absolute"}));
    train_cmd->add_option("--difficulty", tr.difficulty, "Difficulty source")
        ->check(CLI::IsMember({"ling", "loss", "online_loss"}));
    train_cmd->add_option("--proxy-losses", tr.proxy_losses, "Loss traces of a baseline run (for --difficulty loss)");
    train_cmd->add_flag("--concat-indices", tr.cfg.concat_indices, "Append the standardized indices to the features");
    train_cmd->add_option("--epochs", tr.cfg.epochs, "Training epochs");
    train_cmd->add_option("--batch-size", tr.cfg.batch_size, "Samples per step")->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", tr.cfg.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
    train_cmd->add_option("--weight-decay", tr.cfg.weight_decay, "Decoupled weight decay")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--val-steps", tr.cfg.validation_steps_per_epoch, "Validation points per epoch")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--hash-dim", tr.cfg.hash_dim, "Hashed token feature width")->check(CLI::PositiveNumber);
    train_cmd->add_option("--beta", tr.cfg.curriculum.beta, "Sigmoid curriculum steepness (>= 1)");
    train_cmd->add_option("--gamma", tr.cfg.curriculum.gamma, "Gaussian curriculum widening rate (> 0)");
    train_cmd->add_option("--c0", tr.cfg.curriculum.competence_c0, "Initial competence in (0, 1]");
    train_cmd->add_option("--competence-shape", tr.competence_shape, "Competence growth")
        ->check(CLI::IsMember({"linear", "sqrt"}));
    train_cmd->add_option("--warmup", tr.cfg.curriculum.warmup_fraction,
                          "Data selection keeps every sample before this progress");
    train_cmd->add_option("--drop-low", tr.cfg.curriculum.selection_drop_low, "Data selection: easiest fraction dropped");
    train_cmd->add_option("--drop-high", tr.cfg.curriculum.selection_drop_high,
                          "Data selection: hardest fraction dropped");

    EvalOptions ev;
    auto* eval = app.add_subcommand("eval", "Difficulty-binned accuracy of a checkpoint");
    eval->add_option("--dataset", ev.dataset, "Dataset JSON-lines file")->required();
    eval->add_option("--indices", ev.indices, "Index matrix CSV")->required();
    eval->add_option("--index-list", ev.index_list, "Restrict to the indices named in this file");
    eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint written by train")->required();
    eval->add_option("--split", ev.split, "Split to evaluate")->check(CLI::IsMember({"train", "validation", "test"}));
    eval->add_option("--by", ev.by, "Difficulty: an index name, loss or aggregate");
    eval->add_option("--by-index", ev.by_index, "Difficulty: this index (same as --by NAME)");
    eval->add_option("--loss-checkpoint", ev.loss_checkpoint,
                     "Model whose per-sample loss defines difficulty for --by loss (default: --checkpoint)");
    eval->add_option("--rho", ev.rho, "Rho trajectory for --by aggregate (last snapshot is used)");
    eval->add_option("--aggregation", ev.aggregation, "Aggregation for --by aggregate")
        ->check(CLI::IsMember({"max", "weighted"}));
    eval->add_option("--argmax", ev.argmax, "Column choice for max aggregation")
        ->check(CLI::IsMember({"signed", "absolute"}));
    eval->add_option("--bins", ev.bins, "Equal-width bins")->check(CLI::PositiveNumber);
    eval->add_option("--min-count", ev.min_count, "Bins smaller than this merge into a neighbour");
    eval->add_option("--out", ev.out, "Output CSV (default <out-dir>/eval_bins.csv)");

    FilterOptions fi;
    auto* filter = app.add_subcommand("filter", "Reduce the index set");
    filter->add_option("--method", fi.method, "trend or cluster")->check(CLI::IsMember({"trend", "cluster"}));
    filter->add_option("--dataset", fi.dataset, "Dataset JSON-lines file")->required();
    filter->add_option("--indices", fi.indices, "Index matrix CSV")->required();
    filter->add_option("--index-list", fi.index_list, "Restrict to the indices named in this file");
    filter->add_option("--checkpoint", fi.checkpoint, "Baseline checkpoint (train --curriculum none), for trend");
    filter->add_option("--keep", fi.keep, "Fraction of indices kept by trend")->check(CLI::Range(0.0, 1.0));
    filter->add_option("--bins", fi.bins, "Equal-width bins for the trend")->check(CLI::PositiveNumber);
    filter->add_option("--min-count", fi.min_count, "Bins smaller than this merge into a neighbour");
    filter->add_option("--threshold", fi.threshold, "Cluster cut on 1 - |r|")->check(CLI::Range(0.0, 2.0));
    filter->add_option("--rank-hint", fi.rank_hint, "index,slope CSV ranking cluster representatives");

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Stage-wise and trajectory analysis of rho");
    analyze->add_option("--rho", an.rho, "Rho trajectory CSV (default <out-dir>/rho_trajectory.csv)");
    analyze->add_flag("--stages", an.stages, "Top indices per training stage");
    analyze->add_flag("--changes", an.changes, "Indices whose mean rho changes most between stages");
    analyze->add_flag("--clusters", an.clusters, "Cluster indices by rho trajectory");
    analyze->add_option("--top-k", an.top_k, "Indices listed per stage")->check(CLI::PositiveNumber);
    analyze->add_option("--threshold", an.threshold, "Trajectory cluster cut (mean |rho difference|)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*extract) return cmd_extract(g, ex, out);
        if (*train_cmd) return cmd_train(g, tr, out);
        if (*eval) return cmd_eval(g, ev, out);
        if (*filter) return cmd_filter(g, fi, out);
        if (*analyze) return cmd_analyze(g, an, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace lingcurr
