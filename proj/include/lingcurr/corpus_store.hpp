#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lingcurr/matrix.hpp"

namespace lingcurr {

enum class Split { train, validation, test };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view text);

struct Sample {
    std::string id;
    std::string text;
    std::optional<std::string> text_pair;
    int label = 0;
    Split split = Split::train;
};

// Samples in file order. "Dataset order" everywhere means this order; split
// views are position lists into it, preserving file order within a split.
class Dataset {
public:
    Dataset() = default;
    // Validates id uniqueness and non-negative labels.
    explicit Dataset(std::vector<Sample> samples);

    std::span<const Sample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    std::span<const std::size_t> positions(Split split) const;
    std::vector<std::string> ids(Split split) const;
    std::vector<std::string> ids() const;

    // max label + 1, at least 2.
    int num_classes() const noexcept { return num_classes_; }
    bool has_pairs() const noexcept { return has_pairs_; }

private:
    std::vector<Sample> samples_;
    std::vector<std::size_t> by_split_[3];
    int num_classes_ = 2;
    bool has_pairs_ = false;
};

Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::string_view jsonl, const std::string& source = "<memory>");

struct ColumnStats {
    double mean = 0.0;
    double stddev = 1.0;  // population
    bool zero_variance = false;
};

// n x k table of index values keyed by sample id and index name.
class IndexMatrix {
public:
    IndexMatrix() = default;
    // Throws ValidationError on shape mismatch or non-finite values.
    IndexMatrix(std::vector<std::string> sample_ids, std::vector<std::string> index_names,
                Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }

    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
    const std::vector<std::string>& index_names() const noexcept { return index_names_; }
    const Matrix& values() const noexcept { return values_; }

    // Empty until standardize() has run.
    const std::vector<ColumnStats>& stats() const noexcept { return stats_; }
    bool standardized() const noexcept { return standardized_; }
    // Per column; all false when unstandardized.
    std::vector<bool> zero_variance_flags() const;

    std::optional<std::size_t> column_of(std::string_view name) const;
    std::optional<std::size_t> row_of(std::string_view sample_id) const;

    IndexMatrix select_rows(std::span<const std::size_t> positions) const;
    // Throws ArgumentError naming any unknown column.
    IndexMatrix select_columns(std::span<const std::string> names) const;

private:
    friend IndexMatrix standardize(const IndexMatrix&, const std::unordered_set<std::string>&);
    friend IndexMatrix apply_standardization(const IndexMatrix&, std::span<const ColumnStats>);

    std::vector<std::string> sample_ids_;
    std::vector<std::string> index_names_;
    Matrix values_;
    std::vector<ColumnStats> stats_;
    bool standardized_ = false;
};

// CSV header `sample_id,<names...>`; rows are reordered into dataset order.
// Rows for ids outside the dataset are ignored.
IndexMatrix load_index_matrix(const std::filesystem::path& path, const Dataset& dataset);
IndexMatrix parse_index_matrix(std::string_view csv, const Dataset& dataset,
                               const std::string& source = "<memory>");
std::string format_index_matrix(const IndexMatrix& m);
void save_index_matrix(const std::filesystem::path& path, const IndexMatrix& m);

// Column-wise concatenation of first-text (P) and second-text (H) indices.
IndexMatrix concatenate_pair_indices(const IndexMatrix& first, const IndexMatrix& second);

// Fits population mean/stddev on the rows whose id is in `fit_ids` and maps
// every row to (x - mean) / stddev. Constant columns become zeros and are
// flagged.
IndexMatrix standardize(const IndexMatrix& m, const std::unordered_set<std::string>& fit_ids);

// Applies previously fitted stats to raw values (e.g. a matrix for new data).
IndexMatrix apply_standardization(const IndexMatrix& raw, std::span<const ColumnStats> stats);

// Fits on the dataset's train split.
IndexMatrix standardize_on_train(const IndexMatrix& m, const Dataset& dataset);

}  // namespace lingcurr
