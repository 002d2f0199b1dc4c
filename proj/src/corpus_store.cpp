#include "lingcurr/corpus_store.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lingcurr/error.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::string_view to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "train";
}

std::optional<Split> parse_split(std::string_view text) {
    if (text == "train") return Split::train;
    if (text == "validation") return Split::validation;
    if (text == "test") return Split::test;
    return std::nullopt;
}

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
    std::unordered_set<std::string> seen;
    int max_label = 1;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const Sample& s = samples_[i];
        if (!seen.insert(s.id).second) throw ValidationError("duplicate sample id \"" + s.id + "\"");
        if (s.label < 0) throw ValidationError("negative label for sample \"" + s.id + "\"");
        max_label = std::max(max_label, s.label);
        if (s.text_pair) has_pairs_ = true;
        by_split_[static_cast<int>(s.split)].push_back(i);
    }
    num_classes_ = max_label + 1;
}

std::span<const std::size_t> Dataset::positions(Split split) const {
    return by_split_[static_cast<int>(split)];
}

std::vector<std::string> Dataset::ids(Split split) const {
    std::vector<std::string> out;
    for (std::size_t p : positions(split)) out.push_back(samples_[p].id);
    return out;
}

std::vector<std::string> Dataset::ids() const {
    std::vector<std::string> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.id);
    return out;
}

namespace {

Sample parse_record(const std::string& line, const std::string& source, std::size_t lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(source, lineno, "record is not a JSON object");

    auto require = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end()) throw ParseError(source, lineno, std::string("missing \"") + key + "\"");
        return *it;
    };

    Sample s;
    const auto& id = require("id");
    if (!id.is_string()) throw ParseError(source, lineno, "\"id\" must be a string");
    s.id = id.get<std::string>();

    const auto& text = require("text");
    if (!text.is_string()) throw ParseError(source, lineno, "\"text\" must be a string");
    s.text = text.get<std::string>();

    if (auto it = j.find("text_pair"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError(source, lineno, "\"text_pair\" must be a string");
        s.text_pair = it->get<std::string>();
    }

    const auto& label = require("label");
    if (!label.is_number_integer()) throw ParseError(source, lineno, "\"label\" must be an integer");
    const auto value = label.get<long long>();
    if (value < 0 || value > 1'000'000) throw ParseError(source, lineno, "\"label\" out of range");
    s.label = static_cast<int>(value);

    const auto& split = require("split");
    if (!split.is_string()) throw ParseError(source, lineno, "\"split\" must be a string");
    auto parsed = parse_split(split.get<std::string>());
    if (!parsed)
        throw ParseError(source, lineno,
                         "\"split\" must be train, validation or test, got \"" +
                             split.get<std::string>() + "\"");
    s.split = *parsed;
    return s;
}

}  // namespace

Dataset parse_dataset(std::string_view jsonl, const std::string& source) {
    std::vector<Sample> samples;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;
        samples.push_back(parse_record(line, source, lineno));
    }
    return Dataset(std::move(samples));
}

Dataset load_dataset(const std::filesystem::path& path) {
    const auto lines = io::read_lines(path);
    std::string content;
    for (const auto& l : lines) {
        content += l;
        content.push_back('\n');
    }
    return parse_dataset(content, path.string());
}

// ---------------------------------------------------------------------------

IndexMatrix::IndexMatrix(std::vector<std::string> sample_ids, std::vector<std::string> index_names,
                         Matrix values)
    : sample_ids_(std::move(sample_ids)), index_names_(std::move(index_names)), values_(std::move(values)) {
    if (values_.rows() != sample_ids_.size())
        throw ValidationError("index matrix has " + std::to_string(values_.rows()) + " rows but " +
                              std::to_string(sample_ids_.size()) + " sample ids");
    if (values_.cols() != index_names_.size())
        throw ValidationError("index matrix has " + std::to_string(values_.cols()) + " columns but " +
                              std::to_string(index_names_.size()) + " names");
    for (std::size_t r = 0; r < values_.rows(); ++r)
        for (std::size_t c = 0; c < values_.cols(); ++c)
            if (!std::isfinite(values_(r, c)))
                throw ValidationError("non-finite value at sample \"" + sample_ids_[r] + "\", index \"" +
                                      index_names_[c] + "\"");
}

std::vector<bool> IndexMatrix::zero_variance_flags() const {
    std::vector<bool> flags(cols(), false);
    for (std::size_t c = 0; c < stats_.size(); ++c) flags[c] = stats_[c].zero_variance;
    return flags;
}

std::optional<std::size_t> IndexMatrix::column_of(std::string_view name) const {
    for (std::size_t c = 0; c < index_names_.size(); ++c)
        if (index_names_[c] == name) return c;
    return std::nullopt;
}

std::optional<std::size_t> IndexMatrix::row_of(std::string_view sample_id) const {
    for (std::size_t r = 0; r < sample_ids_.size(); ++r)
        if (sample_ids_[r] == sample_id) return r;
    return std::nullopt;
}

IndexMatrix IndexMatrix::select_rows(std::span<const std::size_t> positions) const {
    std::vector<std::string> ids;
    ids.reserve(positions.size());
    for (std::size_t p : positions) ids.push_back(sample_ids_.at(p));
    IndexMatrix out(std::move(ids), index_names_, values_.select_rows(positions));
    out.stats_ = stats_;
    out.standardized_ = standardized_;
    return out;
}

IndexMatrix IndexMatrix::select_columns(std::span<const std::string> names) const {
    std::vector<std::size_t> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        auto c = column_of(name);
        if (!c) throw ArgumentError("unknown index \"" + name + "\"");
        cols.push_back(*c);
    }
    std::vector<std::string> kept(names.begin(), names.end());
    IndexMatrix out(sample_ids_, std::move(kept), values_.select_columns(cols));
    if (!stats_.empty())
        for (std::size_t c : cols) out.stats_.push_back(stats_[c]);
    out.standardized_ = standardized_;
    return out;
}

// ---------------------------------------------------------------------------

IndexMatrix parse_index_matrix(std::string_view csv, const Dataset& dataset, const std::string& source) {
    std::istringstream in{std::string(csv)};
    std::string line;
    std::size_t lineno = 0;

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;
        header = io::split_csv_line(line);
        break;
    }
    if (header.empty() || io::trim(header[0]) != "sample_id")
        throw ParseError(source, lineno, "header must start with \"sample_id\"");
    std::vector<std::string> names;
    for (std::size_t i = 1; i < header.size(); ++i) names.push_back(header[i]);
    const std::size_t k = names.size();

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < dataset.size(); ++i) position.emplace(dataset[i].id, i);

    Matrix values(dataset.size(), k);
    std::vector<bool> filled(dataset.size(), false);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;
        auto fields = io::split_csv_line(line);
        if (fields.size() != k + 1)
            throw ParseError(source, lineno,
                             "expected " + std::to_string(k + 1) + " fields, got " + std::to_string(fields.size()));
        const std::string id = io::trim(fields[0]);
        auto it = position.find(id);
        if (it == position.end()) continue;
        if (filled[it->second]) throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate row for sample \"" + id + "\"");
        filled[it->second] = true;
        for (std::size_t c = 0; c < k; ++c) {
            auto v = io::parse_double(fields[c + 1]);
            if (!v)
                throw ParseError(source, lineno, "cannot parse value \"" + fields[c + 1] + "\" for index \"" + names[c] + "\"");
            if (!std::isfinite(*v))
                throw ValidationError(source + ":" + std::to_string(lineno) + ": non-finite value \"" +
                                      io::trim(fields[c + 1]) + "\" at sample \"" + id + "\", index \"" + names[c] + "\"");
            values(it->second, c) = *v;
        }
    }
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (!filled[i]) throw CoverageError(source + ": no index row for sample \"" + dataset[i].id + "\"");

    return IndexMatrix(dataset.ids(), std::move(names), std::move(values));
}

IndexMatrix load_index_matrix(const std::filesystem::path& path, const Dataset& dataset) {
    const auto lines = io::read_lines(path);
    std::string content;
    for (const auto& l : lines) {
        content += l;
        content.push_back('\n');
    }
    return parse_index_matrix(content, dataset, path.string());
}

std::string format_index_matrix(const IndexMatrix& m) {
    std::string out = "sample_id";
    for (const auto& name : m.index_names()) {
        out.push_back(',');
        out += io::quote_csv_field(name);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += io::quote_csv_field(m.sample_ids()[r]);
        for (double v : m.values().row(r)) {
            out.push_back(',');
            out += io::format_double(v);
        }
        out.push_back('\n');
    }
    return out;
}

void save_index_matrix(const std::filesystem::path& path, const IndexMatrix& m) {
    io::write_text(path, format_index_matrix(m));
}

IndexMatrix concatenate_pair_indices(const IndexMatrix& first, const IndexMatrix& second) {
    if (first.sample_ids() != second.sample_ids())
        throw AlignmentError("pair index matrices do not share the same sample ids in the same order");
    const std::size_t n = first.rows();
    const std::size_t ka = first.cols();
    const std::size_t kb = second.cols();
    std::vector<std::string> names;
    names.reserve(ka + kb);
    for (const auto& name : first.index_names()) names.push_back(name + " (P)");
    for (const auto& name : second.index_names()) names.push_back(name + " (H)");
    Matrix values(n, ka + kb);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < ka; ++c) values(r, c) = first.values()(r, c);
        for (std::size_t c = 0; c < kb; ++c) values(r, ka + c) = second.values()(r, c);
    }
    return IndexMatrix(first.sample_ids(), std::move(names), std::move(values));
}

IndexMatrix apply_standardization(const IndexMatrix& raw, std::span<const ColumnStats> stats) {
    if (stats.size() != raw.cols())
        throw ArgumentError("standardization stats cover " + std::to_string(stats.size()) + " columns, matrix has " +
                            std::to_string(raw.cols()));
    Matrix z(raw.rows(), raw.cols());
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        const ColumnStats& s = stats[c];
        for (std::size_t r = 0; r < raw.rows(); ++r)
            z(r, c) = s.zero_variance ? 0.0 : (raw.values()(r, c) - s.mean) / s.stddev;
    }
    IndexMatrix out(raw.sample_ids(), raw.index_names(), std::move(z));
    out.stats_.assign(stats.begin(), stats.end());
    out.standardized_ = true;
    return out;
}

IndexMatrix standardize(const IndexMatrix& m, const std::unordered_set<std::string>& fit_ids) {
    if (fit_ids.empty()) throw ArgumentError("standardize: empty fit set");
    std::vector<std::size_t> fit_rows;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (fit_ids.count(m.sample_ids()[r])) fit_rows.push_back(r);
    if (fit_rows.size() != fit_ids.size())
        throw ArgumentError("standardize: " + std::to_string(fit_ids.size() - fit_rows.size()) +
                            " fit ids are not present in the matrix");

    const double n = static_cast<double>(fit_rows.size());
    std::vector<ColumnStats> stats(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t r : fit_rows) sum += m.values()(r, c);
        const double mean = sum / n;
        double ss = 0.0;
        bool constant = true;
        const double first = m.values()(fit_rows.front(), c);
        for (std::size_t r : fit_rows) {
            const double d = m.values()(r, c) - mean;
            ss += d * d;
            if (m.values()(r, c) != first) constant = false;
        }
        const double sd = std::sqrt(ss / n);
        stats[c].mean = mean;
        stats[c].stddev = constant || sd == 0.0 ? 1.0 : sd;
        stats[c].zero_variance = constant || sd == 0.0;
    }
    return apply_standardization(m, stats);
}

IndexMatrix standardize_on_train(const IndexMatrix& m, const Dataset& dataset) {
    auto ids = dataset.ids(Split::train);
    return standardize(m, std::unordered_set<std::string>(ids.begin(), ids.end()));
}

}  // namespace lingcurr
