#pragma once

// Tabular data handling: CSV loading, five-bin quantile discretization,
// categorical coding and deterministic train/test splitting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gnb/util.hpp"

namespace gnb {

// bad input data (unreadable file, malformed CSV, schema mismatch);
// distinct from usage/internal errors for exit-code mapping
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::set<std::string>& default_missing_markers() {
    static const std::set<std::string> m = {"", "?", "NA"};
    return m;
}

// ---------------------------------------------------------------- raw CSV

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size()) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

}  // namespace detail

// RFC-4180-style reader: quoted fields may contain commas, doubled quotes
// and newlines; unquoted fields are trimmed; fully empty lines are skipped
inline CsvData parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.empty()) throw data_error("empty file: " + path);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;       // current field started with a quote
    bool in_quotes = false;
    bool any = false;          // row has content beyond a single empty field
    size_t line = 1;

    auto end_field = [&] {
        row.push_back(quoted ? field : detail::trim(field));
        if (quoted || !detail::trim(field).empty()) any = true;
        field.clear();
        quoted = false;
    };
    auto end_row = [&] {
        end_field();
        if (any || row.size() > 1) records.push_back(std::move(row));
        row.clear();
        any = false;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else if (c == '"' && field.empty() && !quoted) {
            quoted = true;
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
            ++line;
        } else if (quoted) {
            if (c != ' ' && c != '\t')
                throw data_error(path + ":" + std::to_string(line) +
                                 ": content after closing quote");
        } else {
            field += c;
        }
    }
    if (in_quotes) throw data_error(path + ": unterminated quoted field");
    if (!field.empty() || quoted || !row.empty()) end_row();

    if (records.empty()) throw data_error("no header row in " + path);
    CsvData csv;
    csv.header = records.front();
    std::set<std::string> seen;
    for (const auto& name : csv.header) {
        if (name.empty()) throw data_error(path + ": empty column name in header");
        if (!seen.insert(name).second) throw data_error(path + ": duplicate column name: " + name);
    }
    for (size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != csv.header.size())
            throw data_error(path + ": row " + std::to_string(r) + " has " +
                             std::to_string(records[r].size()) + " fields, expected " +
                             std::to_string(csv.header.size()));
        csv.rows.push_back(std::move(records[r]));
    }
    return csv;
}

// ---------------------------------------------------------------- RawTable

struct RawColumn {
    bool numeric = false;
    std::vector<double> values;        // when numeric
    std::vector<std::string> labels;   // when categorical
    size_t size() const { return numeric ? values.size() : labels.size(); }
};

struct RawTable {
    std::vector<std::string> column_names;
    std::vector<RawColumn> columns;
    std::string class_column;          // may be empty (e.g. prediction input)
    size_t n_rows = 0;
    size_t dropped_rows = 0;           // rows removed for missing cells

    int column_index(const std::string& name) const {
        for (size_t i = 0; i < column_names.size(); ++i)
            if (column_names[i] == name) return static_cast<int>(i);
        return -1;
    }
};

// Load a CSV, drop rows containing a missing-value marker, then type each
// column: numeric iff every retained cell parses as a finite double.
inline RawTable load_csv(const std::string& path, const std::string& class_column = "",
                         const std::set<std::string>& missing_markers = default_missing_markers()) {
    CsvData csv = parse_csv(path);
    RawTable t;
    t.column_names = csv.header;
    t.class_column = class_column;
    if (!class_column.empty() && t.column_index(class_column) < 0)
        throw data_error(path + ": class column '" + class_column + "' not found");

    std::vector<const std::vector<std::string>*> keep;
    for (const auto& row : csv.rows) {
        bool missing = false;
        for (const auto& cell : row)
            if (missing_markers.count(cell)) { missing = true; break; }
        if (missing) ++t.dropped_rows;
        else keep.push_back(&row);
    }
    t.n_rows = keep.size();
    if (t.n_rows == 0) throw data_error(path + ": no complete rows");

    const size_t ncol = csv.header.size();
    t.columns.resize(ncol);
    for (size_t c = 0; c < ncol; ++c) {
        std::vector<double> nums(keep.size());
        bool numeric = true;
        for (size_t r = 0; r < keep.size(); ++r) {
            if (!detail::parse_double((*keep[r])[c], nums[r])) { numeric = false; break; }
        }
        RawColumn& col = t.columns[c];
        col.numeric = numeric;
        if (numeric) {
            col.values = std::move(nums);
        } else {
            col.labels.reserve(keep.size());
            for (const auto* row : keep) col.labels.push_back((*row)[c]);
        }
    }
    return t;
}

inline RawTable drop_columns(const RawTable& t, const std::vector<std::string>& names) {
    std::set<int> drop;
    for (const auto& name : names) {
        int idx = t.column_index(name);
        if (idx < 0) throw data_error("drop_columns: no column named '" + name + "'");
        if (t.column_names[idx] == t.class_column)
            throw data_error("drop_columns: cannot drop the class column");
        drop.insert(idx);
    }
    RawTable out = t;
    out.column_names.clear();
    out.columns.clear();
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (drop.count(static_cast<int>(c))) continue;
        out.column_names.push_back(t.column_names[c]);
        out.columns.push_back(t.columns[c]);
    }
    return out;
}

// One relabeling group: every class value in `sources` becomes `target`.
struct JoinGroup {
    std::vector<std::string> sources;
    std::string target;
};

// Rewrite class values in place (numeric classes compare by parsed value).
inline void join_class_values(RawTable& t, const std::vector<JoinGroup>& groups) {
    if (t.class_column.empty()) throw data_error("join_class_values: table has no class column");
    RawColumn& col = t.columns[t.column_index(t.class_column)];
    for (const auto& g : groups) {
        if (col.numeric) {
            double target;
            if (!detail::parse_double(g.target, target))
                throw data_error("join_class_values: non-numeric target '" + g.target +
                                 "' for numeric class column");
            for (const auto& s : g.sources) {
                double source;
                if (!detail::parse_double(s, source))
                    throw data_error("join_class_values: non-numeric source '" + s + "'");
                for (double& v : col.values)
                    if (v == source) v = target;
            }
        } else {
            for (const auto& s : g.sources)
                for (std::string& v : col.labels)
                    if (v == s) v = g.target;
        }
    }
}

// ---------------------------------------------------- discretization spec

// Numeric column with >5 distinct values: split at up to four sample
// quantiles (nearest rank at 1/5 .. 4/5). Boundaries equal to a neighbour
// or to the column min/max are discarded so every interval is non-empty.
struct BinRule {
    std::vector<double> boundaries;       // ascending, strictly inside (min, max)
    std::vector<double> representatives;  // per-interval mean, size boundaries+1
    double min = 0, max = 0;              // range seen when fitted
};

struct ColumnRule {
    std::string name;
    bool numeric = false;
    bool binned = false;
    BinRule bins;                          // when binned
    std::vector<double> values;            // pass-through numeric: code -> value
    std::vector<std::string> labels;       // pass-through categorical: code -> label
    int cardinality() const {
        if (binned) return static_cast<int>(bins.boundaries.size()) + 1;
        return static_cast<int>(numeric ? values.size() : labels.size());
    }
};

struct DiscretizationSpec {
    std::vector<ColumnRule> columns;
    const ColumnRule* find(const std::string& name) const {
        for (const auto& c : columns)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

inline BinRule fit_bins(std::vector<double> values) {
    BinRule rule;
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    rule.min = values.front();
    rule.max = values.back();
    std::vector<double> qs;
    for (size_t j = 1; j <= 4; ++j) {
        size_t rank = n * j / 5;           // nearest rank, 1-based
        if (rank < 1) rank = 1;
        qs.push_back(values[rank - 1]);
    }
    for (double q : qs) {
        if (q == rule.min || q == rule.max) continue;
        if (!rule.boundaries.empty() && rule.boundaries.back() == q) continue;
        rule.boundaries.push_back(q);
    }
    // per-interval means over the sorted training values
    const size_t m = rule.boundaries.size() + 1;
    std::vector<double> sum(m, 0.0);
    std::vector<size_t> cnt(m, 0);
    size_t k = 0;
    for (double v : values) {
        while (k < rule.boundaries.size() && v >= rule.boundaries[k]) ++k;
        sum[k] += v;
        ++cnt[k];
    }
    rule.representatives.resize(m);
    for (size_t i = 0; i < m; ++i) {
        if (cnt[i] == 0) throw std::logic_error("fit_bins: empty interval");
        rule.representatives[i] = sum[i] / static_cast<double>(cnt[i]);
    }
    return rule;
}

inline size_t count_distinct(const std::vector<double>& v) {
    std::set<double> s(v.begin(), v.end());
    return s.size();
}

}  // namespace detail

// Fit per-column coding rules: numeric columns with more than five distinct
// values get quantile bins; everything else (and the class column) passes
// through with codes assigned by first appearance.
inline DiscretizationSpec fit_discretization(const RawTable& t) {
    DiscretizationSpec spec;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        const RawColumn& col = t.columns[c];
        ColumnRule rule;
        rule.name = t.column_names[c];
        rule.numeric = col.numeric;
        const bool is_class = !t.class_column.empty() && rule.name == t.class_column;
        if (col.numeric && !is_class && detail::count_distinct(col.values) > 5) {
            rule.binned = true;
            rule.bins = detail::fit_bins(col.values);
        } else if (col.numeric) {
            for (double v : col.values)
                if (std::find(rule.values.begin(), rule.values.end(), v) == rule.values.end())
                    rule.values.push_back(v);
        } else {
            for (const auto& s : col.labels)
                if (std::find(rule.labels.begin(), rule.labels.end(), s) == rule.labels.end())
                    rule.labels.push_back(s);
        }
        spec.columns.push_back(std::move(rule));
    }
    return spec;
}

// interval index: number of boundaries <= x (clamps both tails)
inline int discretize_value(const BinRule& rule, double x) {
    int code = 0;
    for (double b : rule.boundaries) {
        if (x >= b) ++code;
        else break;
    }
    return code;
}

// code for a cell under a rule; -1 when a pass-through value is unseen
inline int encode_value(const ColumnRule& rule, double numeric_value, const std::string& label,
                        bool have_numeric) {
    if (rule.binned) {
        if (!have_numeric) return -1;
        return discretize_value(rule.bins, numeric_value);
    }
    if (rule.numeric) {
        if (!have_numeric) return -1;
        auto it = std::find(rule.values.begin(), rule.values.end(), numeric_value);
        return it == rule.values.end() ? -1 : static_cast<int>(it - rule.values.begin());
    }
    auto it = std::find(rule.labels.begin(), rule.labels.end(), label);
    return it == rule.labels.end() ? -1 : static_cast<int>(it - rule.labels.begin());
}

// -------------------------------------------------------- discrete table

struct DiscreteTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<int>> codes;             // column-major
    std::vector<int> cardinalities;
    std::vector<std::vector<std::string>> code_labels;  // per column: code -> label
    int class_column = -1;
    size_t n_rows = 0;

    int n_attributes() const { return static_cast<int>(codes.size()) - (class_column >= 0 ? 1 : 0); }
    std::vector<int> attributes() const {
        std::vector<int> a;
        for (size_t c = 0; c < codes.size(); ++c)
            if (static_cast<int>(c) != class_column) a.push_back(static_cast<int>(c));
        return a;
    }
    std::vector<int> row(size_t r) const {
        std::vector<int> out(codes.size());
        for (size_t c = 0; c < codes.size(); ++c) out[c] = codes[c][r];
        return out;
    }
};

struct ApplyResult {
    DiscreteTable table;
    size_t range_warnings = 0;   // numeric values outside the fitted [min, max]
    size_t unseen_values = 0;    // pass-through values absent from the coding map
};

inline std::vector<std::string> rule_code_labels(const ColumnRule& rule) {
    std::vector<std::string> labels;
    if (rule.binned) {
        for (double r : rule.bins.representatives) labels.push_back(format_double(r));
    } else if (rule.numeric) {
        for (double v : rule.values) labels.push_back(format_double(v));
    } else {
        labels = rule.labels;
    }
    return labels;
}

inline ApplyResult apply_discretization(const RawTable& t, const DiscretizationSpec& spec,
                                        const std::string& class_column) {
    ApplyResult res;
    DiscreteTable& out = res.table;
    out.n_rows = t.n_rows;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        const ColumnRule* rule = spec.find(t.column_names[c]);
        if (!rule)
            throw data_error("apply_discretization: no rule for column '" + t.column_names[c] + "'");
        const RawColumn& col = t.columns[c];
        if (rule->numeric != col.numeric)
            throw data_error("apply_discretization: column '" + rule->name +
                             "' type differs from the fitted rule");
        std::vector<int> codes(t.n_rows);
        for (size_t r = 0; r < t.n_rows; ++r) {
            int code;
            if (col.numeric) {
                double v = col.values[r];
                if (rule->binned && (v < rule->bins.min || v > rule->bins.max)) ++res.range_warnings;
                code = encode_value(*rule, v, "", true);
            } else {
                code = encode_value(*rule, 0.0, col.labels[r], false);
            }
            if (code < 0) ++res.unseen_values;
            codes[r] = code;
        }
        out.column_names.push_back(rule->name);
        out.codes.push_back(std::move(codes));
        out.cardinalities.push_back(rule->cardinality());
        out.code_labels.push_back(rule_code_labels(*rule));
    }
    if (!class_column.empty()) {
        int idx = -1;
        for (size_t c = 0; c < out.column_names.size(); ++c)
            if (out.column_names[c] == class_column) idx = static_cast<int>(c);
        if (idx < 0) throw data_error("apply_discretization: class column '" + class_column +
                                      "' not present");
        out.class_column = idx;
        if (out.cardinalities[idx] < 2)
            throw data_error("class column '" + class_column + "' has fewer than two values");
    } else {
        out.class_column = -1;
    }
    return res;
}

// --------------------------------------------------------------- splitting

namespace detail {

// fixed "split v1" generator: mt19937 + rejection sampling + Fisher-Yates,
// so the same seed selects the same rows on every platform
inline uint32_t bounded_rand(std::mt19937& gen, uint32_t bound) {
    const uint32_t limit = UINT32_MAX - UINT32_MAX % bound;
    uint32_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

inline std::vector<size_t> shuffled_indices(size_t n, uint64_t seed) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937 gen(static_cast<uint32_t>(seed ^ (seed >> 32)));
    for (size_t i = n; i > 1; --i) {
        size_t j = bounded_rand(gen, static_cast<uint32_t>(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

inline DiscreteTable take_rows(const DiscreteTable& t, const std::vector<size_t>& rows) {
    DiscreteTable out = t;
    out.n_rows = rows.size();
    for (size_t c = 0; c < t.codes.size(); ++c) {
        out.codes[c].clear();
        out.codes[c].reserve(rows.size());
        for (size_t r : rows) out.codes[c].push_back(t.codes[c][r]);
    }
    return out;
}

}  // namespace detail

struct Split {
    DiscreteTable train;
    DiscreteTable test;
    std::vector<size_t> test_rows;   // original row indices, ascending
};

inline Split split(const DiscreteTable& t, double test_fraction, uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split: test_fraction must lie in (0, 1)");
    const size_t n = t.n_rows;
    const size_t n_test = static_cast<size_t>(std::llround(static_cast<double>(n) * test_fraction));
    if (n_test == 0 || n_test >= n)
        throw std::invalid_argument("split: degenerate split (test size " +
                                    std::to_string(n_test) + " of " + std::to_string(n) + ")");
    std::vector<size_t> idx = detail::shuffled_indices(n, seed);
    std::vector<size_t> test_rows(idx.begin(), idx.begin() + n_test);
    std::sort(test_rows.begin(), test_rows.end());
    std::vector<size_t> train_rows;
    train_rows.reserve(n - n_test);
    std::set<size_t> test_set(test_rows.begin(), test_rows.end());
    for (size_t r = 0; r < n; ++r)
        if (!test_set.count(r)) train_rows.push_back(r);
    Split s;
    s.train = detail::take_rows(t, train_rows);
    s.test = detail::take_rows(t, test_rows);
    s.test_rows = std::move(test_rows);
    return s;
}

}  // namespace gnb
