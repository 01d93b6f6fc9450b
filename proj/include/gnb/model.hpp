#pragma once

// Fitted classifiers. A model keeps maximum-likelihood cluster and separator
// tables over the training data; the joint factors as the product of cluster
// probabilities divided by separator probabilities. Zero cells fall back to
// progressively coarser products rather than aborting the classification.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/empirical.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"

namespace gnb {

struct GnbModel {
    bool is_nb = false;
    GnbStructure structure;        // when !is_nb
    NbStructure nb;                // when is_nb

    int class_column = -1;
    int class_cardinality = 0;
    std::vector<std::string> class_labels;
    std::vector<std::string> column_names;
    size_t n_train_rows = 0;

    EmpiricalDist prior;                         // P(Y)
    std::map<int, EmpiricalDist> univariate;     // attr -> P(X_a)
    std::map<int, EmpiricalDist> pair_table;     // attr -> P(Y, X_a)
    std::map<int, EmpiricalDist> cluster_table;  // attr added -> P(Y, X_mother, X_attr)

    DiscretizationSpec discretization;           // empty unless built from raw data

    const std::vector<int>& attributes() const {
        return is_nb ? nb.attributes : structure.order;
    }
};

namespace detail {

inline void fit_shared(GnbModel& m, const DiscreteTable& t) {
    m.class_column = t.class_column;
    m.class_cardinality = t.cardinalities[t.class_column];
    m.class_labels = t.code_labels[t.class_column];
    m.column_names = t.column_names;
    m.n_train_rows = t.n_rows;
    m.prior = estimate(t, {t.class_column});
    for (int a : m.attributes()) {
        m.univariate[a] = estimate(t, {a});
        m.pair_table[a] = estimate(t, {t.class_column, a});
    }
}

}  // namespace detail

inline GnbModel fit(const DiscreteTable& t, const GnbStructure& s) {
    auto bad = validate(s, static_cast<int>(t.codes.size()));
    if (!bad.empty()) throw std::invalid_argument("fit: invalid structure: " + bad.front());
    if (s.class_index != t.class_column)
        throw std::invalid_argument("fit: structure class index does not match the table");
    GnbModel m;
    m.is_nb = false;
    m.structure = s;
    detail::fit_shared(m, t);
    for (const auto& c : s.clusters())
        m.cluster_table[c.attribute] = estimate(t, {t.class_column, c.mother, c.attribute});
    return m;
}

inline GnbModel fit(const DiscreteTable& t, const NbStructure& s) {
    if (s.class_index != t.class_column)
        throw std::invalid_argument("fit: structure class index does not match the table");
    for (int a : s.attributes)
        if (a < 0 || a >= static_cast<int>(t.codes.size()) || a == s.class_index)
            throw std::invalid_argument("fit: invalid attribute column " + std::to_string(a));
    GnbModel m;
    m.is_nb = true;
    m.nb = s;
    detail::fit_shared(m, t);
    return m;
}

namespace detail {

// pluggable probability lookups so the fallback pass can shadow zero cells
struct TableView {
    const GnbModel& m;
    const std::map<std::vector<int>, double>* pair_override = nullptr;     // key: attr, y, code
    const std::map<std::vector<int>, double>* cluster_override = nullptr;  // key: attr, y, cm, ca

    double pair(int a, int y, int code) const {
        if (pair_override) {
            auto it = pair_override->find({a, y, code});
            if (it != pair_override->end()) return it->second;
        }
        return m.pair_table.at(a).prob({y, code});
    }
    double cluster(int a, int y, int cm, int ca) const {
        if (cluster_override) {
            auto it = cluster_override->find({a, y, cm, ca});
            if (it != cluster_override->end()) return it->second;
        }
        return m.cluster_table.at(a).prob({y, cm, ca});
    }
};

// joint probability of (y, row) under the cherry-tree factorization;
// numerator zeros win before any division happens
inline double joint_under(const TableView& v, const std::vector<int>& row, int y) {
    const GnbModel& m = v.m;
    double py = m.prior.prob({y});
    if (py <= 0) return 0.0;
    if (m.is_nb) {
        double num = 1.0;
        for (int a : m.nb.attributes) {
            num *= v.pair(a, y, row[a]);
            if (num == 0) return 0.0;
        }
        const int d = static_cast<int>(m.nb.attributes.size());
        for (int i = 0; i < d - 1; ++i) num /= py;
        return num;
    }
    double num = 1.0;
    for (const auto& c : m.structure.clusters()) {
        num *= v.cluster(c.attribute, y, row[c.mother], row[c.attribute]);
        if (num == 0) return 0.0;
    }
    for (int sep : m.structure.separators()) {
        double ps = v.pair(sep, y, row[sep]);
        if (ps <= 0)
            throw std::logic_error("joint: zero separator under a positive cluster");
        num /= ps;
    }
    return num;
}

}  // namespace detail

// P(y, row) with plain maximum-likelihood tables (no fallback).
inline double joint(const GnbModel& m, const std::vector<int>& row, int y) {
    if (row.size() != m.column_names.size())
        throw std::invalid_argument("joint: row width does not match the model");
    if (y < 0 || y >= m.class_cardinality) throw std::invalid_argument("joint: class code out of range");
    detail::TableView v{m};
    return detail::joint_under(v, row, y);
}

struct Posterior {
    std::vector<double> probs;    // one entry per class code
    int predicted = -1;
    bool used_fallback = false;
    int fallback_depth = 0;       // number of substituted cells
};

// Posterior over classes. When every class joint vanishes, zero pair cells
// are replaced by independence products and zero cluster cells by pairwise
// products, in one repair pass; if everything still vanishes the class prior
// decides.
inline Posterior classify(const GnbModel& m, const std::vector<int>& row) {
    if (row.size() != m.column_names.size())
        throw std::invalid_argument("classify: row width does not match the model");
    Posterior post;
    const int C = m.class_cardinality;

    auto finish = [&](const std::vector<double>& jo) -> bool {
        double total = 0;
        for (double p : jo) total += p;
        if (total <= 0) return false;
        post.probs.resize(C);
        for (int y = 0; y < C; ++y) post.probs[y] = jo[y] / total;
        post.predicted = 0;
        for (int y = 1; y < C; ++y)
            if (post.probs[y] > post.probs[post.predicted]) post.predicted = y;
        return true;
    };

    detail::TableView plain{m};
    std::vector<double> jo(C);
    for (int y = 0; y < C; ++y) jo[y] = detail::joint_under(plain, row, y);
    if (finish(jo)) return post;

    // repair pass: patch zero pairs first, then zero clusters built on them
    post.used_fallback = true;
    std::map<std::vector<int>, double> pair_ov;
    std::map<std::vector<int>, double> cluster_ov;
    for (int y = 0; y < C; ++y) {
        double py = m.prior.prob({y});
        if (py <= 0) continue;
        for (int a : m.attributes()) {
            if (m.pair_table.at(a).prob({y, row[a]}) == 0) {
                pair_ov[{a, y, row[a]}] = py * m.univariate.at(a).prob({row[a]});
                ++post.fallback_depth;
            }
        }
        if (!m.is_nb) {
            detail::TableView patched{m, &pair_ov, nullptr};
            for (const auto& c : m.structure.clusters()) {
                if (m.cluster_table.at(c.attribute).prob({y, row[c.mother], row[c.attribute]}) == 0) {
                    double pm = patched.pair(c.mother, y, row[c.mother]);
                    double pa = patched.pair(c.attribute, y, row[c.attribute]);
                    cluster_ov[{c.attribute, y, row[c.mother], row[c.attribute]}] = pm * pa / py;
                    ++post.fallback_depth;
                }
            }
        }
    }
    detail::TableView patched{m, &pair_ov, &cluster_ov};
    for (int y = 0; y < C; ++y) jo[y] = detail::joint_under(patched, row, y);
    if (finish(jo)) return post;

    // last resort: the class prior
    std::vector<double> pr(C);
    for (int y = 0; y < C; ++y) pr[y] = m.prior.prob({y});
    finish(pr);
    return post;
}

// Posterior probability of one designated class (for ranking scores).
inline double score_class_probability(const GnbModel& m, const std::vector<int>& row,
                                      int positive_class) {
    if (positive_class < 0 || positive_class >= m.class_cardinality)
        throw std::invalid_argument("score_class_probability: class code out of range");
    return classify(m, row).probs[positive_class];
}

}  // namespace gnb
