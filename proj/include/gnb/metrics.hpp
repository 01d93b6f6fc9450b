#pragma once

// Binary evaluation metrics against a designated positive class.
// Degenerate ratios (0/0) are reported as 0; a ranking over a single class
// has no ROC curve and yields an empty optional.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gnb {

struct ConfusionMatrix {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    long total() const { return tp + fp + fn + tn; }
};

inline ConfusionMatrix confusion(const std::vector<int>& actual,
                                 const std::vector<int>& predicted, int positive) {
    if (actual.size() != predicted.size())
        throw std::invalid_argument("confusion: actual/predicted size mismatch");
    if (actual.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (size_t i = 0; i < actual.size(); ++i) {
        const bool a = actual[i] == positive, p = predicted[i] == positive;
        if (a && p) ++cm.tp;
        else if (!a && p) ++cm.fp;
        else if (a && !p) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

struct Scores {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
};

inline Scores scores(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("scores: empty confusion matrix");
    Scores s;
    s.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    s.precision = cm.tp + cm.fp > 0 ? static_cast<double>(cm.tp) / (cm.tp + cm.fp) : 0.0;
    s.recall = cm.tp + cm.fn > 0 ? static_cast<double>(cm.tp) / (cm.tp + cm.fn) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall)
                                      : 0.0;
    return s;
}

// Area under the ROC curve by the rank statistic: the probability that a
// random positive outscores a random negative, ties counting half. Average
// ranks handle tied scores exactly.
inline std::optional<double> roc_auc(const std::vector<int>& actual,
                                     const std::vector<double>& score, int positive) {
    if (actual.size() != score.size())
        throw std::invalid_argument("roc_auc: actual/score size mismatch");
    const size_t n = actual.size();
    size_t pos = 0;
    for (int a : actual)
        if (a == positive) ++pos;
    const size_t neg = n - pos;
    if (pos == 0 || neg == 0) return std::nullopt;

    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return score[a] < score[b]; });

    double rank_sum_pos = 0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && score[idx[j]] == score[idx[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t k = i; k < j; ++k)
            if (actual[idx[k]] == positive) rank_sum_pos += avg_rank;
        i = j;
    }
    const double p = static_cast<double>(pos);
    return (rank_sum_pos - p * (p + 1) / 2.0) / (p * static_cast<double>(neg));
}

}  // namespace gnb
