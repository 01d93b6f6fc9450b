#pragma once

// Feature importance and per-prefix performance curves. Stage one ranks the
// triplets by their weight increments as recorded during structure learning;
// stage two re-evaluates every prefix of the structure over repeated
// train/test splits.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gnb/learn.hpp"
#include "gnb/metrics.hpp"
#include "gnb/model.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"

namespace gnb {

struct EvalReport {
    size_t n = 0;
    ConfusionMatrix cm;
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    std::optional<double> auc;
};

// Classify every row of `test` and score against the designated positive
// class code.
inline EvalReport evaluate_on(const GnbModel& m, const DiscreteTable& test, int positive) {
    if (test.n_rows == 0) throw std::invalid_argument("evaluate_on: empty test table");
    std::vector<int> actual, predicted;
    std::vector<double> score;
    for (size_t r = 0; r < test.n_rows; ++r) {
        std::vector<int> row = test.row(r);
        Posterior p = classify(m, row);
        actual.push_back(row[m.class_column]);
        predicted.push_back(p.predicted);
        score.push_back(p.probs[positive]);
    }
    EvalReport rep;
    rep.n = test.n_rows;
    rep.cm = confusion(actual, predicted, positive);
    Scores s = scores(rep.cm);
    rep.accuracy = s.accuracy;
    rep.precision = s.precision;
    rep.recall = s.recall;
    rep.f1 = s.f1;
    rep.auc = roc_auc(actual, score, positive);
    return rep;
}

struct ImportanceRow {
    int rank;          // 1-based, trace order
    int attribute;
    int mother;
    double increment;
    double cumulative;
};
using ImportanceTable = std::vector<ImportanceRow>;

inline ImportanceTable stage1_scores(const LearnTrace& trace) {
    ImportanceTable out;
    for (size_t i = 0; i < trace.size(); ++i)
        out.push_back({static_cast<int>(i) + 1, trace[i].attribute, trace[i].mother,
                       trace[i].increment, trace[i].cumulative});
    return out;
}

struct CurvePoint {
    int n_triplets = 0;      // prefix size - 1
    size_t prefix_size = 0;  // attributes in the prefix
    EvalReport mean;         // metrics averaged over runs (counts summed)
};

struct CurveResult {
    std::vector<CurvePoint> points;               // ascending prefix size
    std::vector<std::vector<EvalReport>> per_run; // [run][point]
    std::vector<uint64_t> seeds;                  // one per run
};

// For every run: split the table, refit the parameters of each structure
// prefix on the train side, and score it on the test side. The structure
// itself is fixed; only the tables are re-estimated per split.
inline CurveResult stage2_curve(const DiscreteTable& table, const GnbStructure& s, int n_runs,
                                double test_fraction, uint64_t base_seed, int positive) {
    auto bad = validate(s, static_cast<int>(table.codes.size()));
    if (!bad.empty()) throw std::invalid_argument("stage2_curve: " + bad.front());
    if (n_runs < 1) throw std::invalid_argument("stage2_curve: need at least one run");

    CurveResult res;
    for (int r = 0; r < n_runs; ++r) res.seeds.push_back(base_seed + static_cast<uint64_t>(r));

    const size_t m = s.order.size();
    for (int r = 0; r < n_runs; ++r) {
        Split sp = split(table, test_fraction, res.seeds[r]);
        std::vector<EvalReport> run_reports;
        for (size_t k = 2; k <= m; ++k) {
            GnbModel model = fit(sp.train, prefix(s, k));
            run_reports.push_back(evaluate_on(model, sp.test, positive));
        }
        res.per_run.push_back(std::move(run_reports));
    }

    for (size_t pi = 0; pi + 2 <= m; ++pi) {
        CurvePoint pt;
        pt.prefix_size = pi + 2;
        pt.n_triplets = static_cast<int>(pi) + 1;
        double acc = 0, prec = 0, rec = 0, f1 = 0, auc = 0;
        int auc_runs = 0;
        for (int r = 0; r < n_runs; ++r) {
            const EvalReport& e = res.per_run[r][pi];
            pt.mean.n += e.n;
            pt.mean.cm.tp += e.cm.tp;
            pt.mean.cm.fp += e.cm.fp;
            pt.mean.cm.fn += e.cm.fn;
            pt.mean.cm.tn += e.cm.tn;
            acc += e.accuracy;
            prec += e.precision;
            rec += e.recall;
            f1 += e.f1;
            if (e.auc) {
                auc += *e.auc;
                ++auc_runs;
            }
        }
        pt.mean.accuracy = acc / n_runs;
        pt.mean.precision = prec / n_runs;
        pt.mean.recall = rec / n_runs;
        pt.mean.f1 = f1 / n_runs;
        if (auc_runs > 0) pt.mean.auc = auc / auc_runs;
        res.points.push_back(pt);
    }
    return res;
}

}  // namespace gnb
