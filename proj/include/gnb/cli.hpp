#pragma once

// Command implementations behind the CLI front end. Each command takes a
// RunConfig, reads one dataset, writes deterministic JSON/CSV artifacts into
// the output directory and prints a human-readable summary to stdout.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/featsel.hpp"
#include "gnb/json_io.hpp"
#include "gnb/learn.hpp"
#include "gnb/metrics.hpp"
#include "gnb/model.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"
#include "gnb/util.hpp"

namespace gnb {

// bad flag values / flag combinations (exit code 1)
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string data_path;
    std::string class_column;
    std::string positive_label;
    std::string algo = "gnb-a";           // evaluate: comma list or "all"
    double test_fraction = 0.15;
    int runs = 5;
    uint64_t seed = 0;
    std::string out_dir = "out";
    std::vector<std::string> missing;     // markers added to the default set
    std::vector<std::string> join_specs;  // "a,b=c" class relabelings
    std::vector<std::string> drop_cols;
};

namespace detail {

inline JoinGroup parse_join_spec(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq + 1 == spec.size() || eq == 0)
        throw usage_error("--join-classes expects \"v1,v2,...=target\", got \"" + spec + "\"");
    JoinGroup g;
    g.target = spec.substr(eq + 1);
    std::string sources = spec.substr(0, eq);
    size_t start = 0;
    while (true) {
        size_t comma = sources.find(',', start);
        std::string v = sources.substr(start, comma - start);
        if (v.empty()) throw usage_error("--join-classes: empty source value in \"" + spec + "\"");
        g.sources.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return g;
}

inline std::vector<std::string> parse_algo_list(const std::string& algo) {
    static const std::vector<std::string> known = {"gnb-a", "gnb-o", "nb", "tan"};
    if (algo == "all") return known;
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= algo.size()) {
        size_t comma = algo.find(',', start);
        std::string a = algo.substr(start, comma - start);
        if (std::find(known.begin(), known.end(), a) == known.end())
            throw usage_error("unknown algorithm '" + a +
                              "' (expected gnb-a, gnb-o, nb, tan or all)");
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline void check_common(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw usage_error("--data is required");
    if (cfg.class_column.empty()) throw usage_error("--class-col is required");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw usage_error("--test-frac must lie strictly between 0 and 1");
    if (cfg.runs < 1) throw usage_error("--runs must be at least 1");
}

}  // namespace detail

struct Prepared {
    RawTable raw;
    DiscretizationSpec spec;
    DiscreteTable table;
};

// Shared input pipeline: load, drop columns, relabel classes, discretize.
inline Prepared prepare(const RunConfig& cfg) {
    std::set<std::string> markers = default_missing_markers();
    markers.insert(cfg.missing.begin(), cfg.missing.end());
    Prepared p;
    p.raw = load_csv(cfg.data_path, cfg.class_column, markers);
    if (!cfg.drop_cols.empty()) p.raw = drop_columns(p.raw, cfg.drop_cols);
    if (!cfg.join_specs.empty()) {
        std::vector<JoinGroup> groups;
        for (const auto& s : cfg.join_specs) groups.push_back(detail::parse_join_spec(s));
        join_class_values(p.raw, groups);
    }
    p.spec = fit_discretization(p.raw);
    p.table = apply_discretization(p.raw, p.spec, cfg.class_column).table;
    return p;
}

namespace detail {

inline int positive_code(const DiscreteTable& t, const std::string& label) {
    const auto& labels = t.code_labels[t.class_column];
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    std::string seen;
    for (const auto& l : labels) seen += (seen.empty() ? "" : ", ") + l;
    throw data_error("positive class '" + label + "' not among class values (" + seen + ")");
}

struct LearnedModel {
    std::string algo;
    bool is_nb = false;
    GnbStructure s;
    NbStructure nb;
    LearnTrace trace;   // empty for nb
    double weight = 0;  // structure weight in bits
};

inline LearnedModel learn_by(const std::string& algo, const DiscreteTable& t) {
    if (algo != "nb" && t.n_attributes() < 2)
        throw data_error("dataset must have at least two attribute columns for " + algo);
    LearnedModel lm;
    lm.algo = algo;
    if (algo == "gnb-a") {
        auto [s, trace] = learn_gnb_a(t);
        lm.s = s;
        lm.trace = trace;
        lm.weight = trace.back().cumulative;
    } else if (algo == "gnb-o") {
        GnbOResult r = learn_gnb_o(t);
        lm.s = r.structure;
        lm.trace = r.trace;
        lm.weight = r.weight;
    } else if (algo == "tan") {
        lm.s = learn_tan(t);
        lm.trace = trace_for(t, lm.s);
        lm.weight = lm.trace.back().cumulative;
    } else if (algo == "nb") {
        lm.is_nb = true;
        lm.nb = learn_nb(t);
        lm.weight = structure_weight_nb(t);
    } else {
        throw usage_error("unknown algorithm '" + algo + "' (expected gnb-a, gnb-o, nb or tan)");
    }
    return lm;
}

inline GnbModel fit_learned(const LearnedModel& lm, const DiscreteTable& train) {
    return lm.is_nb ? fit(train, lm.nb) : fit(train, lm.s);
}

// metrics averaged over runs, counts summed, AUC over the runs where defined
inline EvalReport mean_report(const std::vector<EvalReport>& runs) {
    EvalReport m;
    double acc = 0, prec = 0, rec = 0, f1 = 0, auc = 0;
    int auc_runs = 0;
    for (const auto& e : runs) {
        m.n += e.n;
        m.cm.tp += e.cm.tp;
        m.cm.fp += e.cm.fp;
        m.cm.fn += e.cm.fn;
        m.cm.tn += e.cm.tn;
        acc += e.accuracy;
        prec += e.precision;
        rec += e.recall;
        f1 += e.f1;
        if (e.auc) {
            auc += *e.auc;
            ++auc_runs;
        }
    }
    const double n = static_cast<double>(runs.size());
    m.accuracy = acc / n;
    m.precision = prec / n;
    m.recall = rec / n;
    m.f1 = f1 / n;
    if (auc_runs > 0) m.auc = auc / auc_runs;
    return m;
}

inline std::string out_path(const RunConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / file).string();
}

inline std::string importance_csv(const std::vector<std::string>& names,
                                  const ImportanceTable& rows) {
    std::string csv = "rank,attribute_index,attribute,mother_index,mother,increment,cumulative\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.rank) + "," + std::to_string(r.attribute) + "," +
               csv_field(names[r.attribute]) + "," + std::to_string(r.mother) + "," +
               csv_field(names[r.mother]) + "," + format_double(r.increment) + "," +
               format_double(r.cumulative) + "\n";
    }
    return csv;
}

inline void print_structure(std::ostream& os, const LearnedModel& lm,
                            const std::vector<std::string>& names, const std::string& class_name) {
    if (lm.is_nb) {
        os << "attributes:";
        for (int a : lm.nb.attributes) os << " " << names[a];
        os << "\n";
    } else {
        os << "construction order (class, mother, attribute):\n";
        int rank = 1;
        for (const auto& e : lm.trace) {
            os << "  " << rank++ << ". (" << class_name << ", " << names[e.mother] << ", "
               << names[e.attribute] << ")  +" << format_double(e.increment) << " bits\n";
        }
    }
    os << "structure weight: " << format_double(lm.weight) << " bits\n";
}

}  // namespace detail

// ------------------------------------------------------------------- train

inline int cmd_train(const RunConfig& cfg, std::ostream& os = std::cout) {
    detail::check_common(cfg);
    auto algos = detail::parse_algo_list(cfg.algo);
    if (algos.size() != 1) throw usage_error("train expects exactly one --algo");
    Prepared p = prepare(cfg);
    detail::LearnedModel lm = detail::learn_by(algos[0], p.table);
    GnbModel model = detail::fit_learned(lm, p.table);
    model.discretization = p.spec;

    os << "algorithm: " << lm.algo << "\n";
    os << "rows: " << p.table.n_rows << " (dropped " << p.raw.dropped_rows
       << " incomplete), attributes: " << p.table.n_attributes() << ", class: "
       << cfg.class_column << "\n";
    detail::print_structure(os, lm, p.table.column_names, cfg.class_column);

    const std::string model_path = detail::out_path(cfg, "model.json");
    write_text_file(model_path, model_to_json(model).dump(2) + "\n");
    os << "wrote " << model_path << "\n";

    const std::string imp_path = detail::out_path(cfg, "importance.csv");
    write_text_file(imp_path, detail::importance_csv(p.table.column_names,
                                                     stage1_scores(lm.trace)));
    os << "wrote " << imp_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& os = std::cout) {
    detail::check_common(cfg);
    if (cfg.positive_label.empty()) throw usage_error("--positive is required");
    auto algos = detail::parse_algo_list(cfg.algo);
    Prepared p = prepare(cfg);
    const int positive = detail::positive_code(p.table, cfg.positive_label);

    ordered_json doc;
    doc["schema"] = "gnb-evaluation";
    doc["schema_version"] = 1;
    doc["class_column"] = cfg.class_column;
    doc["positive"] = cfg.positive_label;
    doc["test_fraction"] = cfg.test_fraction;
    doc["runs"] = cfg.runs;
    doc["base_seed"] = cfg.seed;
    ordered_json jalgos = ordered_json::array();

    std::string csv = "algorithm,run,seed," + report_csv_header() + "\n";
    os << "algorithm  accuracy  precision  recall  f1  auc (mean over " << cfg.runs
       << " runs)\n";

    for (const auto& algo : algos) {
        detail::LearnedModel lm = detail::learn_by(algo, p.table);
        std::vector<EvalReport> reports;
        ordered_json jruns = ordered_json::array();
        ordered_json jseeds = ordered_json::array();
        for (int r = 0; r < cfg.runs; ++r) {
            const uint64_t seed = cfg.seed + static_cast<uint64_t>(r);
            Split sp = split(p.table, cfg.test_fraction, seed);
            GnbModel model = detail::fit_learned(lm, sp.train);
            EvalReport rep = evaluate_on(model, sp.test, positive);
            csv += algo + "," + std::to_string(r) + "," + std::to_string(seed) + "," +
                   report_csv_row(rep) + "\n";
            jruns.push_back(report_to_json(rep));
            jseeds.push_back(seed);
            reports.push_back(std::move(rep));
        }
        EvalReport mean = detail::mean_report(reports);
        csv += algo + ",mean,," + report_csv_row(mean) + "\n";
        ordered_json ja;
        ja["algorithm"] = algo;
        ja["structure_weight"] = lm.weight;
        ja["seeds"] = jseeds;
        ja["runs"] = jruns;
        ja["mean"] = report_to_json(mean);
        jalgos.push_back(std::move(ja));
        os << algo << "  " << format_double(mean.accuracy) << "  "
           << format_double(mean.precision) << "  " << format_double(mean.recall) << "  "
           << format_double(mean.f1) << "  "
           << (mean.auc ? format_double(*mean.auc) : std::string("-")) << "\n";
    }
    doc["algorithms"] = jalgos;

    const std::string json_path = detail::out_path(cfg, "evaluation.json");
    write_text_file(json_path, doc.dump(2) + "\n");
    const std::string csv_path = detail::out_path(cfg, "evaluation.csv");
    write_text_file(csv_path, csv);
    os << "wrote " << json_path << "\n" << "wrote " << csv_path << "\n";
    return 0;
}

// ------------------------------------------------------------------ curves

inline int cmd_curves(const RunConfig& cfg, std::ostream& os = std::cout) {
    detail::check_common(cfg);
    if (cfg.positive_label.empty()) throw usage_error("--positive is required");
    auto algos = detail::parse_algo_list(cfg.algo);
    if (algos.size() != 1 || (algos[0] != "gnb-a" && algos[0] != "gnb-o"))
        throw usage_error("curves expects --algo gnb-a or gnb-o");
    Prepared p = prepare(cfg);
    const int positive = detail::positive_code(p.table, cfg.positive_label);

    detail::LearnedModel lm = detail::learn_by(algos[0], p.table);
    CurveResult curve = stage2_curve(p.table, lm.s, cfg.runs, cfg.test_fraction, cfg.seed,
                                     positive);

    const auto& names = p.table.column_names;
    std::string agg = "n_triplets,prefix_size,attribute_index,attribute," +
                      report_csv_header() + "\n";
    for (const auto& pt : curve.points) {
        const int added = lm.s.order[pt.prefix_size - 1];
        agg += std::to_string(pt.n_triplets) + "," + std::to_string(pt.prefix_size) + "," +
               std::to_string(added) + "," + csv_field(names[added]) + "," +
               report_csv_row(pt.mean) + "\n";
    }
    std::string runs = "run,seed,n_triplets,prefix_size," + report_csv_header() + "\n";
    for (size_t r = 0; r < curve.per_run.size(); ++r)
        for (size_t i = 0; i < curve.per_run[r].size(); ++i)
            runs += std::to_string(r) + "," + std::to_string(curve.seeds[r]) + "," +
                    std::to_string(i + 1) + "," + std::to_string(i + 2) + "," +
                    report_csv_row(curve.per_run[r][i]) + "\n";

    os << "algorithm: " << lm.algo << ", prefixes 2.." << lm.s.order.size() << ", "
       << cfg.runs << " runs\n";
    for (const auto& pt : curve.points)
        os << "  " << pt.n_triplets << " triplets: accuracy "
           << format_double(pt.mean.accuracy) << "\n";

    const std::string agg_path = detail::out_path(cfg, "curve.csv");
    write_text_file(agg_path, agg);
    const std::string runs_path = detail::out_path(cfg, "curve_runs.csv");
    write_text_file(runs_path, runs);
    os << "wrote " << agg_path << "\n" << "wrote " << runs_path << "\n";
    return 0;
}

// ----------------------------------------------------------------- predict

// Encode one raw CSV against the model's schema by column name. Missing
// markers, unparseable numerics and unseen categories all code to -1, which
// the classifier treats as a zero-probability lookup (fallback path).
inline int cmd_predict(const std::string& model_path, const RunConfig& cfg,
                       std::ostream& os = std::cout) {
    if (model_path.empty()) throw usage_error("--model is required");
    if (cfg.data_path.empty()) throw usage_error("--data is required");
    GnbModel model = model_from_json(read_json_file(model_path));

    std::set<std::string> markers = default_missing_markers();
    markers.insert(cfg.missing.begin(), cfg.missing.end());
    CsvData csv = parse_csv(cfg.data_path);

    // map every attribute the model uses onto an input column, by name
    std::map<int, int> input_col;  // model column -> csv column
    std::vector<std::string> problems;
    for (int a : model.attributes()) {
        const std::string& name = model.column_names[a];
        int found = -1;
        for (size_t c = 0; c < csv.header.size(); ++c)
            if (csv.header[c] == name) found = static_cast<int>(c);
        if (found < 0)
            problems.push_back("missing column '" + name + "'");
        else
            input_col[a] = found;
        if (!model.discretization.find(name))
            problems.push_back("model lacks a discretization rule for '" + name + "'");
    }
    if (!problems.empty()) {
        std::string all;
        for (const auto& s : problems) all += (all.empty() ? "" : "; ") + s;
        throw data_error("input does not match the model schema: " + all);
    }

    std::string out = "row,predicted";
    for (const auto& label : model.class_labels) out += "," + csv_field("p_" + label);
    out += ",used_fallback,fallback_depth\n";

    size_t fallback_rows = 0;
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        std::vector<int> row(model.column_names.size(), 0);
        for (int a : model.attributes()) {
            const std::string& cell = csv.rows[r][input_col[a]];
            const ColumnRule* rule = model.discretization.find(model.column_names[a]);
            int code = -1;
            if (!markers.count(cell)) {
                double v = 0;
                const bool is_num = detail::parse_double(cell, v);
                if (rule->numeric == is_num) code = encode_value(*rule, v, cell, is_num);
            }
            row[a] = code;
        }
        Posterior post = classify(model, row);
        if (post.used_fallback) ++fallback_rows;
        out += std::to_string(r + 1) + "," + csv_field(model.class_labels[post.predicted]);
        for (double p : post.probs) out += "," + format_double(p);
        out += std::string(",") + (post.used_fallback ? "true" : "false") + "," +
               std::to_string(post.fallback_depth) + "\n";
    }

    const std::string path = detail::out_path(cfg, "predictions.csv");
    write_text_file(path, out);
    os << "predicted " << csv.rows.size() << " rows (" << fallback_rows
       << " via fallback)\n";
    os << "wrote " << path << "\n";
    return 0;
}

// -------------------------------------------------------------- discretize

inline int cmd_discretize(const RunConfig& cfg, std::ostream& os = std::cout) {
    detail::check_common(cfg);
    Prepared p = prepare(cfg);

    os << "rows: " << p.table.n_rows << " (dropped " << p.raw.dropped_rows
       << " incomplete)\n";
    for (size_t c = 0; c < p.spec.columns.size(); ++c) {
        const ColumnRule& rule = p.spec.columns[c];
        os << "  " << rule.name << ": " << (rule.binned ? "binned" : "passthrough") << ", "
           << rule.cardinality() << " codes\n";
    }

    const std::string spec_path = detail::out_path(cfg, "discretization.json");
    write_text_file(spec_path, discretization_to_json(p.spec).dump(2) + "\n");

    std::string csv;
    for (size_t c = 0; c < p.table.column_names.size(); ++c)
        csv += (c ? "," : "") + csv_field(p.table.column_names[c]);
    csv += "\n";
    for (size_t r = 0; r < p.table.n_rows; ++r) {
        for (size_t c = 0; c < p.table.codes.size(); ++c)
            csv += (c ? "," : "") + std::to_string(p.table.codes[c][r]);
        csv += "\n";
    }
    const std::string csv_path = detail::out_path(cfg, "discretized.csv");
    write_text_file(csv_path, csv);
    os << "wrote " << spec_path << "\n" << "wrote " << csv_path << "\n";
    return 0;
}

}  // namespace gnb
