#pragma once

// JSON serialization for structures, discretization specs, fitted models and
// evaluation reports. Documents carry schema/schema_version fields and use
// insertion-ordered objects so identical inputs dump to identical bytes.

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnb/featsel.hpp"
#include "gnb/model.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"
#include "gnb/util.hpp"

namespace gnb {

using ordered_json = nlohmann::ordered_json;

// ------------------------------------------------------------------- files

inline ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": invalid JSON: " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path);
    out << content;
    if (!out) throw data_error("write failed: " + path);
}

namespace detail {

// field accessor that turns malformed documents into data errors
template <typename T>
T get_field(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw data_error("missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw data_error("field '" + key + "' has the wrong type");
    }
}

inline void check_schema(const ordered_json& j, const std::string& expected) {
    if (get_field<std::string>(j, "schema") != expected)
        throw data_error("document is not a '" + expected + "' file");
    if (get_field<int>(j, "schema_version") != 1)
        throw data_error("unsupported schema_version (expected 1)");
}

}  // namespace detail

// --------------------------------------------------------------- structure

inline ordered_json structure_to_json(const GnbStructure& s) {
    ordered_json j;
    j["class_index"] = s.class_index;
    j["order"] = s.order;
    ordered_json mother = ordered_json::object();
    for (int a : s.order) {
        auto it = s.mother.find(a);
        if (it != s.mother.end()) mother[std::to_string(a)] = it->second;
    }
    j["mother"] = mother;
    return j;
}

inline GnbStructure structure_from_json(const ordered_json& j) {
    GnbStructure s;
    s.class_index = detail::get_field<int>(j, "class_index");
    s.order = detail::get_field<std::vector<int>>(j, "order");
    auto mother = detail::get_field<ordered_json>(j, "mother");
    if (!mother.is_object()) throw data_error("field 'mother' has the wrong type");
    for (const auto& [key, value] : mother.items()) {
        size_t pos = 0;
        int attr;
        try {
            attr = std::stoi(key, &pos);
        } catch (const std::exception&) {
            throw data_error("non-integer key '" + key + "' in 'mother'");
        }
        if (pos != key.size()) throw data_error("non-integer key '" + key + "' in 'mother'");
        if (!value.is_number_integer()) throw data_error("field 'mother' has the wrong type");
        s.mother[attr] = value.get<int>();
    }
    return s;
}

// ----------------------------------------------------------- discretization

inline ordered_json discretization_to_json(const DiscretizationSpec& spec) {
    ordered_json j;
    j["schema"] = "gnb-discretization";
    j["schema_version"] = 1;
    ordered_json cols = ordered_json::array();
    for (const auto& c : spec.columns) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["numeric"] = c.numeric;
        jc["coding"] = c.binned ? "binned" : "passthrough";
        if (c.binned) {
            jc["boundaries"] = c.bins.boundaries;
            jc["representatives"] = c.bins.representatives;
            jc["min"] = c.bins.min;
            jc["max"] = c.bins.max;
        } else if (c.numeric) {
            jc["values"] = c.values;
        } else {
            jc["labels"] = c.labels;
        }
        cols.push_back(std::move(jc));
    }
    j["columns"] = cols;
    return j;
}

inline DiscretizationSpec discretization_from_json(const ordered_json& j) {
    detail::check_schema(j, "gnb-discretization");
    auto cols = detail::get_field<ordered_json>(j, "columns");
    if (!cols.is_array()) throw data_error("field 'columns' has the wrong type");
    DiscretizationSpec spec;
    for (const auto& jc : cols) {
        ColumnRule c;
        c.name = detail::get_field<std::string>(jc, "name");
        c.numeric = detail::get_field<bool>(jc, "numeric");
        const auto coding = detail::get_field<std::string>(jc, "coding");
        if (coding == "binned") {
            if (!c.numeric) throw data_error("column '" + c.name + "': binned must be numeric");
            c.binned = true;
            c.bins.boundaries = detail::get_field<std::vector<double>>(jc, "boundaries");
            c.bins.representatives = detail::get_field<std::vector<double>>(jc, "representatives");
            c.bins.min = detail::get_field<double>(jc, "min");
            c.bins.max = detail::get_field<double>(jc, "max");
            if (c.bins.representatives.size() != c.bins.boundaries.size() + 1)
                throw data_error("column '" + c.name + "': representative count mismatch");
        } else if (coding == "passthrough") {
            if (c.numeric)
                c.values = detail::get_field<std::vector<double>>(jc, "values");
            else
                c.labels = detail::get_field<std::vector<std::string>>(jc, "labels");
        } else {
            throw data_error("column '" + c.name + "': unknown coding '" + coding + "'");
        }
        spec.columns.push_back(std::move(c));
    }
    return spec;
}

// ------------------------------------------------------------------- model

namespace detail {

inline ordered_json cells_to_json(const EmpiricalDist& d) {
    ordered_json arr = ordered_json::array();
    for (const auto& [key, p] : d.cells()) {
        ordered_json cell = ordered_json::array();
        for (int code : key) cell.push_back(code);
        cell.push_back(p);
        arr.push_back(std::move(cell));
    }
    return arr;
}

inline EmpiricalDist cells_from_json(VarSet vars, const ordered_json& arr,
                                     const std::string& what) {
    if (!arr.is_array()) throw data_error("table '" + what + "' is not an array");
    std::map<std::vector<int>, double> cells;
    for (const auto& cell : arr) {
        if (!cell.is_array() || cell.size() != vars.size() + 1)
            throw data_error("table '" + what + "': malformed cell");
        std::vector<int> key;
        for (size_t i = 0; i + 1 < cell.size(); ++i) {
            if (!cell[i].is_number_integer())
                throw data_error("table '" + what + "': non-integer code");
            key.push_back(cell[i].get<int>());
        }
        if (!cell.back().is_number())
            throw data_error("table '" + what + "': non-numeric probability");
        if (!cells.emplace(std::move(key), cell.back().get<double>()).second)
            throw data_error("table '" + what + "': duplicate cell");
    }
    return EmpiricalDist(std::move(vars), std::move(cells));
}

}  // namespace detail

inline ordered_json model_to_json(const GnbModel& m) {
    ordered_json j;
    j["schema"] = "gnb-model";
    j["schema_version"] = 1;
    j["kind"] = m.is_nb ? "nb" : "gnb";
    j["columns"] = m.column_names;
    j["class_column"] = m.class_column;
    j["class_cardinality"] = m.class_cardinality;
    j["class_labels"] = m.class_labels;
    j["n_train_rows"] = m.n_train_rows;
    if (m.is_nb)
        j["attributes"] = m.nb.attributes;
    else
        j["structure"] = structure_to_json(m.structure);
    j["class_prior"] = detail::cells_to_json(m.prior);
    ordered_json uni = ordered_json::array();
    ordered_json pairs = ordered_json::array();
    for (const auto& [a, d] : m.univariate)
        uni.push_back({{"attribute", a}, {"cells", detail::cells_to_json(d)}});
    for (const auto& [a, d] : m.pair_table)
        pairs.push_back({{"attribute", a}, {"cells", detail::cells_to_json(d)}});
    j["univariate"] = uni;
    j["pairs"] = pairs;
    if (!m.is_nb) {
        ordered_json clusters = ordered_json::array();
        for (const auto& c : m.structure.clusters())
            clusters.push_back({{"attribute", c.attribute},
                                {"mother", c.mother},
                                {"cells", detail::cells_to_json(m.cluster_table.at(c.attribute))}});
        j["clusters"] = clusters;
    }
    j["discretization"] = discretization_to_json(m.discretization);
    return j;
}

inline GnbModel model_from_json(const ordered_json& j) {
    detail::check_schema(j, "gnb-model");
    GnbModel m;
    const auto kind = detail::get_field<std::string>(j, "kind");
    if (kind != "gnb" && kind != "nb") throw data_error("unknown model kind '" + kind + "'");
    m.is_nb = (kind == "nb");
    m.column_names = detail::get_field<std::vector<std::string>>(j, "columns");
    m.class_column = detail::get_field<int>(j, "class_column");
    m.class_cardinality = detail::get_field<int>(j, "class_cardinality");
    m.class_labels = detail::get_field<std::vector<std::string>>(j, "class_labels");
    m.n_train_rows = detail::get_field<size_t>(j, "n_train_rows");
    const int ncols = static_cast<int>(m.column_names.size());
    if (m.class_column < 0 || m.class_column >= ncols)
        throw data_error("class_column out of range");
    if (m.class_cardinality < 2) throw data_error("class_cardinality must be at least 2");
    if (static_cast<int>(m.class_labels.size()) != m.class_cardinality)
        throw data_error("class_labels size does not match class_cardinality");

    if (m.is_nb) {
        m.nb.class_index = m.class_column;
        m.nb.attributes = detail::get_field<std::vector<int>>(j, "attributes");
        for (int a : m.nb.attributes)
            if (a < 0 || a >= ncols || a == m.class_column)
                throw data_error("attribute column " + std::to_string(a) + " out of range");
    } else {
        m.structure = structure_from_json(detail::get_field<ordered_json>(j, "structure"));
        auto bad = validate(m.structure, ncols);
        if (!bad.empty()) throw data_error("invalid structure: " + bad.front());
        if (m.structure.class_index != m.class_column)
            throw data_error("structure class index does not match class_column");
    }

    m.prior = detail::cells_from_json({m.class_column},
                                      detail::get_field<ordered_json>(j, "class_prior"),
                                      "class_prior");
    auto load_keyed = [&](const char* field, std::map<int, EmpiricalDist>& out, bool with_class) {
        auto arr = detail::get_field<ordered_json>(j, field);
        if (!arr.is_array()) throw data_error(std::string("field '") + field + "' is not an array");
        for (const auto& entry : arr) {
            int a = detail::get_field<int>(entry, "attribute");
            if (a < 0 || a >= ncols || a == m.class_column)
                throw data_error(std::string(field) + ": attribute out of range");
            VarSet vars = with_class ? VarSet{m.class_column, a} : VarSet{a};
            if (!out.emplace(a, detail::cells_from_json(vars,
                                                        detail::get_field<ordered_json>(entry, "cells"),
                                                        field))
                     .second)
                throw data_error(std::string(field) + ": duplicate attribute entry");
        }
    };
    load_keyed("univariate", m.univariate, false);
    load_keyed("pairs", m.pair_table, true);
    for (int a : m.attributes())
        if (!m.univariate.count(a) || !m.pair_table.count(a))
            throw data_error("missing probability table for attribute " + std::to_string(a));

    if (!m.is_nb) {
        auto arr = detail::get_field<ordered_json>(j, "clusters");
        if (!arr.is_array()) throw data_error("field 'clusters' is not an array");
        for (const auto& entry : arr) {
            int a = detail::get_field<int>(entry, "attribute");
            int mo = detail::get_field<int>(entry, "mother");
            auto it = m.structure.mother.find(a);
            if (it == m.structure.mother.end() || it->second != mo)
                throw data_error("clusters: (" + std::to_string(mo) + ", " + std::to_string(a) +
                                 ") is not a cluster of the structure");
            m.cluster_table[a] = detail::cells_from_json({m.class_column, mo, a},
                                                         detail::get_field<ordered_json>(entry, "cells"),
                                                         "clusters");
        }
        for (const auto& c : m.structure.clusters())
            if (!m.cluster_table.count(c.attribute))
                throw data_error("missing cluster table for attribute " +
                                 std::to_string(c.attribute));
    }

    m.discretization =
        discretization_from_json(detail::get_field<ordered_json>(j, "discretization"));
    return m;
}

// ------------------------------------------------------------ eval reports

inline ordered_json report_to_json(const EvalReport& r) {
    ordered_json j;
    j["n"] = r.n;
    j["tp"] = r.cm.tp;
    j["fp"] = r.cm.fp;
    j["fn"] = r.cm.fn;
    j["tn"] = r.cm.tn;
    j["accuracy"] = r.accuracy;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    if (r.auc)
        j["auc"] = *r.auc;
    else
        j["auc"] = nullptr;
    return j;
}

inline std::string report_csv_header() {
    return "n,tp,fp,fn,tn,accuracy,precision,recall,f1,auc";
}

// one CSV row per report; AUC is left empty when undefined (single-class test)
inline std::string report_csv_row(const EvalReport& r) {
    std::string row = std::to_string(r.n) + "," + std::to_string(r.cm.tp) + "," +
                      std::to_string(r.cm.fp) + "," + std::to_string(r.cm.fn) + "," +
                      std::to_string(r.cm.tn) + "," + format_double(r.accuracy) + "," +
                      format_double(r.precision) + "," + format_double(r.recall) + "," +
                      format_double(r.f1) + ",";
    if (r.auc) row += format_double(*r.auc);
    return row;
}

}  // namespace gnb
