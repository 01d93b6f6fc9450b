#pragma once

// Shared builders and brute-force oracles for the test suite.

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gnb/empirical.hpp"
#include "gnb/learn.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"

namespace th {

// Build a DiscreteTable from row-major codes. Column 0..k get names c0..ck,
// the class column is named y.
inline gnb::DiscreteTable make_table(const std::vector<int>& cards,
                                     const std::vector<std::vector<int>>& rows,
                                     int class_column) {
    gnb::DiscreteTable t;
    t.cardinalities = cards;
    t.class_column = class_column;
    t.n_rows = rows.size();
    t.codes.assign(cards.size(), {});
    for (size_t c = 0; c < cards.size(); ++c) {
        t.column_names.push_back(static_cast<int>(c) == class_column ? "y"
                                                                     : "c" + std::to_string(c));
        std::vector<std::string> labels;
        for (int v = 0; v < cards[c]; ++v) labels.push_back("v" + std::to_string(v));
        t.code_labels.push_back(labels);
        for (const auto& row : rows) t.codes[c].push_back(row[c]);
    }
    return t;
}

inline gnb::DiscreteTable random_table(std::mt19937& rng, size_t n_rows,
                                       const std::vector<int>& cards, int class_column) {
    std::vector<std::vector<int>> rows(n_rows, std::vector<int>(cards.size()));
    for (auto& row : rows)
        for (size_t c = 0; c < cards.size(); ++c)
            row[c] = static_cast<int>(rng() % static_cast<unsigned>(cards[c]));
    return make_table(cards, rows, class_column);
}

// one row per cell of the full grid: the empirical joint is an exact
// independent uniform product
inline gnb::DiscreteTable factorial_table(const std::vector<int>& cards, int class_column) {
    std::vector<std::vector<int>> rows;
    std::vector<int> cur(cards.size(), 0);
    while (true) {
        rows.push_back(cur);
        size_t c = 0;
        while (c < cards.size()) {
            if (++cur[c] < cards[c]) break;
            cur[c] = 0;
            ++c;
        }
        if (c == cards.size()) break;
    }
    return make_table(cards, rows, class_column);
}

// every assignment of the given cardinalities, in odometer order
inline std::vector<std::vector<int>> all_assignments(const std::vector<int>& cards) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(cards.size(), 0);
    while (true) {
        out.push_back(cur);
        size_t c = cards.size();
        while (c > 0) {
            --c;
            if (++cur[c] < cards[c]) break;
            cur[c] = 0;
            if (c == 0) return out;
        }
    }
}

inline std::string write_temp_file(const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "gnb_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
}

// all labeled trees on vertices 0..n-1 via Prufer sequences (n >= 2)
inline std::vector<std::vector<std::pair<int, int>>> all_labeled_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> trees;
    if (n == 2) {
        trees.push_back({{0, 1}});
        return trees;
    }
    std::vector<int> seq(n - 2, 0);
    while (true) {
        // decode one Prufer sequence
        std::vector<int> degree(n, 1);
        for (int v : seq) degree[v]++;
        std::vector<std::pair<int, int>> edges;
        std::set<int> leaves;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) leaves.insert(v);
        std::vector<int> rest = seq;
        for (int v : rest) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.push_back({std::min(leaf, v), std::max(leaf, v)});
            if (--degree[v] == 1) leaves.insert(v);
        }
        int a = *leaves.begin(), b = *std::next(leaves.begin());
        edges.push_back({std::min(a, b), std::max(a, b)});
        trees.push_back(edges);
        // next sequence
        int c = static_cast<int>(seq.size());
        while (c > 0) {
            --c;
            if (++seq[c] < n) break;
            seq[c] = 0;
            if (c == 0) return trees;
        }
    }
}

// weight of a cherry tree given by its undirected edge set, via the
// order-free form: sum of triple contents minus (degree-1)-weighted pair
// contents
inline double tree_weight(const gnb::DiscreteTable& t,
                          const std::vector<std::pair<int, int>>& edges,
                          const std::vector<int>& attrs) {
    const int y = t.class_column;
    std::map<int, int> degree;
    double w = 0;
    for (auto [u, v] : edges) {
        int cu = attrs[u], cv = attrs[v];
        w += gnb::info_content(gnb::estimate(t, {y, std::min(cu, cv), std::max(cu, cv)}));
        degree[cu]++;
        degree[cv]++;
    }
    for (auto [col, deg] : degree)
        if (deg > 1) w -= (deg - 1) * gnb::info_content(gnb::estimate(t, {y, col}));
    return w;
}

// exhaustive maximum arborescence: every vertex >= 1 picks one incoming
// edge; keep the best acyclic combination
inline double brute_max_arborescence(const gnb::ScoreMatrix& S, bool& feasible) {
    const int n = S.size();
    std::vector<std::vector<int>> choices(n);
    for (int dst = 1; dst < n; ++dst)
        for (int src = 0; src < n; ++src)
            if (src != dst && S.has(src, dst)) choices[dst].push_back(src);
    for (int dst = 1; dst < n; ++dst)
        if (choices[dst].empty()) {
            feasible = false;
            return 0;
        }
    std::vector<size_t> pick(n, 0);
    double best = 0;
    bool any = false;
    while (true) {
        // check: following parents from every vertex must reach the root
        bool ok = true;
        for (int v = 1; v < n && ok; ++v) {
            int u = v, steps = 0;
            while (u != 0 && steps <= n) {
                u = choices[u][pick[u]];
                ++steps;
            }
            if (u != 0) ok = false;
        }
        if (ok) {
            double w = 0;
            for (int v = 1; v < n; ++v) w += S.at(choices[v][pick[v]], v);
            if (!any || w > best) best = w;
            any = true;
        }
        int c = n;
        bool done = false;
        while (c > 1) {
            --c;
            if (++pick[c] < choices[c].size()) break;
            pick[c] = 0;
            if (c == 1) done = true;
        }
        if (done) break;
    }
    feasible = any;
    return best;
}

}  // namespace th
