#pragma once

// Empirical (maximum-likelihood) distributions over discrete variables and
// the information-theoretic quantities built on them. All logarithms are
// base 2; cells with zero probability never appear in the support.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/structure.hpp"
#include "gnb/table.hpp"

namespace gnb {

using VarSet = std::vector<int>;   // column indices, distinct, in key order

class EmpiricalDist {
public:
    EmpiricalDist() = default;
    EmpiricalDist(VarSet vars, std::map<std::vector<int>, double> cells)
        : vars_(std::move(vars)), cells_(std::move(cells)) {}

    const VarSet& vars() const { return vars_; }
    const std::map<std::vector<int>, double>& cells() const { return cells_; }

    // probability of one assignment in vars() order; absent cell -> 0
    double prob(const std::vector<int>& key) const {
        auto it = cells_.find(key);
        return it == cells_.end() ? 0.0 : it->second;
    }

    double total() const {
        double s = 0;
        for (const auto& [k, p] : cells_) {
            (void)k;
            s += p;
        }
        return s;
    }

private:
    VarSet vars_;
    std::map<std::vector<int>, double> cells_;
};

// Relative frequencies of the value combinations of `vars` in the table.
inline EmpiricalDist estimate(const DiscreteTable& t, const VarSet& vars) {
    if (t.n_rows == 0) throw std::invalid_argument("estimate: empty table");
    for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] < 0 || vars[i] >= static_cast<int>(t.codes.size()))
            throw std::invalid_argument("estimate: variable index out of range");
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) throw std::invalid_argument("estimate: duplicate variable");
    }
    std::map<std::vector<int>, double> counts;
    std::vector<int> key(vars.size());
    for (size_t r = 0; r < t.n_rows; ++r) {
        for (size_t i = 0; i < vars.size(); ++i) {
            int code = t.codes[vars[i]][r];
            if (code < 0)
                throw std::logic_error("estimate: unseen code in training data");
            key[i] = code;
        }
        counts[key] += 1.0;
    }
    const double n = static_cast<double>(t.n_rows);
    for (auto& [k, c] : counts) {
        (void)k;
        c /= n;
    }
    return EmpiricalDist(vars, std::move(counts));
}

// Sum out every variable not listed in `sub` (each must occur in dist.vars()).
inline EmpiricalDist marginalize(const EmpiricalDist& dist, const VarSet& sub) {
    std::vector<size_t> pos;
    for (int v : sub) {
        size_t i = 0;
        while (i < dist.vars().size() && dist.vars()[i] != v) ++i;
        if (i == dist.vars().size())
            throw std::invalid_argument("marginalize: variable " + std::to_string(v) +
                                        " not in distribution");
        pos.push_back(i);
    }
    std::map<std::vector<int>, double> cells;
    std::vector<int> key(sub.size());
    for (const auto& [k, p] : dist.cells()) {
        for (size_t i = 0; i < pos.size(); ++i) key[i] = k[pos[i]];
        cells[key] += p;
    }
    return EmpiricalDist(sub, std::move(cells));
}

// H(X) = -sum p log2 p over the support
inline double entropy(const EmpiricalDist& dist) {
    double h = 0;
    for (const auto& [k, p] : dist.cells()) {
        (void)k;
        if (p > 0) h -= p * std::log2(p);
    }
    return h;
}

// Total correlation: sum p(x) log2( p(x) / prod_i p_i(x_i) ); equals mutual
// information for two variables and measures total dependence in general.
inline double info_content(const EmpiricalDist& dist) {
    std::vector<EmpiricalDist> marg;
    for (int v : dist.vars()) marg.push_back(marginalize(dist, {v}));
    double info = 0;
    for (const auto& [k, p] : dist.cells()) {
        if (p <= 0) continue;
        double denom = 1.0;
        for (size_t i = 0; i < k.size(); ++i) denom *= marg[i].prob({k[i]});
        info += p * std::log2(p / denom);
    }
    return info;
}

// KL(p || q) in bits; +infinity when q vanishes somewhere p does not.
inline double kl_divergence(const EmpiricalDist& p,
                            const std::function<double(const std::vector<int>&)>& q) {
    double kl = 0;
    for (const auto& [k, pv] : p.cells()) {
        if (pv <= 0) continue;
        double qv = q(k);
        if (qv <= 0) return std::numeric_limits<double>::infinity();
        kl += pv * std::log2(pv / qv);
    }
    return kl;
}

// Weight of the naive Bayes approximation: sum_i I(Y; X_i).
inline double structure_weight_nb(const DiscreteTable& t) {
    if (t.class_column < 0) throw std::invalid_argument("structure_weight_nb: no class column");
    double w = 0;
    for (int a : t.attributes()) w += info_content(estimate(t, {t.class_column, a}));
    return w;
}

// Weight of a cherry-tree approximation: the first cluster contributes its
// full information content, each later one its content minus the separator's.
inline double structure_weight_gnb(const DiscreteTable& t, const GnbStructure& s) {
    auto bad = validate(s, static_cast<int>(t.codes.size()));
    if (!bad.empty()) throw std::invalid_argument("structure_weight_gnb: " + bad.front());
    const int y = s.class_index;
    double w = info_content(estimate(t, {y, s.order[0], s.order[1]}));
    for (size_t k = 2; k < s.order.size(); ++k) {
        int a = s.order[k];
        int m = s.mother.at(a);
        w += info_content(estimate(t, {y, m, a})) - info_content(estimate(t, {y, m}));
    }
    return w;
}

}  // namespace gnb
