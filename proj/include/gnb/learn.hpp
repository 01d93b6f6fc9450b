#pragma once

// Structure learning. GNB-A grows the cherry tree greedily; GNB-O solves a
// maximum-weight arborescence on an auxiliary directed graph and is optimal
// among structures sharing the designated first pair. NB and TAN give the
// reference structures.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gnb/empirical.hpp"
#include "gnb/structure.hpp"
#include "gnb/table.hpp"

namespace gnb {

// Dense directed-edge weights over vertices {0..n-1} (0 is the root slot);
// absent edges carry a presence mask, not a sentinel weight.
class ScoreMatrix {
public:
    explicit ScoreMatrix(int n) : n_(n), w_(n * n, 0.0), has_(n * n, 0) {}

    int size() const { return n_; }
    void set(int src, int dst, double w) {
        w_[idx(src, dst)] = w;
        has_[idx(src, dst)] = 1;
    }
    bool has(int src, int dst) const { return has_[idx(src, dst)] != 0; }
    double at(int src, int dst) const {
        if (!has(src, dst)) throw std::out_of_range("ScoreMatrix: absent edge");
        return w_[idx(src, dst)];
    }

    // vertex ids of the designated first pair (set by build_aux_graph)
    int first = -1;
    int second = -1;

private:
    int idx(int src, int dst) const {
        if (src < 0 || src >= n_ || dst < 0 || dst >= n_)
            throw std::out_of_range("ScoreMatrix: vertex out of range");
        return src * n_ + dst;
    }
    int n_;
    std::vector<double> w_;
    std::vector<uint8_t> has_;
};

struct TraceEntry {
    int attribute;       // column added at this step
    int mother;          // column it attaches to (first entry: the other pair member)
    double increment;    // weight gained by this step
    double cumulative;   // structure weight after this step
};
using LearnTrace = std::vector<TraceEntry>;

namespace detail {

// cached pair/triple information contents keyed by attribute columns
struct InfoCache {
    int y;
    std::vector<int> attrs;
    std::map<int, double> i2;                   // I(Y; X_a)
    std::map<std::pair<int, int>, double> i3;   // total correlation of (Y, X_a, X_b), a < b

    explicit InfoCache(const DiscreteTable& t) {
        if (t.class_column < 0) throw std::invalid_argument("learn: table has no class column");
        y = t.class_column;
        attrs = t.attributes();
        for (int a : attrs) i2[a] = info_content(estimate(t, {y, a}));
        for (size_t i = 0; i < attrs.size(); ++i)
            for (size_t j = i + 1; j < attrs.size(); ++j) {
                int a = attrs[i], b = attrs[j];
                i3[{a, b}] = info_content(estimate(t, {y, a, b}));
            }
    }

    double triple(int a, int b) const { return a < b ? i3.at({a, b}) : i3.at({b, a}); }

    // argmax_{a<b} I(Y,X_a,X_b), ties toward the lexicographically smallest pair
    std::pair<int, int> best_pair() const {
        std::pair<int, int> best{-1, -1};
        double bw = 0;
        for (size_t i = 0; i < attrs.size(); ++i)
            for (size_t j = i + 1; j < attrs.size(); ++j) {
                double w = triple(attrs[i], attrs[j]);
                if (best.first < 0 || w > bw) {
                    best = {attrs[i], attrs[j]};
                    bw = w;
                }
            }
        return best;
    }
};

}  // namespace detail

// Greedy construction: start from the most informative pair, then repeatedly
// attach the attribute/mother combination with the largest weight gain
// I(Y, X_mother, X_new) - I(Y, X_mother). Ties prefer the smaller new
// attribute column, then the smaller mother column.
inline std::pair<GnbStructure, LearnTrace> learn_gnb_a(const DiscreteTable& t) {
    detail::InfoCache info(t);
    if (info.attrs.size() < 2)
        throw std::invalid_argument("learn_gnb_a: need at least two attributes");

    GnbStructure s;
    s.class_index = info.y;
    LearnTrace trace;

    auto [i1, i2] = info.best_pair();
    s.order = {i1, i2};
    s.mother[i2] = i1;
    trace.push_back({i2, i1, info.triple(i1, i2), info.triple(i1, i2)});

    std::set<int> covered{i1, i2};
    std::vector<int> remaining;
    for (int a : info.attrs)
        if (!covered.count(a)) remaining.push_back(a);

    while (!remaining.empty()) {
        int pick = -1, pick_mother = -1;
        double pick_gain = 0;
        for (int k : remaining) {
            for (int m : covered) {
                double gain = info.triple(m, k) - info.i2.at(m);
                if (pick < 0 || gain > pick_gain) {
                    pick = k;
                    pick_mother = m;
                    pick_gain = gain;
                }
            }
        }
        s.order.push_back(pick);
        s.mother[pick] = pick_mother;
        trace.push_back({pick, pick_mother, pick_gain, trace.back().cumulative + pick_gain});
        covered.insert(pick);
        remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    }
    return {s, trace};
}

inline NbStructure learn_nb(const DiscreteTable& t) {
    if (t.class_column < 0) throw std::invalid_argument("learn_nb: table has no class column");
    return NbStructure{t.class_column, t.attributes()};
}

// Auxiliary graph for the arborescence formulation. Vertex 0 stands for the
// class, vertex v >= 1 for the v-th attribute column. The designated first
// pair fixes the only edge leaving the root and the only edge entering the
// second pair member; every other attachment k -> j costs the weight gain of
// adding j under mother k.
inline ScoreMatrix build_aux_graph(const DiscreteTable& t) {
    detail::InfoCache info(t);
    if (info.attrs.size() < 2)
        throw std::invalid_argument("build_aux_graph: need at least two attributes");
    const int d = static_cast<int>(info.attrs.size());
    auto vertex_of = [&](int col) {
        return static_cast<int>(std::find(info.attrs.begin(), info.attrs.end(), col) -
                                info.attrs.begin()) + 1;
    };

    auto [c1, c2] = info.best_pair();
    ScoreMatrix S(d + 1);
    S.first = vertex_of(c1);
    S.second = vertex_of(c2);

    S.set(0, S.first, info.i2.at(c1));
    for (int vj = 1; vj <= d; ++vj) {
        if (vj == S.first) continue;
        int cj = info.attrs[vj - 1];
        for (int vk = 1; vk <= d; ++vk) {
            if (vk == vj) continue;
            if (vj == S.second && vk != S.first) continue;
            int ck = info.attrs[vk - 1];
            S.set(vk, vj, info.triple(ck, cj) - info.i2.at(ck));
        }
    }
    return S;
}

namespace detail {

struct ArbEdge {
    int src, dst;
    double w;
};

// one round of Chu-Liu/Edmonds: returns, for every non-root vertex, the
// index of its chosen incoming edge in `edges`
inline std::map<int, int> solve_arborescence(const std::vector<int>& verts,
                                             const std::vector<ArbEdge>& edges, int root) {
    std::map<int, int> best;   // dst -> edge index; first occurrence wins ties
    for (size_t i = 0; i < edges.size(); ++i) {
        const ArbEdge& e = edges[i];
        if (e.dst == root || e.src == e.dst) continue;
        auto it = best.find(e.dst);
        if (it == best.end() || e.w > edges[it->second].w) best[e.dst] = static_cast<int>(i);
    }
    for (int v : verts)
        if (v != root && !best.count(v))
            throw std::runtime_error("max_arborescence: vertex " + std::to_string(v) +
                                     " has no incoming edge");

    // look for a cycle among the chosen edges
    std::vector<int> cycle;
    std::map<int, int> color;   // 0 new, 1 on current path, 2 done
    for (int v : verts) {
        if (v == root || color[v] != 0) continue;
        std::vector<int> path;
        int u = v;
        while (u != root && color[u] == 0) {
            color[u] = 1;
            path.push_back(u);
            u = edges[best[u]].src;
        }
        if (u != root && color[u] == 1) {
            auto it = std::find(path.begin(), path.end(), u);
            cycle.assign(it, path.end());
        }
        for (int p : path) color[p] = 2;
        if (!cycle.empty()) break;
    }
    if (cycle.empty()) return best;

    // contract the cycle into a fresh vertex and recurse
    std::set<int> in_cycle(cycle.begin(), cycle.end());
    const int cid = *std::max_element(verts.begin(), verts.end()) + 1;
    std::vector<ArbEdge> contracted;
    std::vector<int> basis;   // contracted edge -> index in `edges`
    for (size_t i = 0; i < edges.size(); ++i) {
        const ArbEdge& e = edges[i];
        const bool s = in_cycle.count(e.src) > 0, d = in_cycle.count(e.dst) > 0;
        if (s && d) continue;
        if (!s && !d) contracted.push_back(e);
        else if (d) contracted.push_back({e.src, cid, e.w - edges[best[e.dst]].w});
        else contracted.push_back({cid, e.dst, e.w});
        basis.push_back(static_cast<int>(i));
    }
    std::vector<int> nverts;
    for (int v : verts)
        if (!in_cycle.count(v)) nverts.push_back(v);
    nverts.push_back(cid);

    std::map<int, int> sub = solve_arborescence(nverts, contracted, root);

    std::map<int, int> result;
    int entry = -1;   // original edge that breaks the cycle
    for (const auto& [v, ni] : sub) {
        int oi = basis[ni];
        if (v == cid) entry = oi;
        else result[v] = oi;
    }
    if (entry < 0) throw std::logic_error("max_arborescence: contracted vertex unresolved");
    result[edges[entry].dst] = entry;
    for (int v : cycle)
        if (v != edges[entry].dst) result[v] = best[v];
    return result;
}

}  // namespace detail

// Maximum-weight spanning arborescence rooted at vertex 0.
inline Arborescence max_arborescence(const ScoreMatrix& S) {
    std::vector<int> verts(S.size());
    for (int v = 0; v < S.size(); ++v) verts[v] = v;
    std::vector<detail::ArbEdge> edges;
    for (int dst = 1; dst < S.size(); ++dst)
        for (int src = 0; src < S.size(); ++src)
            if (src != dst && S.has(src, dst)) edges.push_back({src, dst, S.at(src, dst)});

    std::map<int, int> chosen = detail::solve_arborescence(verts, edges, 0);
    Arborescence arb;
    arb.n = S.size();
    for (const auto& [v, ei] : chosen) {
        arb.parent[v] = edges[ei].src;
        arb.weight += edges[ei].w;
    }
    return arb;
}

struct GnbOResult {
    GnbStructure structure;
    LearnTrace trace;
    double weight = 0;   // total structure weight (equals the trace cumulative)
};

inline GnbOResult learn_gnb_o(const DiscreteTable& t) {
    detail::InfoCache info(t);
    if (info.attrs.size() < 2)
        throw std::invalid_argument("learn_gnb_o: need at least two attributes");
    ScoreMatrix S = build_aux_graph(t);
    Arborescence arb = max_arborescence(S);
    GnbStructure s = chain_ordering(arb, info.attrs, info.y,
                                    [&](int src, int dst) { return S.at(src, dst); });

    GnbOResult res;
    res.structure = s;
    double cum = info.triple(s.order[0], s.order[1]);
    res.trace.push_back({s.order[1], s.order[0], cum, cum});
    for (size_t k = 2; k < s.order.size(); ++k) {
        int a = s.order[k], m = s.mother.at(a);
        double inc = info.triple(m, a) - info.i2.at(m);
        cum += inc;
        res.trace.push_back({a, m, inc, cum});
    }
    res.weight = cum;
    return res;
}

// Step-by-step weight increments of an existing structure, in its
// construction order (what a learner's trace would have recorded).
inline LearnTrace trace_for(const DiscreteTable& t, const GnbStructure& s) {
    auto bad = validate(s, static_cast<int>(t.codes.size()));
    if (!bad.empty()) throw std::invalid_argument("trace_for: " + bad.front());
    const int y = s.class_index;
    LearnTrace trace;
    double cum = info_content(estimate(t, {y, s.order[0], s.order[1]}));
    trace.push_back({s.order[1], s.order[0], cum, cum});
    for (size_t k = 2; k < s.order.size(); ++k) {
        int a = s.order[k], m = s.mother.at(a);
        double inc = info_content(estimate(t, {y, m, a})) - info_content(estimate(t, {y, m}));
        cum += inc;
        trace.push_back({a, m, inc, cum});
    }
    return trace;
}

// Tree-augmented naive Bayes: maximum spanning tree under conditional mutual
// information I(X_i; X_j | Y), rooted at the smallest attribute column.
inline GnbStructure learn_tan(const DiscreteTable& t) {
    if (t.class_column < 0) throw std::invalid_argument("learn_tan: table has no class column");
    const int y = t.class_column;
    std::vector<int> attrs = t.attributes();
    const size_t d = attrs.size();
    if (d < 2) throw std::invalid_argument("learn_tan: need at least two attributes");

    double hy = entropy(estimate(t, {y}));
    std::map<int, double> hiy;
    for (int a : attrs) hiy[a] = entropy(estimate(t, {y, a}));

    struct E {
        int i, j;
        double w;
    };
    std::vector<E> es;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i + 1; j < d; ++j) {
            int a = attrs[i], b = attrs[j];
            double cmi = hiy[a] + hiy[b] - hy - entropy(estimate(t, {y, a, b}));
            es.push_back({a, b, cmi});
        }
    std::stable_sort(es.begin(), es.end(), [](const E& x, const E& z) { return x.w > z.w; });

    std::map<int, int> comp;
    for (int a : attrs) comp[a] = a;
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    std::map<int, std::vector<int>> adj;
    size_t used = 0;
    for (const E& e : es) {
        if (used + 1 == d) break;
        int ri = find(e.i), rj = find(e.j);
        if (ri == rj) continue;
        comp[std::max(ri, rj)] = std::min(ri, rj);
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
        ++used;
    }

    GnbStructure s;
    s.class_index = y;
    int root = attrs.front();
    std::set<int> seen{root};
    std::vector<int> queue{root};
    s.order.push_back(root);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        std::vector<int> next = adj[u];
        std::sort(next.begin(), next.end());
        for (int v : next) {
            if (seen.count(v)) continue;
            seen.insert(v);
            queue.push_back(v);
            s.order.push_back(v);
            s.mother[v] = u;
        }
    }
    return s;
}

}  // namespace gnb
