#pragma once

// Cherry-tree classifier structures: a class variable plus an ordered set of
// attributes where each attribute after the first hangs off an earlier
// "mother" attribute, giving clusters (class, mother, attribute) glued along
// separators (class, mother).

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnb {

struct GnbStructure {
    int class_index = -1;
    std::vector<int> order;       // attribute column indices, construction order
    std::map<int, int> mother;    // order[k] (k >= 1) -> earlier attribute

    struct Cluster {
        int mother;
        int attribute;
    };

    // clusters in construction order: (order[0], order[1]), then one per added attribute
    std::vector<Cluster> clusters() const {
        std::vector<Cluster> out;
        for (size_t k = 1; k < order.size(); ++k)
            out.push_back({mother.at(order[k]), order[k]});
        return out;
    }

    // separator mothers, one per attribute from the third on
    std::vector<int> separators() const {
        std::vector<int> out;
        for (size_t k = 2; k < order.size(); ++k)
            out.push_back(mother.at(order[k]));
        return out;
    }

    size_t size() const { return order.size(); }
};

struct NbStructure {
    int class_index = -1;
    std::vector<int> attributes;
};

// Structural violations as human-readable messages; empty result means valid.
inline std::vector<std::string> validate(const GnbStructure& s, int n_columns) {
    std::vector<std::string> bad;
    if (s.order.size() < 2) bad.push_back("order must contain at least two attributes");
    if (s.class_index < 0 || s.class_index >= n_columns)
        bad.push_back("class index " + std::to_string(s.class_index) + " out of range");
    std::set<int> seen;
    for (size_t k = 0; k < s.order.size(); ++k) {
        int a = s.order[k];
        if (a < 0 || a >= n_columns) {
            bad.push_back("attribute index " + std::to_string(a) + " out of range");
            continue;
        }
        if (a == s.class_index)
            bad.push_back("attribute " + std::to_string(a) + " collides with the class column");
        if (!seen.insert(a).second)
            bad.push_back("attribute " + std::to_string(a) + " appears twice in the order");
        if (k == 0) {
            if (s.mother.count(a))
                bad.push_back("first attribute " + std::to_string(a) + " must not have a mother");
        } else {
            auto it = s.mother.find(a);
            if (it == s.mother.end()) {
                bad.push_back("attribute " + std::to_string(a) + " has no mother");
            } else {
                bool earlier = false;
                for (size_t j = 0; j < k; ++j)
                    if (s.order[j] == it->second) earlier = true;
                if (!earlier)
                    bad.push_back("mother of attribute " + std::to_string(a) +
                                  " does not precede it in the order");
            }
        }
    }
    for (const auto& [attr, m] : s.mother) {
        (void)m;
        if (std::find(s.order.begin(), s.order.end(), attr) == s.order.end())
            bad.push_back("mother map mentions attribute " + std::to_string(attr) +
                          " that is not in the order");
    }
    return bad;
}

// Directed spanning tree over vertices {0..n-1} rooted at 0.
struct Arborescence {
    int n = 0;
    std::map<int, int> parent;   // vertex -> parent, every vertex but the root
    double weight = 0.0;

    std::vector<int> children(int v) const {
        std::vector<int> out;
        for (const auto& [c, p] : parent)
            if (p == v) out.push_back(c);
        return out;
    }
};

// Turn a rooted attribute tree into a construction order. Leaves are peeled
// off one at a time — always the leaf whose incoming edge scores lowest
// (ties: smaller vertex) — and the reversed peeling order is the chain, so
// early prefixes keep the highest-scoring attachments. Vertex v >= 1 of the
// arborescence maps to attr_columns[v-1]; the root's single child becomes
// the first attribute.
inline GnbStructure chain_ordering(const Arborescence& arb, const std::vector<int>& attr_columns,
                                   int class_index,
                                   const std::function<double(int, int)>& score) {
    const int d = static_cast<int>(attr_columns.size());
    if (arb.n != d + 1)
        throw std::invalid_argument("chain_ordering: arborescence size does not match attributes");
    std::vector<int> root_children = arb.children(0);
    if (root_children.size() != 1)
        throw std::invalid_argument("chain_ordering: root must have exactly one child");

    std::map<int, int> remaining_children;
    for (int v = 0; v <= d; ++v) remaining_children[v] = 0;
    for (const auto& [c, p] : arb.parent) {
        (void)c;
        remaining_children[p]++;
    }

    std::set<int> alive;
    for (int v = 1; v <= d; ++v) alive.insert(v);
    std::vector<int> deleted;
    while (deleted.size() < static_cast<size_t>(d)) {
        int pick = -1;
        double pick_score = 0.0;
        for (int v : alive) {
            if (remaining_children[v] > 0) continue;
            double sc = score(arb.parent.at(v), v);
            if (pick < 0 || sc < pick_score) {
                pick = v;
                pick_score = sc;
            }
        }
        if (pick < 0) throw std::logic_error("chain_ordering: no leaf found (cycle?)");
        deleted.push_back(pick);
        alive.erase(pick);
        remaining_children[arb.parent.at(pick)]--;
    }

    GnbStructure s;
    s.class_index = class_index;
    for (auto it = deleted.rbegin(); it != deleted.rend(); ++it)
        s.order.push_back(attr_columns[*it - 1]);
    for (size_t k = 1; k < s.order.size(); ++k) {
        int v = deleted[deleted.size() - 1 - k];
        int p = arb.parent.at(v);
        s.mother[s.order[k]] = attr_columns[p - 1];
    }
    return s;
}

// First k attributes of the construction order with their mothers.
inline GnbStructure prefix(const GnbStructure& s, size_t k) {
    if (k < 2 || k > s.order.size())
        throw std::invalid_argument("prefix: size must lie in [2, order length]");
    GnbStructure out;
    out.class_index = s.class_index;
    out.order.assign(s.order.begin(), s.order.begin() + k);
    for (size_t i = 1; i < k; ++i) out.mother[out.order[i]] = s.mother.at(out.order[i]);
    return out;
}

}  // namespace gnb
