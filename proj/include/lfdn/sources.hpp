#pragma once

#include <map>
#include <set>
#include <vector>

#include "lfdn/cutset.hpp"
#include "lfdn/network.hpp"

namespace lfdn {

/// Common-bits correlated source: a pool of independent uniform bits and one
/// index subset per node. Node i observes exactly the pool positions in its
/// subset, so every entropy is a set cardinality: H(U_i) = |U_i| and
/// H(U_i | U_j) = |U_i| - |U_i ∩ U_j|.
class CommonBitsSource {
public:
    CommonBitsSource(int total_bits, std::map<int, std::vector<int>> sets)
        : total_bits_(total_bits), sets_(std::move(sets)) {
        if (total_bits_ < 0) throw std::invalid_argument("source: negative bit pool");
        for (auto& [node, set] : sets_) {
            if (node <= 0) throw std::invalid_argument("source: node ids must be positive");
            std::sort(set.begin(), set.end());
            for (std::size_t k = 0; k < set.size(); ++k) {
                if (set[k] < 1 || set[k] > total_bits_)
                    throw std::invalid_argument("source: bit index out of range");
                if (k > 0 && set[k] == set[k - 1])
                    throw std::invalid_argument("source: duplicate bit index");
            }
        }
    }

    int total_bits() const { return total_bits_; }
    const std::map<int, std::vector<int>>& sets() const { return sets_; }

    const std::vector<int>& set_of(int node) const {
        auto it = sets_.find(node);
        if (it == sets_.end())
            throw std::invalid_argument("source: no set for node " + std::to_string(node));
        return it->second;
    }

    std::vector<int> node_ids() const {
        std::vector<int> out;
        for (const auto& [node, set] : sets_) out.push_back(node);
        return out;
    }

    /// Union of the observed pool positions over a node subset.
    std::vector<int> observed_union(const std::vector<int>& nodes) const {
        std::set<int> u;
        for (int n : nodes) {
            const std::vector<int>& s = set_of(n);
            u.insert(s.begin(), s.end());
        }
        return {u.begin(), u.end()};
    }

private:
    int total_bits_ = 0;
    std::map<int, std::vector<int>> sets_;
};

/// H(U_S | U_Sc) in bits: pool positions seen in S but nowhere in Sc.
inline long long conditional_entropy(const CommonBitsSource& src, const std::vector<int>& s,
                                     const std::vector<int>& sc) {
    for (int a : s)
        for (int b : sc)
            if (a == b) throw std::invalid_argument("conditional_entropy: overlapping subsets");
    std::vector<int> su = src.observed_union(s);
    std::vector<int> scu = src.observed_union(sc);
    std::set<int> cond(scu.begin(), scu.end());
    long long count = 0;
    for (int idx : su)
        if (!cond.count(idx)) ++count;
    return count;
}

/// The source produced by embedded uniform quantizers: every node shares the
/// m most significant bits and owns a private block of n - m bits, giving a
/// pool of m + node_count * (n - m) bits. Node ids are 1..node_count.
inline CommonBitsSource embedded_quantizer_source(int n, int m, int node_count = 2) {
    if (m < 0 || n < 0 || m > n) throw std::invalid_argument("embedded_quantizer_source: need 0 <= m <= n");
    if (node_count < 1) throw std::invalid_argument("embedded_quantizer_source: need at least one node");
    const int priv = n - m;
    std::map<int, std::vector<int>> sets;
    for (int i = 1; i <= node_count; ++i) {
        std::vector<int> set;
        for (int k = 1; k <= m; ++k) set.push_back(k);
        for (int k = 0; k < priv; ++k) set.push_back(m + (i - 1) * priv + k + 1);
        sets[i] = std::move(set);
    }
    return CommonBitsSource(m + node_count * priv, std::move(sets));
}

struct SourceViolation {
    std::vector<int> subset;
    long long entropy = 0;  // H(U_S | U_Sc)
    long long bound = 0;    // cut rank
};

struct TransmissibilityCheck {
    bool transmissible = true;
    std::vector<SourceViolation> violations;
};

/// Decides whether the source can be reproduced at the destination: for every
/// nonempty subset S of source nodes, the bits S contributes beyond the rest
/// must fit through the cut, H(U_S | U_Sc) <= rank of the cut transfer matrix.
inline TransmissibilityCheck transmissible(const Network& net, const CommonBitsSource& src) {
    const std::vector<int> sources = net.sources();
    if (src.node_ids() != sources)
        throw std::invalid_argument("transmissible: source sets must cover exactly the network's source nodes");

    TransmissibilityCheck result;
    for (const RegionInequality& ineq : region(net)) {
        std::vector<int> comp;
        for (std::size_t i = 0; i < sources.size(); ++i)
            if (!(ineq.mask & (std::uint32_t(1) << i))) comp.push_back(sources[i]);
        long long h = conditional_entropy(src, ineq.subset, comp);
        if (h > ineq.bound) {
            result.transmissible = false;
            result.violations.push_back({ineq.subset, h, ineq.bound});
        }
    }
    return result;
}

/// Parses the source format:
///
///   bits <n0>
///   set <node-id> <idx> <idx> ...
///
/// one set line per node; indices are 1-based and unique within a line.
inline CommonBitsSource parse_source(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::optional<int> pool;
    std::map<int, std::vector<int>> sets;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (toks[0] == "bits") {
            if (toks.size() != 2) throw ParseError(lineno, "expected 'bits <n0>'");
            if (pool) throw ParseError(lineno, "duplicate bits line");
            pool = detail::parse_capacity(toks[1], lineno);
        } else if (toks[0] == "set") {
            if (toks.size() < 2) throw ParseError(lineno, "expected 'set <node-id> <idx> ...'");
            if (!pool) throw ParseError(lineno, "bits line must precede set lines");
            int node = detail::parse_node_id(toks[1], lineno);
            if (sets.count(node)) throw ParseError(lineno, "duplicate set for node " + std::to_string(node));
            std::vector<int> set;
            for (std::size_t k = 2; k < toks.size(); ++k) {
                int idx = detail::parse_node_id(toks[k], lineno);
                if (idx > *pool) throw ParseError(lineno, "bit index exceeds pool size");
                if (std::find(set.begin(), set.end(), idx) != set.end())
                    throw ParseError(lineno, "duplicate bit index in set");
                set.push_back(idx);
            }
            sets[node] = std::move(set);
        } else {
            throw ParseError(lineno, "unknown keyword '" + toks[0] + "'");
        }
    }
    if (!pool) throw ParseError(lineno, "missing bits line");
    return CommonBitsSource(*pool, std::move(sets));
}

}  // namespace lfdn
