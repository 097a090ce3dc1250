#pragma once

#include <vector>

#include "lfdn/cutset.hpp"
#include "lfdn/network.hpp"

namespace lfdn {

/// A network augmented with a virtual source feeding private bit pipes into
/// each source node. The virtual node holds a pool of bits; node i receives
/// the pool positions listed in sets[i] at the top of its expanded output
/// alphabet. In partitioned form the sets are consecutive disjoint blocks;
/// the overlapping form models correlated sources.
struct Augmentation {
    Network base;
    std::vector<int> source_ids;          // ascending, aligned with alloc/sets
    std::vector<int> alloc;               // bits delivered to each source node
    int pool = 0;                         // virtual source bit count
    std::vector<std::vector<int>> sets;   // 1-based pool indices per source
    bool partitioned = false;

    /// Size of a node's channel output alphabet after augmentation.
    int output_alphabet(int node) const {
        base.require_node(node);
        for (std::size_t i = 0; i < source_ids.size(); ++i)
            if (source_ids[i] == node) return base.level() + alloc[i];
        return base.level();  // destination keeps the base alphabet
    }
};

namespace detail {

inline void check_set_indices(const std::vector<int>& set, int pool) {
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (set[k] < 1 || set[k] > pool)
            throw std::invalid_argument("augment: pool index out of range");
        if (k > 0 && set[k] == set[k - 1])
            throw std::invalid_argument("augment: duplicate pool index");
    }
}

}  // namespace detail

/// Partitioned augmentation: alloc[i] fresh pool bits per source node, the
/// pool split into consecutive disjoint blocks in ascending node order.
inline Augmentation build_augmented(const Network& net, const std::vector<int>& alloc) {
    const std::vector<int> sources = net.sources();
    if (alloc.size() != sources.size())
        throw std::invalid_argument("build_augmented: expected one allocation per source node");
    Augmentation aug{net, sources, alloc, 0, {}, true};
    for (int a : alloc) {
        if (a < 0) throw std::invalid_argument("build_augmented: negative allocation");
        std::vector<int> set(static_cast<std::size_t>(a));
        for (int k = 0; k < a; ++k) set[static_cast<std::size_t>(k)] = aug.pool + k + 1;
        aug.sets.push_back(std::move(set));
        aug.pool += a;
    }
    return aug;
}

/// Overlapping augmentation: explicit pool subsets per source node, used to
/// model common-bits correlated sources.
inline Augmentation build_augmented(const Network& net, std::vector<std::vector<int>> sets,
                                    int pool) {
    const std::vector<int> sources = net.sources();
    if (sets.size() != sources.size())
        throw std::invalid_argument("build_augmented: expected one set per source node");
    if (pool < 0) throw std::invalid_argument("build_augmented: negative pool size");
    Augmentation aug{net, sources, {}, pool, {}, false};
    for (std::vector<int>& set : sets) {
        std::sort(set.begin(), set.end());
        detail::check_set_indices(set, pool);
        aug.alloc.push_back(static_cast<int>(set.size()));
        aug.sets.push_back(std::move(set));
    }
    return aug;
}

/// The virtual-link block for the complement of a cut: rows select the pool
/// positions delivered to each complement-side source node, stacked in
/// ascending node order.
inline Gf2Matrix virtual_link_block(const Augmentation& aug, const Cut& cut) {
    std::size_t rows = 0;
    for (std::size_t i = 0; i < aug.source_ids.size(); ++i)
        if (!cut.contains(aug.source_ids[i])) rows += aug.sets[i].size();

    Gf2MatrixBuilder b(rows, static_cast<std::size_t>(aug.pool));
    std::size_t r = 0;
    for (std::size_t i = 0; i < aug.source_ids.size(); ++i) {
        if (cut.contains(aug.source_ids[i])) continue;
        for (int idx : aug.sets[i]) b.set(r++, static_cast<std::size_t>(idx - 1));
    }
    return b.take();
}

/// Transfer matrix of the augmented cut {virtual source} ∪ cut_nodes: the
/// base cut matrix and the virtual-link block sit on a block diagonal since
/// the virtual pipes are orthogonal to the base channels.
inline Gf2Matrix augmented_transfer_matrix(const Augmentation& aug,
                                           const std::vector<int>& cut_nodes) {
    Cut cut(cut_nodes);
    validate_cut(aug.base, cut);
    return block_diag(transfer_matrix(aug.base, cut), virtual_link_block(aug, cut));
}

/// Rank of the augmented cut, computed from the explicit block construction.
inline long long augmented_cut_rank(const Augmentation& aug, const std::vector<int>& cut_nodes) {
    return static_cast<long long>(rank(augmented_transfer_matrix(aug, cut_nodes)));
}

struct AllocationViolation {
    RegionInequality inequality;
    long long lhs = 0;
};

struct AllocationCheck {
    bool feasible = true;
    std::vector<AllocationViolation> violations;
};

/// Integer-allocation feasibility: for every nonempty subset of sources the
/// allocated bits may not exceed the cut rank. Agrees with check_rates on
/// integer rate vectors.
inline AllocationCheck allocation_feasible(const Network& net, const std::vector<int>& alloc) {
    const std::vector<int> sources = net.sources();
    if (alloc.size() != sources.size())
        throw std::invalid_argument("allocation_feasible: expected one allocation per source node");
    for (int a : alloc)
        if (a < 0) throw std::invalid_argument("allocation_feasible: negative allocation");

    AllocationCheck result;
    for (const RegionInequality& ineq : region(net)) {
        long long lhs = 0;
        for (std::size_t i = 0; i < sources.size(); ++i)
            if (ineq.mask & (std::uint32_t(1) << i)) lhs += alloc[i];
        if (lhs > ineq.bound) {
            result.feasible = false;
            result.violations.push_back({ineq, lhs});
        }
    }
    return result;
}

/// Finds an integer allocation with maximum total bits subject to the cut
/// constraints, by depth-first search in lexicographic order with sum
/// pruning; the first maximum found is the lexicographically smallest one.
/// At most 12 source nodes.
inline std::vector<int> max_sum_allocation(const Network& net) {
    const std::vector<int> sources = net.sources();
    detail::require_region_size(sources.size(), 12);
    const std::size_t n = sources.size();
    if (n == 0) return {};

    std::vector<long long> bounds(std::size_t(1) << n, 0);
    for (const RegionInequality& ineq : region(net)) bounds[ineq.mask] = ineq.bound;

    std::vector<long long> singleton(n);
    for (std::size_t i = 0; i < n; ++i) singleton[i] = bounds[std::size_t(1) << i];
    std::vector<long long> suffix_cap(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) suffix_cap[i] = suffix_cap[i + 1] + singleton[i];

    std::vector<int> current(n, 0), best;
    long long best_sum = -1;

    auto prefix_ok = [&](std::size_t k) {
        // All subsets of the decided prefix that include node k.
        const std::uint32_t prefix = (k == 0) ? 0 : ((std::uint32_t(1) << k) - 1);
        const std::uint32_t kbit = std::uint32_t(1) << k;
        std::uint32_t sub = prefix;
        while (true) {
            std::uint32_t mask = sub | kbit;
            long long lhs = 0;
            for (std::size_t i = 0; i <= k; ++i)
                if (mask & (std::uint32_t(1) << i)) lhs += current[i];
            if (lhs > bounds[mask]) return false;
            if (sub == 0) break;
            sub = (sub - 1) & prefix;
        }
        return true;
    };

    auto dfs = [&](auto&& self, std::size_t k, long long sum) -> void {
        if (sum + suffix_cap[k] <= best_sum) return;
        if (k == n) {
            if (sum > best_sum) {
                best_sum = sum;
                best = current;
            }
            return;
        }
        for (long long v = 0; v <= singleton[k]; ++v) {
            current[k] = static_cast<int>(v);
            if (!prefix_ok(k)) break;  // sums only grow with v
            self(self, k + 1, sum + v);
        }
        current[k] = 0;
    };
    dfs(dfs, 0, 0);
    return best;
}

}  // namespace lfdn
