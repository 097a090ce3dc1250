#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "lfdn/network.hpp"
#include "lfdn/rational.hpp"

namespace lfdn {

/// One face of the rate region: sum of the rates of `subset` is bounded by
/// the rank of that cut's transfer matrix.
struct RegionInequality {
    std::vector<int> subset;   // node ids, ascending
    std::uint32_t mask = 0;    // bit i = i-th smallest source node
    long long bound = 0;

    friend bool operator==(const RegionInequality&, const RegionInequality&) = default;
};

/// Rates indexed by ascending source node id.
using RateVector = std::vector<Rational>;

namespace detail {

inline std::vector<int> subset_from_mask(const std::vector<int>& sources, std::uint32_t mask) {
    std::vector<int> out;
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (mask & (std::uint32_t(1) << i)) out.push_back(sources[i]);
    return out;
}

inline void require_region_size(std::size_t n, std::size_t limit) {
    if (n > limit)
        throw std::invalid_argument("region: too many source nodes (limit " + std::to_string(limit) + ")");
}

}  // namespace detail

/// All cut inequalities of the network, one per nonempty subset of the
/// non-destination nodes, in ascending bitmask order. At most 24 sources.
inline std::vector<RegionInequality> region(const Network& net, bool parallel = false) {
    const std::vector<int> sources = net.sources();
    detail::require_region_size(sources.size(), 24);
    const std::uint32_t total = (std::uint32_t(1) << sources.size()) - 1;

    std::vector<RegionInequality> out(total);
    auto compute = [&](std::uint32_t mask) {
        RegionInequality ineq;
        ineq.mask = mask;
        ineq.subset = detail::subset_from_mask(sources, mask);
        ineq.bound = static_cast<long long>(rank(transfer_matrix(net, Cut(ineq.subset))));
        out[mask - 1] = std::move(ineq);
    };

    if (parallel && total > 1) {
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint32_t mask = w + 1; mask <= total; mask += workers) compute(mask);
            });
        for (auto& t : pool) t.join();
    } else {
        for (std::uint32_t mask = 1; mask <= total; ++mask) compute(mask);
    }
    return out;
}

struct RateViolation {
    RegionInequality inequality;
    Rational lhs;
};

struct RateCheck {
    bool feasible = true;
    std::vector<RateViolation> violations;
};

/// Membership test for a rate vector against the cut-set region.
inline RateCheck check_rates(const Network& net, const RateVector& rates, bool parallel = false) {
    const std::vector<int> sources = net.sources();
    if (rates.size() != sources.size())
        throw std::invalid_argument("check_rates: expected one rate per source node");
    for (const Rational& r : rates)
        if (r < Rational(0)) throw std::invalid_argument("check_rates: negative rate");

    RateCheck result;
    for (const RegionInequality& ineq : region(net, parallel)) {
        Rational lhs(0);
        for (std::size_t i = 0; i < sources.size(); ++i)
            if (ineq.mask & (std::uint32_t(1) << i)) lhs += rates[i];
        if (lhs > Rational(ineq.bound)) {
            result.feasible = false;
            result.violations.push_back({ineq, lhs});
        }
    }
    return result;
}

/// Single-source capacity: the minimum cut rank over all source sides that
/// contain `source`; other non-destination nodes may fall on either side.
inline long long min_cut_capacity(const Network& net, int source) {
    net.require_node(source);
    if (source == net.dest()) throw std::invalid_argument("min_cut_capacity: source is the destination");
    const std::vector<int> sources = net.sources();
    detail::require_region_size(sources.size(), 24);

    std::size_t src_idx = 0;
    while (sources[src_idx] != source) ++src_idx;
    const std::uint32_t src_bit = std::uint32_t(1) << src_idx;
    const std::uint32_t total = (std::uint32_t(1) << sources.size()) - 1;

    long long best = -1;
    for (std::uint32_t mask = 1; mask <= total; ++mask) {
        if (!(mask & src_bit)) continue;
        long long r = static_cast<long long>(
            rank(transfer_matrix(net, Cut(detail::subset_from_mask(sources, mask)))));
        if (best < 0 || r < best) best = r;
    }
    return best;
}

/// The closed-form region of the four-node diamond (source 1, relays 2 and 3,
/// destination), in the same subset order that region() produces for it.
inline std::vector<RegionInequality> diamond_region_closed_form(int n12, int n13, int n2d, int n3d) {
    if (n12 < 0 || n13 < 0 || n2d < 0 || n3d < 0)
        throw std::invalid_argument("diamond_region_closed_form: negative capacity");
    const long long direct_max = std::max(n2d, n3d);
    std::vector<RegionInequality> out;
    out.push_back({{1}, 0b001, std::max(n12, n13)});          // broadcast from 1
    out.push_back({{2}, 0b010, n2d});
    out.push_back({{1, 2}, 0b011, static_cast<long long>(n2d) + n13});
    out.push_back({{3}, 0b100, n3d});
    out.push_back({{1, 3}, 0b101, static_cast<long long>(n3d) + n12});
    out.push_back({{2, 3}, 0b110, direct_max});               // multi-access into d
    out.push_back({{1, 2, 3}, 0b111, direct_max});            // sum rate
    return out;
}

namespace detail {

/// Solves an n x n rational system by Gaussian elimination.
/// Returns nullopt when the system is singular.
inline std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> a,
                                                           std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == Rational(0)) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == Rational(0)) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace detail

/// All vertices of the rate polytope {R >= 0, region inequalities}, by
/// brute-force intersection of constraint subsets. Rates of nodes listed in
/// `relays` are pinned to zero. Output is deduplicated and sorted
/// lexicographically. At most 4 free sources.
inline std::vector<RateVector> enumerate_vertices(const Network& net,
                                                  const std::vector<int>& relays = {}) {
    const std::vector<int> sources = net.sources();
    detail::require_region_size(sources.size(), 4);
    const std::size_t n = sources.size();
    if (n == 0) return {};

    for (int r : relays) {
        net.require_node(r);
        if (r == net.dest()) throw std::invalid_argument("enumerate_vertices: destination as relay");
    }

    const std::vector<RegionInequality> ineqs = region(net);

    // Constraint rows: every region inequality (as an equality candidate)
    // followed by the coordinate planes R_i = 0.
    struct Row {
        std::vector<Rational> coef;
        Rational rhs;
        bool mandatory = false;
    };
    std::vector<Row> rows;
    for (const RegionInequality& iq : ineqs) {
        Row row{std::vector<Rational>(n, Rational(0)), Rational(iq.bound), false};
        for (std::size_t i = 0; i < n; ++i)
            if (iq.mask & (std::uint32_t(1) << i)) row.coef[i] = Rational(1);
        rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
        Row row{std::vector<Rational>(n, Rational(0)), Rational(0), false};
        row.coef[i] = Rational(1);
        row.mandatory =
            std::find(relays.begin(), relays.end(), sources[i]) != relays.end();
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> mandatory, optional;
    for (std::size_t i = 0; i < rows.size(); ++i)
        (rows[i].mandatory ? mandatory : optional).push_back(i);
    if (mandatory.size() > n) throw std::invalid_argument("enumerate_vertices: too many relays");
    const std::size_t pick = n - mandatory.size();

    auto feasible = [&](const std::vector<Rational>& x) {
        for (const Rational& v : x)
            if (v < Rational(0)) return false;
        for (const RegionInequality& iq : ineqs) {
            Rational lhs(0);
            for (std::size_t i = 0; i < n; ++i)
                if (iq.mask & (std::uint32_t(1) << i)) lhs += x[i];
            if (lhs > Rational(iq.bound)) return false;
        }
        for (std::size_t m : mandatory) {
            Rational lhs(0);
            for (std::size_t i = 0; i < n; ++i) lhs += rows[m].coef[i] * x[i];
            if (lhs != rows[m].rhs) return false;
        }
        return true;
    };

    std::vector<RateVector> found;
    std::vector<std::size_t> choice(pick);
    auto try_system = [&]() {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t m : mandatory) {
            a.push_back(rows[m].coef);
            b.push_back(rows[m].rhs);
        }
        for (std::size_t c : choice) {
            a.push_back(rows[optional[c]].coef);
            b.push_back(rows[optional[c]].rhs);
        }
        auto x = detail::solve_rational(std::move(a), std::move(b));
        if (x && feasible(*x)) found.push_back(std::move(*x));
    };

    // Iterate all pick-subsets of the optional constraints.
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
        if (depth == pick) {
            try_system();
            return;
        }
        for (std::size_t i = start; i < optional.size(); ++i) {
            choice[depth] = i;
            self(self, depth + 1, i + 1);
        }
    };
    if (pick == 0)
        try_system();
    else
        recurse(recurse, 0, 0);

    std::sort(found.begin(), found.end(), [](const RateVector& a, const RateVector& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

}  // namespace lfdn
