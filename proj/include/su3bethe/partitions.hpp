#ifndef SU3BETHE_PARTITIONS_HPP
#define SU3BETHE_PARTITIONS_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "su3bethe/errors.hpp"

namespace su3bethe {

// Partitions of the index range {0..n-1} into labeled subsets of prescribed
// cardinalities. Indices inside every subset are strictly increasing (the
// "natural order" convention), and emission is lexicographic on the first
// subset, then the second, and so on.

struct LabeledPartition {
    std::vector<std::vector<int>> subsets;
};

inline std::int64_t multinomial(int n, std::span<const int> cards) {
    std::int64_t total = 0;
    for (int c : cards) {
        if (c < 0) throw CardinalityError("negative cardinality");
        total += c;
    }
    if (total != n) throw CardinalityError("cardinalities do not sum to n");
    // n! / prod(card_i!) accumulated as a product of binomials.
    std::int64_t result = 1;
    int remaining = n;
    for (int c : cards) {
        // C(remaining, c)
        std::int64_t b = 1;
        for (int i = 1; i <= c; ++i) b = b * (remaining - c + i) / i;
        result *= b;
        remaining -= c;
    }
    return result;
}

namespace detail {

inline void emit_partitions(std::vector<int>& pool, std::size_t card_pos,
                            std::span<const int> cards, LabeledPartition& current,
                            const std::function<void(const LabeledPartition&)>& visit) {
    if (card_pos == cards.size()) {
        visit(current);
        return;
    }
    if (card_pos + 1 == cards.size()) {
        // Last subset takes everything that is left, already sorted.
        current.subsets[card_pos] = pool;
        visit(current);
        return;
    }
    const int k = cards[card_pos];
    const int m = static_cast<int>(pool.size());
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    auto advance = [&]() -> bool {
        int i = k - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) return false;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    while (true) {
        auto& chosen = current.subsets[card_pos];
        chosen.clear();
        std::vector<int> rest;
        rest.reserve(pool.size() - static_cast<std::size_t>(k));
        std::size_t ci = 0;
        for (int p = 0; p < m; ++p) {
            if (ci < comb.size() && p == comb[ci]) {
                chosen.push_back(pool[static_cast<std::size_t>(p)]);
                ++ci;
            } else {
                rest.push_back(pool[static_cast<std::size_t>(p)]);
            }
        }
        emit_partitions(rest, card_pos + 1, cards, current, visit);
        if (k == 0 || !advance()) break;
    }
}

} // namespace detail

/// Visit every partition of {0..n-1} into subsets with the given cardinalities.
inline void for_each_partition(int n, std::span<const int> cards,
                               const std::function<void(const LabeledPartition&)>& visit) {
    std::int64_t check = multinomial(n, cards); // validates cards
    (void)check;
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    LabeledPartition current;
    current.subsets.resize(cards.size());
    detail::emit_partitions(pool, 0, cards, current, visit);
}

inline std::vector<LabeledPartition> enumerate_partitions(int n, std::span<const int> cards) {
    std::vector<LabeledPartition> out;
    out.reserve(static_cast<std::size_t>(multinomial(n, cards)));
    for_each_partition(n, cards, [&](const LabeledPartition& p) { out.push_back(p); });
    return out;
}

/// Two-subset convenience: visit (I, II) splits with |I| = k.
inline void for_each_split(int n, int k,
                           const std::function<void(const std::vector<int>&, const std::vector<int>&)>& visit) {
    const int cards[2] = {k, n - k};
    for_each_partition(n, cards, [&](const LabeledPartition& p) { visit(p.subsets[0], p.subsets[1]); });
}

/// Parity of the permutation mapping the concatenation (I, II) onto 0..n-1.
/// Both subsets are in natural order, so the sign counts cross inversions.
inline int partition_sign(const LabeledPartition& p) {
    if (p.subsets.size() != 2) throw CardinalityError("partition_sign expects exactly two subsets");
    long inversions = 0;
    for (int i : p.subsets[0]) {
        for (int j : p.subsets[1])
            if (j < i) ++inversions;
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

inline int partition_sign(const std::vector<int>& first, const std::vector<int>& second) {
    LabeledPartition p;
    p.subsets = {first, second};
    return partition_sign(p);
}

} // namespace su3bethe

#endif
