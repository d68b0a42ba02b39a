#pragma once

#include <cstddef>
#include <vector>

namespace dms {

// Prefix-sum (binary indexed) tree supporting point updates, appends and the
// cumulative-sum descent used for weighted sampling.  W is double for real
// weights or an unsigned integer for the exact-arithmetic mode.
template <typename W>
class FenwickTree {
public:
    FenwickTree() = default;

    explicit FenwickTree(std::size_t capacity_hint) { bit_.reserve(capacity_hint + 1); }

    std::size_t size() const { return n_; }

    void push_back(W w) {
        // extend the array with a zero leaf, then route w through update()
        ++n_;
        if (bit_.empty()) bit_.push_back(W{});
        W below{};
        // new internal node spans [n - lowbit(n) + 1, n]; seed it with the
        // partial sums it covers so far
        std::size_t idx = n_;
        std::size_t low = idx & (~idx + 1);
        for (std::size_t j = idx - 1; j > idx - low; j -= j & (~j + 1))
            below += bit_[j];
        bit_.push_back(below);
        add(n_, w);
    }

    // one-based position
    void add(std::size_t pos, W delta) {
        for (; pos <= n_; pos += pos & (~pos + 1))
            bit_[pos] += delta;
    }

    // sum of [1..pos]
    W prefix(std::size_t pos) const {
        W s{};
        for (; pos > 0; pos -= pos & (~pos + 1))
            s += bit_[pos];
        return s;
    }

    W total() const { return prefix(n_); }

    W value(std::size_t pos) const { return prefix(pos) - prefix(pos - 1); }

    // Smallest one-based index whose cumulative sum strictly exceeds u
    // (zero-width leaves can never be selected).  u must be < total().
    std::size_t find(W u) const {
        std::size_t pos = 0;
        std::size_t mask = top_mask();
        W acc{};
        for (; mask > 0; mask >>= 1) {
            const std::size_t next = pos + mask;
            if (next <= n_ && acc + bit_[next] <= u) {
                acc += bit_[next];
                pos = next;
            }
        }
        return pos + 1;
    }

private:
    std::size_t top_mask() const {
        std::size_t mask = 1;
        while ((mask << 1) <= n_) mask <<= 1;
        return mask;
    }

    std::size_t n_ = 0;
    std::vector<W> bit_;  // one-based
};

}  // namespace dms
