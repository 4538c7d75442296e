#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hypermatch {

/// Fixed-size dynamic bitset backed by 64-bit words.
class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(std::size_t bits);

    std::size_t size() const { return bits_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    std::size_t count() const;
    bool any() const;

    DynBitset& operator&=(const DynBitset& other);
    DynBitset& operator|=(const DynBitset& other);

    /// Popcount of (*this & other) without materializing it.
    std::size_t count_and(const DynBitset& other) const;

    /// Index of the first set bit at or after `from`, or size() when none.
    std::size_t find_next(std::size_t from) const;
    std::size_t find_first() const { return find_next(0); }

    const std::vector<std::uint64_t>& words() const { return words_; }

    /// Orders bitsets as binary numbers (bit 0 least significant).
    friend bool numeric_less(const DynBitset& a, const DynBitset& b);
    friend bool operator==(const DynBitset& a, const DynBitset& b) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

bool numeric_less(const DynBitset& a, const DynBitset& b);

}  // namespace hypermatch
