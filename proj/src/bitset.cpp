#include "hypermatch/bitset.hpp"

#include <bit>

namespace hypermatch {

DynBitset::DynBitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

std::size_t DynBitset::count() const
{
    std::size_t total = 0;
    for (auto w : words_)
        total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool DynBitset::any() const
{
    for (auto w : words_)
        if (w != 0)
            return true;
    return false;
}

DynBitset& DynBitset::operator&=(const DynBitset& other)
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= other.words_[i];
    return *this;
}

DynBitset& DynBitset::operator|=(const DynBitset& other)
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] |= other.words_[i];
    return *this;
}

std::size_t DynBitset::count_and(const DynBitset& other) const
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        total += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    return total;
}

std::size_t DynBitset::find_next(std::size_t from) const
{
    if (from >= bits_)
        return bits_;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
        if (w != 0) {
            std::size_t idx = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
            return idx < bits_ ? idx : bits_;
        }
        if (++wi >= words_.size())
            return bits_;
        w = words_[wi];
    }
}

bool numeric_less(const DynBitset& a, const DynBitset& b)
{
    for (std::size_t i = a.words_.size(); i-- > 0;) {
        if (a.words_[i] != b.words_[i])
            return a.words_[i] < b.words_[i];
    }
    return false;
}

}  // namespace hypermatch
