#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace hypermatch {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// mt19937_64 with portable bounded draws (the std distributions are not
/// specified bit-exactly across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent stream derived from a root seed and a stage name.
    static Rng substream(std::uint64_t root, std::string_view name)
    {
        return Rng(root ^ fnv1a(name));
    }
    static Rng substream(std::uint64_t root, std::string_view name, std::uint64_t index)
    {
        return Rng(splitmix64(root ^ fnv1a(name)) + index);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        while (true) {
            std::uint64_t x = engine_();
            if (x < limit)
                return x % bound;
        }
    }

    unsigned __int128 below128(unsigned __int128 bound)
    {
        if (bound <= ~std::uint64_t{0})
            return below(static_cast<std::uint64_t>(bound));
        const unsigned __int128 all = ~static_cast<unsigned __int128>(0);
        const unsigned __int128 limit = bound * (all / bound);
        while (true) {
            unsigned __int128 x = (static_cast<unsigned __int128>(engine_()) << 64) | engine_();
            if (x < limit)
                return x % bound;
        }
    }

    /// True with probability num/den.
    bool bernoulli(std::uint64_t num, std::uint64_t den)
    {
        if (num >= den)
            return true;
        if (num == 0)
            return false;
        return below(den) < num;
    }

    template <class T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    /// k distinct values from [0, n), in draw order.
    std::vector<std::uint64_t> sample(std::uint64_t n, std::uint64_t k)
    {
        std::vector<std::uint64_t> pool(n);
        for (std::uint64_t i = 0; i < n; ++i)
            pool[i] = i;
        std::vector<std::uint64_t> out;
        for (std::uint64_t i = 0; i < k && i < n; ++i) {
            std::swap(pool[i], pool[i + below(n - i)]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hypermatch
