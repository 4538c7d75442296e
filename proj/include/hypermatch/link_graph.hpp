#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypermatch {

/// 4x4x4 tripartite 3-graph on classes Q0, Q1, Q2. Triple (i, j, k) lives at
/// bit 16*i + 4*j + k.
struct LinkGraph {
    std::uint64_t mask = 0;

    static constexpr unsigned index(unsigned i, unsigned j, unsigned k) { return 16 * i + 4 * j + k; }

    bool test(unsigned i, unsigned j, unsigned k) const { return (mask >> index(i, j, k)) & 1U; }
    void set(unsigned i, unsigned j, unsigned k) { mask |= std::uint64_t{1} << index(i, j, k); }
    void reset(unsigned i, unsigned j, unsigned k) { mask &= ~(std::uint64_t{1} << index(i, j, k)); }
    unsigned popcount() const { return static_cast<unsigned>(std::popcount(mask)); }

    friend bool operator==(LinkGraph, LinkGraph) = default;
};

/// 16 lowercase hex digits, most significant first.
std::string to_hex(LinkGraph g);
/// Accepts exactly 16 hex digits in either case, optionally prefixed by 0x.
/// Throws Error(Parse) otherwise.
LinkGraph link_from_hex(std::string_view text);

using Triple = std::array<std::uint8_t, 3>;

enum class PatternKind { H432, H4221, H3321 };

const char* to_string(PatternKind kind);
/// Required pair degrees, descending.
std::vector<unsigned> required_degrees(PatternKind kind);

/// Unordered pair of classes; the pair (x, y) of a PairSystem has x in the
/// lower class and y in the higher one.
enum class Side { Q01, Q02, Q12 };

const char* to_string(Side side);
std::array<unsigned, 3> side_classes(Side side);  // {first, second, third}

}  // namespace hypermatch
