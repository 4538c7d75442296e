#include "hypermatch/hg_format.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>

namespace hypermatch {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what)
{
    throw Error(Errc::Parse, "line " + std::to_string(line) + ": " + what);
}

// Tokens separated by exactly one space; a trailing CR is tolerated and a
// blank line yields nothing.
std::vector<std::uint64_t> parse_numbers(std::string_view line, std::size_t lineno)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::uint64_t> out;
    if (line.empty())
        return out;
    std::size_t pos = 0;
    while (true) {
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
        if (ec != std::errc() || ptr == line.data() + pos)
            parse_error(lineno, "expected a non-negative integer");
        out.push_back(value);
        pos = static_cast<std::size_t>(ptr - line.data());
        if (pos == line.size())
            return out;
        if (line[pos] != ' ')
            parse_error(lineno, "unexpected character");
        ++pos;
    }
}

}  // namespace

Hypergraph parse_hg(std::string_view text)
{
    if (text.empty() || text.back() != '\n')
        throw Error(Errc::Parse, "missing trailing newline");

    bool have_header = false;
    std::uint64_t r = 0, n = 0, m = 0;
    std::vector<Edge> edges;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++lineno;
        if (!line.empty() && line.front() == '#')
            continue;
        auto nums = parse_numbers(line, lineno);
        if (nums.empty())
            continue;
        if (!have_header) {
            if (nums.size() != 3)
                parse_error(lineno, "header must be 'r n m'");
            r = nums[0];
            n = nums[1];
            m = nums[2];
            if (r < 2 || r > 16 || n < r || n > std::numeric_limits<Vertex>::max())
                parse_error(lineno, "header values out of range");
            have_header = true;
            continue;
        }
        if (nums.size() != r)
            parse_error(lineno, "edge must have exactly r vertices");
        Edge e;
        for (std::size_t i = 0; i < nums.size(); ++i) {
            if (nums[i] >= n)
                parse_error(lineno, "vertex id out of range");
            if (i > 0 && nums[i] <= nums[i - 1])
                parse_error(lineno, "vertex ids must be strictly increasing");
            e.push_back(static_cast<Vertex>(nums[i]));
        }
        edges.push_back(std::move(e));
    }
    if (!have_header)
        throw Error(Errc::Parse, "missing header");
    if (edges.size() != m)
        throw Error(Errc::Parse, "header declares " + std::to_string(m) + " edges, found " +
                                     std::to_string(edges.size()));
    try {
        return Hypergraph(static_cast<unsigned>(r), static_cast<Vertex>(n), std::move(edges));
    } catch (const Error& e) {
        throw Error(Errc::Parse, e.what());
    }
}

std::string serialize_hg(const Hypergraph& h)
{
    std::string out;
    out.reserve(h.num_edges() * h.uniformity() * 4 + 32);
    out += std::to_string(h.uniformity()) + ' ' + std::to_string(h.num_vertices()) + ' ' +
           std::to_string(h.num_edges()) + '\n';
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        bool first = true;
        for (Vertex v : h.edge(i)) {
            if (!first)
                out += ' ';
            out += std::to_string(v);
            first = false;
        }
        out += '\n';
    }
    return out;
}

Hypergraph read_hg_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::Parse, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_hg(buf.str());
}

void write_hg_file(const std::string& path, const Hypergraph& h)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Parse, "cannot write " + path);
    out << serialize_hg(h);
}

}  // namespace hypermatch
