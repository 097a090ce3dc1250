#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lfdn/gf2.hpp"

namespace lfdn {

/// Directed link with an integer capacity. The channel matrix defaults to the
/// down-shift power S^(q - capacity), delivering the top `capacity` input bits
/// to the bottom output positions; a general q x q matrix may override it.
struct Link {
    int src = 0;
    int dst = 0;
    int capacity = 0;
    std::optional<Gf2Matrix> channel;  // nullopt = shift power default
};

/// Error raised by the text parsers; carries the offending 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// A directed acyclic network with one destination node. Immutable after
/// construction; the bit level q is derived as the maximum link capacity.
class Network {
public:
    Network(std::vector<int> nodes, int dest, std::vector<Link> links) : dest_(dest) {
        std::sort(nodes.begin(), nodes.end());
        for (int id : nodes) {
            if (id <= 0) throw std::invalid_argument("network: node ids must be positive");
        }
        if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
            throw std::invalid_argument("network: duplicate node id");
        nodes_ = std::move(nodes);
        if (!contains(nodes_, dest_)) throw std::invalid_argument("network: destination not among nodes");

        std::sort(links.begin(), links.end(),
                  [](const Link& a, const Link& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
        for (std::size_t i = 0; i < links.size(); ++i) {
            const Link& l = links[i];
            if (!contains(nodes_, l.src) || !contains(nodes_, l.dst))
                throw std::invalid_argument("network: link endpoint is not a declared node");
            if (l.src == l.dst) throw std::invalid_argument("network: self-loop");
            if (l.src == dest_) throw std::invalid_argument("network: destination has an outgoing link");
            if (l.capacity < 0) throw std::invalid_argument("network: negative capacity");
            if (i > 0 && links[i - 1].src == l.src && links[i - 1].dst == l.dst)
                throw std::invalid_argument("network: duplicate link");
        }
        links_ = std::move(links);

        level_ = 0;
        for (const Link& l : links_) level_ = std::max(level_, l.capacity);
        for (const Link& l : links_) {
            if (l.channel &&
                (l.channel->rows() != static_cast<std::size_t>(level_) ||
                 l.channel->cols() != static_cast<std::size_t>(level_)))
                throw std::invalid_argument("network: channel matrix is not q x q");
        }
        if (has_cycle()) throw std::invalid_argument("network: cycle detected");
    }

    const std::vector<int>& nodes() const { return nodes_; }
    int dest() const { return dest_; }

    /// The bit level q: maximum link capacity, 0 for a network with no links.
    int level() const { return level_; }

    /// All non-destination nodes, ascending.
    std::vector<int> sources() const {
        std::vector<int> out;
        for (int id : nodes_)
            if (id != dest_) out.push_back(id);
        return out;
    }

    const std::vector<Link>& links() const { return links_; }

    bool has_node(int id) const { return contains(nodes_, id); }

    const Link* find_link(int src, int dst) const {
        for (const Link& l : links_)
            if (l.src == src && l.dst == dst) return &l;
        return nullptr;
    }

    /// Effective channel matrix of a link: the override if present, otherwise
    /// the shift power S^(q - capacity).
    Gf2Matrix channel(const Link& l) const {
        if (l.channel) return *l.channel;
        return Gf2Matrix::shift_power(static_cast<std::size_t>(level_),
                                      static_cast<std::size_t>(level_ - l.capacity));
    }

    /// Nodes j with a link i -> j.
    std::vector<int> fan_out(int i) const {
        require_node(i);
        std::vector<int> out;
        for (const Link& l : links_)
            if (l.src == i) out.push_back(l.dst);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Nodes i with a link i -> j.
    std::vector<int> fan_in(int j) const {
        require_node(j);
        std::vector<int> out;
        for (const Link& l : links_)
            if (l.dst == j) out.push_back(l.src);
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const Network& a, const Network& b) {
        if (a.nodes_ != b.nodes_ || a.dest_ != b.dest_ || a.links_.size() != b.links_.size())
            return false;
        for (std::size_t i = 0; i < a.links_.size(); ++i) {
            const Link& x = a.links_[i];
            const Link& y = b.links_[i];
            if (x.src != y.src || x.dst != y.dst || x.capacity != y.capacity) return false;
            if (a.channel(x) != b.channel(y)) return false;
        }
        return true;
    }

    void require_node(int id) const {
        if (!has_node(id)) throw std::invalid_argument("network: unknown node " + std::to_string(id));
    }

private:
    std::vector<int> nodes_;
    int dest_ = 0;
    std::vector<Link> links_;
    int level_ = 0;

    static bool contains(const std::vector<int>& v, int id) {
        return std::binary_search(v.begin(), v.end(), id);
    }

    bool has_cycle() const {
        // Kahn's algorithm over the link list.
        std::map<int, int> indeg;
        for (int id : nodes_) indeg[id] = 0;
        for (const Link& l : links_) ++indeg[l.dst];
        std::vector<int> ready;
        for (auto& [id, d] : indeg)
            if (d == 0) ready.push_back(id);
        std::size_t seen = 0;
        while (!ready.empty()) {
            int id = ready.back();
            ready.pop_back();
            ++seen;
            for (const Link& l : links_)
                if (l.src == id && --indeg[l.dst] == 0) ready.push_back(l.dst);
        }
        return seen != nodes_.size();
    }
};

/// A cut: the set of nodes on the source side, destination always excluded.
struct Cut {
    std::vector<int> source_side;  // sorted ascending, unique

    Cut() = default;
    Cut(std::vector<int> nodes) : source_side(std::move(nodes)) {
        std::sort(source_side.begin(), source_side.end());
        source_side.erase(std::unique(source_side.begin(), source_side.end()), source_side.end());
    }

    bool contains(int id) const {
        return std::binary_search(source_side.begin(), source_side.end(), id);
    }
};

inline void validate_cut(const Network& net, const Cut& cut) {
    for (int id : cut.source_side) {
        net.require_node(id);
        if (id == net.dest()) throw std::invalid_argument("cut: destination on source side");
    }
}

/// Nodes of S with at least one link into the complement.
inline std::vector<int> inner_boundary(const Network& net, const Cut& cut) {
    validate_cut(net, cut);
    std::vector<int> out;
    for (int i : cut.source_side)
        for (int j : net.fan_out(i))
            if (!cut.contains(j)) {
                out.push_back(i);
                break;
            }
    return out;
}

/// Nodes of the complement with at least one link from S.
inline std::vector<int> outer_boundary(const Network& net, const Cut& cut) {
    validate_cut(net, cut);
    std::vector<int> out;
    for (int j : net.nodes()) {
        if (cut.contains(j)) continue;
        for (int i : net.fan_in(j))
            if (cut.contains(i)) {
                out.push_back(j);
                break;
            }
    }
    return out;
}

/// Transfer matrix of a cut: the linear map from the transmit vectors of the
/// inner boundary to the receive vectors of the outer boundary. Exactly the
/// crossing links contribute blocks; block order is ascending node id on both
/// sides. Empty boundaries give a 0 x 0 matrix.
inline Gf2Matrix transfer_matrix(const Network& net, const Cut& cut) {
    const std::vector<int> bin = inner_boundary(net, cut);
    const std::vector<int> bout = outer_boundary(net, cut);
    const std::size_t q = static_cast<std::size_t>(net.level());

    std::vector<std::vector<std::optional<Gf2Matrix>>> blocks(
        bout.size(), std::vector<std::optional<Gf2Matrix>>(bin.size()));
    for (std::size_t oi = 0; oi < bout.size(); ++oi)
        for (std::size_t ii = 0; ii < bin.size(); ++ii)
            if (const Link* l = net.find_link(bin[ii], bout[oi])) blocks[oi][ii] = net.channel(*l);

    return block_assemble(blocks, std::vector<std::size_t>(bout.size(), q),
                          std::vector<std::size_t>(bin.size(), q));
}

/// One-shot channel evaluation: every node's received vector as the XOR
/// superposition of its in-links' shifted transmit vectors. Nodes missing
/// from `inputs` transmit the zero vector.
inline std::map<int, BitVec> receive(const Network& net, const std::map<int, BitVec>& inputs) {
    const std::size_t q = static_cast<std::size_t>(net.level());
    for (const auto& [id, x] : inputs) {
        net.require_node(id);
        if (x.size() != q) throw std::invalid_argument("receive: input vector has wrong length");
    }
    std::map<int, BitVec> out;
    for (int id : net.nodes()) out[id] = BitVec(q, 0);
    for (const Link& l : net.links()) {
        auto it = inputs.find(l.src);
        if (it == inputs.end()) continue;
        out[l.dst] = xor_bits(out[l.dst], mat_vec(net.channel(l), it->second));
    }
    return out;
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

inline int parse_node_id(const std::string& tok, int line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line, "expected a positive node id, got '" + tok + "'");
    long long v = 0;
    for (char c : tok) {
        v = v * 10 + (c - '0');
        if (v > 1000000000) throw ParseError(line, "node id out of range");
    }
    if (v == 0) throw ParseError(line, "node ids must be positive");
    return static_cast<int>(v);
}

inline int parse_capacity(const std::string& tok, int line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line, "expected a non-negative capacity, got '" + tok + "'");
    long long v = 0;
    for (char c : tok) {
        v = v * 10 + (c - '0');
        if (v > 65535) throw ParseError(line, "capacity out of range");
    }
    return static_cast<int>(v);
}

}  // namespace detail

/// Parses the line-oriented network format:
///
///   node <id>            declare a node
///   node <id> dest       declare the destination (exactly one)
///   link <src> <dst> <capacity>
///   matrix <src> <dst>   followed by q rows of q characters over {0,1},
///                        overriding that link's default shift channel
///
/// '#' starts a comment; blank lines are ignored. The level q is the maximum
/// capacity over all links, so matrix blocks are validated against it.
inline Network parse_network(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(detail::strip_comment(line));
    }

    // First pass: capacities only, to fix q before matrix blocks are read.
    int level = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto toks = detail::tokenize(lines[i]);
        if (toks.size() == 4 && toks[0] == "link")
            level = std::max(level, detail::parse_capacity(toks[3], static_cast<int>(i + 1)));
    }

    std::vector<int> nodes;
    std::optional<int> dest;
    std::vector<Link> links;
    std::map<std::pair<int, int>, Gf2Matrix> overrides;

    std::size_t i = 0;
    while (i < lines.size()) {
        const int lineno = static_cast<int>(i + 1);
        auto toks = detail::tokenize(lines[i]);
        if (toks.empty()) {
            ++i;
            continue;
        }
        if (toks[0] == "node") {
            if (toks.size() != 2 && !(toks.size() == 3 && toks[2] == "dest"))
                throw ParseError(lineno, "expected 'node <id>' or 'node <id> dest'");
            int id = detail::parse_node_id(toks[1], lineno);
            if (std::find(nodes.begin(), nodes.end(), id) != nodes.end())
                throw ParseError(lineno, "duplicate node " + std::to_string(id));
            nodes.push_back(id);
            if (toks.size() == 3) {
                if (dest) throw ParseError(lineno, "multiple destination nodes");
                dest = id;
            }
            ++i;
        } else if (toks[0] == "link") {
            if (toks.size() != 4) throw ParseError(lineno, "expected 'link <src> <dst> <capacity>'");
            Link l;
            l.src = detail::parse_node_id(toks[1], lineno);
            l.dst = detail::parse_node_id(toks[2], lineno);
            l.capacity = detail::parse_capacity(toks[3], lineno);
            links.push_back(l);
            ++i;
        } else if (toks[0] == "matrix") {
            if (toks.size() != 3) throw ParseError(lineno, "expected 'matrix <src> <dst>'");
            int src = detail::parse_node_id(toks[1], lineno);
            int dst = detail::parse_node_id(toks[2], lineno);
            std::vector<std::string> rows;
            ++i;
            while (rows.size() < static_cast<std::size_t>(level)) {
                if (i >= lines.size())
                    throw ParseError(static_cast<int>(lines.size()), "matrix block ends before q rows");
                auto row_toks = detail::tokenize(lines[i]);
                if (row_toks.empty()) {
                    ++i;
                    continue;
                }
                const int row_line = static_cast<int>(i + 1);
                if (row_toks.size() != 1 || row_toks[0].size() != static_cast<std::size_t>(level) ||
                    row_toks[0].find_first_not_of("01") != std::string::npos)
                    throw ParseError(row_line, "expected a matrix row of q characters over {0,1}");
                rows.push_back(row_toks[0]);
                ++i;
            }
            if (overrides.count({src, dst}))
                throw ParseError(lineno, "duplicate matrix block for link");
            overrides.emplace(std::make_pair(src, dst), Gf2Matrix::from_rows(rows));
        } else {
            throw ParseError(lineno, "unknown keyword '" + toks[0] + "'");
        }
    }

    if (!dest) throw ParseError(static_cast<int>(lines.size()), "missing destination node");

    for (auto& [key, m] : overrides) {
        bool found = false;
        for (Link& l : links)
            if (l.src == key.first && l.dst == key.second) {
                l.channel = m;
                found = true;
            }
        if (!found)
            throw ParseError(static_cast<int>(lines.size()),
                             "matrix block for missing link " + std::to_string(key.first) + " -> " +
                                 std::to_string(key.second));
    }

    try {
        return Network(std::move(nodes), *dest, std::move(links));
    } catch (const std::invalid_argument& e) {
        throw ParseError(static_cast<int>(lines.size()), e.what());
    }
}

/// Renders a network in the format accepted by parse_network.
inline std::string render_network(const Network& net) {
    std::ostringstream out;
    for (int id : net.nodes()) {
        out << "node " << id;
        if (id == net.dest()) out << " dest";
        out << "\n";
    }
    for (const Link& l : net.links())
        out << "link " << l.src << " " << l.dst << " " << l.capacity << "\n";
    for (const Link& l : net.links()) {
        if (!l.channel) continue;
        out << "matrix " << l.src << " " << l.dst << "\n";
        for (const std::string& row : l.channel->to_strings()) out << row << "\n";
    }
    return out.str();
}

}  // namespace lfdn
