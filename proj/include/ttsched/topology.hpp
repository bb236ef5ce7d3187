#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttsched {

enum class NodeKind { Switch, EndSystem, Hybrid };

enum class NodeId : std::uint32_t {};
enum class LinkId : std::uint32_t {};

constexpr std::size_t index(NodeId n) { return static_cast<std::size_t>(n); }
constexpr std::size_t index(LinkId l) { return static_cast<std::size_t>(l); }

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view token);

struct Node {
    std::string name;
    NodeKind kind = NodeKind::Switch;
};

/// Directed link; a full-duplex cable is two links.
struct Link {
    NodeId src{};
    NodeId dst{};
};

/// Physical network: uniquely named nodes and directed links without
/// self-loops or parallel duplicates.
class Topology {
public:
    NodeId add_node(std::string name, NodeKind kind);
    LinkId add_link(NodeId from, NodeId to);
    void add_duplex(NodeId a, NodeId b);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }

    const Node& node(NodeId id) const { return nodes_.at(index(id)); }
    const Link& link(LinkId id) const { return links_.at(index(id)); }
    std::span<const Node> nodes() const { return nodes_; }
    std::span<const Link> links() const { return links_; }

    std::optional<NodeId> find(std::string_view name) const;
    /// Like find() but throws ConfigError for unknown names.
    NodeId at(std::string_view name) const;

    /// Outgoing links of `from`, ordered by the name rank of their heads.
    std::span<const LinkId> out_links(NodeId from) const { return out_.at(index(from)); }
    std::optional<LinkId> link_between(NodeId from, NodeId to) const;

    /// Position of the node in lexicographic name order. Used wherever a
    /// deterministic "lexicographically smaller node sequence" is needed.
    std::uint32_t name_rank(NodeId id) const { return rank_.at(index(id)); }

    /// True when every node reaches every other node along directed links.
    bool strongly_connected() const;

    /// Distinct neighbours reachable over one outgoing link.
    std::vector<NodeId> successors(NodeId from) const;

    bool operator==(const Topology& other) const;

private:
    void refresh_order();

    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<LinkId>> out_;
    std::vector<std::uint32_t> rank_;
    std::unordered_map<std::string, NodeId> by_name_;
};

/// Bidirectional ring of `n` hybrid nodes named n1..n<n>; 2n directed links.
Topology build_ring(int n);

/// Bundled CEV-like fixture: 13 switches, 31 end systems. The switch wiring is
/// an approximation of the published network (line, two stars, ring, tree).
Topology build_cev();

/// Line-oriented text format:
///   node <name> <switch|es|hybrid>
///   duplex <u> <v>
///   link <u> <v>
/// '#' starts a comment.
Topology parse_topology(std::string_view text);
std::string format_topology(const Topology& topo);

} // namespace ttsched
