#include "ttsched/topology.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace ttsched {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Switch: return "switch";
    case NodeKind::EndSystem: return "es";
    case NodeKind::Hybrid: return "hybrid";
    }
    return "switch";
}

NodeKind parse_node_kind(std::string_view token) {
    if (token == "switch") return NodeKind::Switch;
    if (token == "es") return NodeKind::EndSystem;
    if (token == "hybrid") return NodeKind::Hybrid;
    throw ParseError("unknown node kind '" + std::string(token) + "'");
}

NodeId Topology::add_node(std::string name, NodeKind kind) {
    if (name.empty()) {
        throw ConfigError("node name must not be empty");
    }
    if (by_name_.contains(name)) {
        throw ConfigError("duplicate node name '" + name + "'");
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    by_name_.emplace(name, id);
    nodes_.push_back(Node{std::move(name), kind});
    out_.emplace_back();
    refresh_order();
    return id;
}

LinkId Topology::add_link(NodeId from, NodeId to) {
    if (index(from) >= nodes_.size() || index(to) >= nodes_.size()) {
        throw ConfigError("link endpoint does not name an existing node");
    }
    if (from == to) {
        throw ConfigError("self-loop on node '" + nodes_[index(from)].name + "'");
    }
    if (link_between(from, to)) {
        throw ConfigError("duplicate link " + nodes_[index(from)].name + "->" + nodes_[index(to)].name);
    }
    const auto id = static_cast<LinkId>(links_.size());
    links_.push_back(Link{from, to});
    out_[index(from)].push_back(id);
    refresh_order();
    return id;
}

void Topology::add_duplex(NodeId a, NodeId b) {
    add_link(a, b);
    add_link(b, a);
}

std::optional<NodeId> Topology::find(std::string_view name) const {
    const auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) {
        return std::nullopt;
    }
    return it->second;
}

NodeId Topology::at(std::string_view name) const {
    if (auto id = find(name)) {
        return *id;
    }
    throw ConfigError("unknown node '" + std::string(name) + "'");
}

std::optional<LinkId> Topology::link_between(NodeId from, NodeId to) const {
    for (const LinkId l : out_.at(index(from))) {
        if (links_[index(l)].dst == to) {
            return l;
        }
    }
    return std::nullopt;
}

void Topology::refresh_order() {
    std::vector<std::uint32_t> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return nodes_[a].name < nodes_[b].name; });
    rank_.assign(nodes_.size(), 0);
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        rank_[order[r]] = r;
    }
    for (auto& outs : out_) {
        std::sort(outs.begin(), outs.end(), [&](LinkId a, LinkId b) {
            return rank_[index(links_[index(a)].dst)] < rank_[index(links_[index(b)].dst)];
        });
    }
}

bool Topology::strongly_connected() const {
    if (nodes_.empty()) {
        return true;
    }
    auto reach = [&](bool reverse) {
        std::vector<std::vector<std::size_t>> adj(nodes_.size());
        for (const auto& l : links_) {
            if (reverse) {
                adj[index(l.dst)].push_back(index(l.src));
            } else {
                adj[index(l.src)].push_back(index(l.dst));
            }
        }
        std::vector<bool> seen(nodes_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (const auto v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == nodes_.size();
    };
    return reach(false) && reach(true);
}

std::vector<NodeId> Topology::successors(NodeId from) const {
    std::vector<NodeId> out;
    for (const LinkId l : out_links(from)) {
        out.push_back(links_[index(l)].dst);
    }
    return out;
}

bool Topology::operator==(const Topology& other) const {
    if (nodes_.size() != other.nodes_.size() || links_.size() != other.links_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name != other.nodes_[i].name || nodes_[i].kind != other.nodes_[i].kind) {
            return false;
        }
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
        if (links_[i].src != other.links_[i].src || links_[i].dst != other.links_[i].dst) {
            return false;
        }
    }
    return true;
}

Topology build_ring(int n) {
    if (n < 3) {
        throw ConfigError("ring needs at least 3 nodes, got " + std::to_string(n));
    }
    Topology topo;
    std::vector<NodeId> ids;
    for (int i = 1; i <= n; ++i) {
        ids.push_back(topo.add_node("n" + std::to_string(i), NodeKind::Hybrid));
    }
    for (int i = 0; i < n; ++i) {
        topo.add_duplex(ids[i], ids[(i + 1) % n]);
    }
    return topo;
}

Topology build_cev() {
    // Switch backbone (approximate wiring):
    //   line  L1 - L2 - L3
    //   star  hubs SA (on L1) and SB (on L3), their leaves are end systems
    //   ring  R1 - R2 - R3 - R4 - R1, attached at L2 with a redundant R3 - L3 link
    //   tree  T1 (on L2) -> T2, T3; T2 -> T4
    Topology topo;
    const std::array<const char*, 13> switches{"L1", "L2", "L3", "SA", "SB", "R1", "R2",
                                                "R3", "R4", "T1", "T2", "T3", "T4"};
    std::vector<NodeId> sw;
    for (const char* name : switches) {
        sw.push_back(topo.add_node(name, NodeKind::Switch));
    }
    auto s = [&](std::string_view name) { return topo.at(name); };
    topo.add_duplex(s("L1"), s("L2"));
    topo.add_duplex(s("L2"), s("L3"));
    topo.add_duplex(s("SA"), s("L1"));
    topo.add_duplex(s("SB"), s("L3"));
    topo.add_duplex(s("R1"), s("R2"));
    topo.add_duplex(s("R2"), s("R3"));
    topo.add_duplex(s("R3"), s("R4"));
    topo.add_duplex(s("R4"), s("R1"));
    topo.add_duplex(s("R1"), s("L2"));
    topo.add_duplex(s("R3"), s("L3"));
    topo.add_duplex(s("T1"), s("L2"));
    topo.add_duplex(s("T1"), s("T2"));
    topo.add_duplex(s("T1"), s("T3"));
    topo.add_duplex(s("T2"), s("T4"));

    // 31 end systems, round-robin over the switches in declaration order.
    for (int e = 0; e < 31; ++e) {
        std::string name = (e + 1 < 10 ? "es0" : "es") + std::to_string(e + 1);
        const NodeId es = topo.add_node(std::move(name), NodeKind::EndSystem);
        topo.add_duplex(es, sw[static_cast<std::size_t>(e) % sw.size()]);
    }
    return topo;
}

Topology parse_topology(std::string_view text) {
    Topology topo;
    int line_no = 0;
    for (const auto raw : text::lines(text)) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tok = text::words(line);
        if (tok.empty()) {
            continue;
        }
        const auto where = " (line " + std::to_string(line_no) + ")";
        if (tok.size() != 3) {
            throw ParseError("expected 3 fields" + where);
        }
        try {
            if (tok[0] == "node") {
                topo.add_node(std::string(tok[1]), parse_node_kind(tok[2]));
            } else if (tok[0] == "duplex") {
                topo.add_duplex(topo.at(tok[1]), topo.at(tok[2]));
            } else if (tok[0] == "link") {
                topo.add_link(topo.at(tok[1]), topo.at(tok[2]));
            } else {
                throw ParseError("unknown directive '" + std::string(tok[0]) + "'");
            }
        } catch (const ConfigError& e) {
            throw ParseError(e.what() + where);
        } catch (const ParseError& e) {
            throw ParseError(e.what() + where);
        }
    }
    return topo;
}

std::string format_topology(const Topology& topo) {
    std::ostringstream out;
    for (const auto& n : topo.nodes()) {
        out << "node " << n.name << ' ' << to_string(n.kind) << '\n';
    }
    std::vector<bool> done(topo.link_count(), false);
    for (std::size_t i = 0; i < topo.link_count(); ++i) {
        if (done[i]) {
            continue;
        }
        const auto& l = topo.links()[i];
        done[i] = true;
        const auto back = topo.link_between(l.dst, l.src);
        if (back && !done[index(*back)]) {
            done[index(*back)] = true;
            out << "duplex " << topo.node(l.src).name << ' ' << topo.node(l.dst).name << '\n';
        } else {
            out << "link " << topo.node(l.src).name << ' ' << topo.node(l.dst).name << '\n';
        }
    }
    return out.str();
}

} // namespace ttsched
