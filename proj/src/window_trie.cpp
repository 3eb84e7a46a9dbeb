#include "mog/window_trie.hpp"

#include <algorithm>

#include "mog/error.hpp"

namespace mog {

WindowTrie::WindowTrie(const PathCollection& paths, std::size_t max_depth) : max_depth_(0), levels_(1) {
    if (max_depth > 255) throw ContractError("window depth above 255 is not supported");

    parent_.push_back(npos);
    vertex_.push_back(0);
    depth_.push_back(0);
    count_.push_back(paths.total_traversals());
    levels_[0].push_back(root);

    std::size_t positions = 0;
    for (auto p : paths) positions += p.vertices.size();
    frontier_.assign(positions, root);
    children_.reserve(std::min<std::size_t>(positions * std::min<std::size_t>(max_depth, 4), 1u << 26));

    while (max_depth_ < max_depth) deepen(paths);
}

void WindowTrie::deepen(const PathCollection& paths) {
    if (max_depth_ == 255) throw ContractError("window depth above 255 is not supported");
    const std::size_t d = max_depth_;
    levels_.emplace_back();
    std::size_t pos = 0;
    for (auto p : paths) {
        const auto& vs = p.vertices;
        for (std::size_t start = 0; start < vs.size(); ++start, ++pos) {
            std::uint32_t node = frontier_.at(pos);
            if (node == npos) continue;
            if (start + d >= vs.size()) {
                frontier_[pos] = npos;
                continue;
            }
            auto [it, inserted] = children_.try_emplace(key(node, vs[start + d]), 0u);
            if (inserted) {
                auto id = static_cast<std::uint32_t>(parent_.size());
                if (id == npos) throw AnalysisError("window trie exceeds 2^32 nodes");
                it->second = id;
                parent_.push_back(node);
                vertex_.push_back(vs[start + d]);
                depth_.push_back(static_cast<std::uint8_t>(d + 1));
                count_.push_back(0);
                levels_[d + 1].push_back(id);
            }
            count_[it->second] += p.frequency;
            frontier_[pos] = it->second;
        }
    }
    if (pos != frontier_.size()) throw ContractError("deepen called with a different collection");
    ++max_depth_;
}

std::uint32_t WindowTrie::child(std::uint32_t node, Vertex v) const {
    auto it = children_.find(key(node, v));
    return it == children_.end() ? npos : it->second;
}

std::uint32_t WindowTrie::find(std::span<const Vertex> window) const {
    std::uint32_t node = root;
    for (Vertex v : window) {
        node = child(node, v);
        if (node == npos) return npos;
    }
    return node;
}

void WindowTrie::window(std::uint32_t node, std::vector<Vertex>& out) const {
    out.resize(depth_[node]);
    for (std::size_t i = out.size(); i > 0; --i) {
        out[i - 1] = vertex_[node];
        node = parent_[node];
    }
}

} // namespace mog
