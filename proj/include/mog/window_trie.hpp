#ifndef MOG_WINDOW_TRIE_HPP
#define MOG_WINDOW_TRIE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mog/path_core.hpp"

namespace mog {

// Prefix tree of every contiguous window (up to a maximum number of
// vertices) of every path in a collection. A node at depth d stands for one
// distinct d-vertex window; its count is the frequency-weighted number of
// occurrences of that window. Node 0 is the root (the empty window), whose
// count is the total number of vertex traversals.
class WindowTrie {
public:
    static constexpr std::uint32_t root = 0;
    static constexpr std::uint32_t npos = 0xffffffffu;

    WindowTrie(const PathCollection& paths, std::size_t max_depth);

    // Adds one more level. `paths` must be the collection the trie was built
    // from.
    void deepen(const PathCollection& paths);

    std::size_t max_depth() const noexcept { return max_depth_; }
    std::size_t size() const noexcept { return parent_.size(); }

    std::uint32_t parent(std::uint32_t node) const { return parent_[node]; }
    Vertex last_vertex(std::uint32_t node) const { return vertex_[node]; }
    std::size_t depth(std::uint32_t node) const { return depth_[node]; }
    std::uint64_t count(std::uint32_t node) const { return count_[node]; }

    std::uint32_t child(std::uint32_t node, Vertex v) const;
    // Node for a full window, or npos if it never occurs.
    std::uint32_t find(std::span<const Vertex> window) const;

    // Nodes at depth d in creation order.
    const std::vector<std::uint32_t>& level(std::size_t d) const { return levels_.at(d); }

    // Writes the vertices of `node`'s window, root first, into `out`.
    void window(std::uint32_t node, std::vector<Vertex>& out) const;

private:
    static std::uint64_t key(std::uint32_t node, Vertex v) noexcept {
        return (static_cast<std::uint64_t>(node) << 32) | v;
    }

    std::size_t max_depth_;
    std::vector<std::uint32_t> parent_;
    std::vector<Vertex> vertex_;
    std::vector<std::uint8_t> depth_;
    std::vector<std::uint64_t> count_;
    std::vector<std::vector<std::uint32_t>> levels_;
    std::unordered_map<std::uint64_t, std::uint32_t> children_;
    // Node of the deepest window starting at each path position, npos once
    // the window runs past the end of its path.
    std::vector<std::uint32_t> frontier_;
};

} // namespace mog

#endif
