#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nftsquat {

/// Byte-level multi-pattern substring automaton. Patterns are added, then
/// build() freezes the automaton; after that search() is const and may be
/// called concurrently.
class AhoCorasick {
public:
  AhoCorasick() { nodes_.emplace_back(); }

  /// Returns the pattern id (dense, in insertion order of distinct patterns).
  std::size_t add(std::string_view pattern) {
    std::uint32_t cur = 0;
    for (unsigned char b : pattern) {
      auto next = child(cur, b);
      if (next == kNone) {
        next = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[next].depth = nodes_[cur].depth + 1;
        auto& edges = nodes_[cur].edges;
        edges.insert(std::lower_bound(edges.begin(), edges.end(), std::pair{b, 0u},
                                      [](const auto& x, const auto& y) { return x.first < y.first; }),
                     {b, next});
      }
      cur = next;
    }
    if (nodes_[cur].pattern == kNone) {
      nodes_[cur].pattern = static_cast<std::uint32_t>(lengths_.size());
      lengths_.push_back(pattern.size());
    }
    built_ = false;
    return nodes_[cur].pattern;
  }

  void build() {
    std::queue<std::uint32_t> q;
    for (auto [b, n] : nodes_[0].edges) {
      nodes_[n].fail = 0;
      q.push(n);
    }
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      auto f = nodes_[u].fail;
      nodes_[u].output = nodes_[f].pattern != kNone ? f : nodes_[f].output;
      for (auto [b, v] : nodes_[u].edges) {
        auto g = nodes_[u].fail;
        std::uint32_t target = kNone;
        for (;;) {
          target = child(g, b);
          if (target != kNone || g == 0) break;
          g = nodes_[g].fail;
        }
        nodes_[v].fail = (target != kNone && target != v) ? target : 0;
        q.push(v);
      }
    }
    built_ = true;
  }

  bool built() const noexcept { return built_; }
  std::size_t pattern_count() const noexcept { return lengths_.size(); }
  std::size_t pattern_length(std::size_t id) const { return lengths_.at(id); }

  /// Calls on_match(pattern_id, end_offset) for every occurrence.
  template <class F>
  void search(std::string_view haystack, F&& on_match) const {
    std::uint32_t cur = 0;
    for (std::size_t i = 0; i < haystack.size(); ++i) {
      auto b = static_cast<unsigned char>(haystack[i]);
      for (;;) {
        auto n = child(cur, b);
        if (n != kNone) {
          cur = n;
          break;
        }
        if (cur == 0) break;
        cur = nodes_[cur].fail;
      }
      for (auto k = nodes_[cur].pattern != kNone ? cur : nodes_[cur].output; k != kNone;
           k = nodes_[k].output) {
        on_match(static_cast<std::size_t>(nodes_[k].pattern), i + 1);
      }
    }
  }

private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> edges;  // sorted by byte
    std::uint32_t fail = 0;
    std::uint32_t output = kNone;  // nearest proper suffix node that ends a pattern
    std::uint32_t pattern = kNone;
    std::uint32_t depth = 0;
  };

  std::uint32_t child(std::uint32_t node, unsigned char b) const {
    const auto& e = nodes_[node].edges;
    auto it = std::lower_bound(e.begin(), e.end(), b,
                               [](const auto& x, unsigned char y) { return x.first < y; });
    return (it != e.end() && it->first == b) ? it->second : kNone;
  }

  std::vector<Node> nodes_;
  std::vector<std::size_t> lengths_;
  bool built_ = false;
};

}  // namespace nftsquat
