#ifndef QUASIKERNEL_PATH_MAP_HPP
#define QUASIKERNEL_PATH_MAP_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace quasikernel {

using Path = std::vector<std::size_t>;

inline std::string show_path(const Path& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

/// Finite description of a partial map on paths: exact entries, plus
/// prefix entries that answer for every path extending the prefix.
/// Exact entries win; among prefixes the longest one wins.
template <class V>
class PathMap {
 public:
  void set(Path p, V v) { exact_[std::move(p)] = std::move(v); }
  void set_prefix(Path p, V v) { prefix_[std::move(p)] = std::move(v); }
  void erase(const Path& p) {
    exact_.erase(p);
    prefix_.erase(p);
  }

  std::optional<V> get(const Path& p) const {
    if (auto it = exact_.find(p); it != exact_.end()) return it->second;
    for (std::size_t len = p.size() + 1; len-- > 0;) {
      Path q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len));
      if (auto it = prefix_.find(q); it != prefix_.end()) return it->second;
    }
    return std::nullopt;
  }

  /// Map composed with cons j: p ↦ this(j :: p).
  PathMap shifted_down(std::size_t j) const {
    PathMap out;
    for (const auto& [p, v] : exact_)
      if (!p.empty() && p[0] == j) out.exact_[Path(p.begin() + 1, p.end())] = v;
    for (const auto& [p, v] : prefix_) {
      if (p.empty()) {
        out.prefix_[{}] = v;
      } else if (p[0] == j) {
        out.prefix_[Path(p.begin() + 1, p.end())] = v;
      }
    }
    return out;
  }

  /// Copies every entry of `child` under the prefix [j].
  void graft(std::size_t j, const PathMap& child) {
    for (const auto& [p, v] : child.exact_) {
      Path q{j};
      q.insert(q.end(), p.begin(), p.end());
      exact_[q] = v;
    }
    for (const auto& [p, v] : child.prefix_) {
      Path q{j};
      q.insert(q.end(), p.begin(), p.end());
      prefix_[q] = v;
    }
  }

  const std::map<Path, V>& exact_entries() const { return exact_; }
  const std::map<Path, V>& prefix_entries() const { return prefix_; }

  /// Paths that together witness every distinct behaviour of the maps in
  /// `maps`: all keys, and each prefix key extended by a fresh index.
  template <class... Maps>
  static std::vector<Path> witnesses(const Maps&... maps) {
    std::set<Path> keys;
    std::size_t fresh = 0;
    auto scan = [&](const auto& m) {
      for (const auto* table : {&m.exact_, &m.prefix_})
        for (const auto& [p, v] : *table) {
          keys.insert(p);
          for (auto j : p) fresh = std::max(fresh, j + 1);
        }
    };
    (scan(maps), ...);
    std::set<Path> out = keys;
    out.insert(Path{fresh});
    auto extend = [&](const auto& m) {
      for (const auto& [p, v] : m.prefix_) {
        Path q = p;
        q.push_back(fresh);
        out.insert(q);
      }
    };
    (extend(maps), ...);
    return {out.begin(), out.end()};
  }

  std::size_t entry_count() const { return exact_.size() + prefix_.size(); }

 private:
  std::map<Path, V> exact_;
  std::map<Path, V> prefix_;
};

/// Exact semantic equality of two path maps under `same` on values.
template <class V>
bool path_maps_equal(const PathMap<V>& a, const PathMap<V>& b,
                     const std::function<bool(const V&, const V&)>& same) {
  for (const auto& p : PathMap<V>::witnesses(a, b)) {
    auto x = a.get(p), y = b.get(p);
    if (x.has_value() != y.has_value()) return false;
    if (x && !same(*x, *y)) return false;
  }
  return true;
}

}  // namespace quasikernel

#endif
