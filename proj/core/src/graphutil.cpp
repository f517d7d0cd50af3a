#include "graphutil.hpp"

#include <algorithm>
#include <deque>

namespace coxforge::detail {

std::vector<int> bfs_all(const AdjList& adj, int src) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int w : adj[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

ExtInt bfs_distance(const AdjList& adj, int a, int b) {
  if (a == b) return 0;
  std::vector<int> dist = bfs_all(adj, a);
  return dist[b] < 0 ? ExtInt::infinity() : ExtInt(dist[b]);
}

bool graph_connected(const AdjList& adj) {
  if (adj.size() <= 1) return true;
  std::vector<int> dist = bfs_all(adj, 0);
  return std::all_of(dist.begin(), dist.end(), [](int d) { return d >= 0; });
}

std::vector<int> components(const AdjList& adj) {
  std::vector<int> comp(adj.size(), -1);
  int next = 0;
  for (int s = 0; s < static_cast<int>(adj.size()); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int w : adj[u])
        if (comp[w] < 0) {
          comp[w] = next;
          q.push_back(w);
        }
    }
    ++next;
  }
  return comp;
}

ExtInt graph_diameter(const AdjList& adj) {
  const int n = static_cast<int>(adj.size());
  if (n <= 1) return 0;
  long long best = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist = bfs_all(adj, s);
    for (int d : dist) {
      if (d < 0) return ExtInt::infinity();
      best = std::max<long long>(best, d);
    }
  }
  return best;
}

namespace {

// Path root -> v via BFS parents, inclusive.
std::vector<int> parent_path(const std::vector<int>& parent, int v) {
  std::vector<int> path;
  for (int u = v; u >= 0; u = parent[u]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

CycleResult shortest_cycle(const AdjList& adj) {
  const int n = static_cast<int>(adj.size());
  CycleResult best;

  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1), parent(n, -1);
    std::deque<int> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int w : adj[u])
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push_back(w);
        }
    }
    // A non-tree edge (u, w) closes a cycle through s of dist(u)+dist(w)+1
    // edges; minimized over all roots this is exact.
    for (int u = 0; u < n; ++u) {
      if (dist[u] < 0) continue;
      for (int w : adj[u]) {
        if (w <= u || dist[w] < 0) continue;
        if (parent[u] == w || parent[w] == u) continue;
        ExtInt cand = ExtInt(dist[u] + dist[w] + 1);
        if (cand < best.girth) {
          std::vector<int> pu = parent_path(parent, u);
          std::vector<int> pw = parent_path(parent, w);
          // At the optimum both tree paths meet only at the root, so the
          // closed walk is a simple cycle; reject non-simple walks.
          std::vector<int> cyc(pu);
          for (auto it = pw.rbegin(); it != pw.rend() && *it != s; ++it)
            cyc.push_back(*it);
          std::vector<int> sorted(cyc);
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
            best.girth = cand;
            best.cycle = std::move(cyc);
          }
        }
      }
    }
  }

  if (best.girth.is_infinite()) return best;

  // Canonical rotation: start at the least vertex, step toward its smaller
  // cycle neighbor.
  std::vector<int>& c = best.cycle;
  const int len = static_cast<int>(c.size());
  int pos = static_cast<int>(std::min_element(c.begin(), c.end()) - c.begin());
  int fwd = c[(pos + 1) % len];
  int bwd = c[(pos + len - 1) % len];
  std::vector<int> out;
  out.reserve(len);
  int step = (fwd <= bwd) ? 1 : -1;
  for (int k = 0; k < len; ++k) out.push_back(c[((pos + step * k) % len + len) % len]);
  c = std::move(out);
  return best;
}

}  // namespace coxforge::detail
