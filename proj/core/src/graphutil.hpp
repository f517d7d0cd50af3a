#pragma once

// Small BFS toolkit over adjacency lists with local indices. Shared by the
// rank-2 views, residue connectivity and the lazy-geometry residue graphs.

#include <vector>

#include "coxforge/extint.hpp"

namespace coxforge::detail {

using AdjList = std::vector<std::vector<int>>;

// Distances from src; -1 on unreached vertices.
std::vector<int> bfs_all(const AdjList& adj, int src);

ExtInt bfs_distance(const AdjList& adj, int a, int b);

bool graph_connected(const AdjList& adj);  // true on <= 1 vertex

// Component index per vertex, numbered by least contained vertex.
std::vector<int> components(const AdjList& adj);

ExtInt graph_diameter(const AdjList& adj);  // infinity when disconnected

struct CycleResult {
  ExtInt girth = ExtInt::infinity();
  std::vector<int> cycle;  // empty when acyclic
};

// Shortest cycle via BFS from every vertex. The cycle is rotated to start
// at its least vertex and directed toward the smaller neighbor.
CycleResult shortest_cycle(const AdjList& adj);

}  // namespace coxforge::detail
