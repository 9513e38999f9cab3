#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vaxmed/graph.hpp"

namespace oracle {

// Adjacency-matrix DAG: adj[i][j] == true means i -> j.
using Matrix = std::vector<std::vector<bool>>;

// True when some simple path between x and y in the skeleton is open given
// the conditioning mask. Brute-force enumeration of every simple path.
bool open_path_exists(const Matrix& adj, int x, int y, std::uint32_t z_mask);

// Every labelled DAG on n nodes, each as an adjacency matrix.
std::vector<Matrix> all_dags(int n);

vaxmed::CausalDag to_dag(const Matrix& adj);
std::string node_name(int i);

}  // namespace oracle
