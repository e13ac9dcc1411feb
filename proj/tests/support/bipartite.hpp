#pragma once

#include <cstdint>
#include <vector>

namespace fprank::testing {

// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
// adj[x] lists the right-side neighbors of left vertex x.
size_t max_bipartite_matching(const std::vector<std::vector<uint32_t>>& adj, size_t right_size);

} // namespace fprank::testing
