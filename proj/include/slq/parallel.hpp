#pragma once

#include <cstddef>
#include <functional>

namespace slq {

/// Global worker count for row-parallel loops (1 = sequential). Results are
/// deterministic for any setting: workers write disjoint rows and all
/// reductions happen in index order afterwards.
void set_num_threads(int n);
int num_threads();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace slq
