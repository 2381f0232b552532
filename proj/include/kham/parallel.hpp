#ifndef KHAM_PARALLEL_HPP
#define KHAM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace kham {

// Runs fn(i) for i in [0, n). Tasks must write only to disjoint,
// index-addressed outputs; results are then independent of worker count.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

} // namespace kham

#endif
