#include "ddforge/kernels.hpp"

#include <algorithm>
#include <vector>

namespace ddforge::kernels::omp {

#define DDFORGE_PARALLEL_FOR _Pragma("omp parallel for schedule(static) if(dim_hint(n) >= kOmpThreshold)")

namespace {
inline std::size_t dim_hint(int n) { return std::size_t{1} << n; }
}  // namespace

#include "kernels_impl.inc"
#undef DDFORGE_PARALLEL_FOR

}  // namespace ddforge::kernels::omp
