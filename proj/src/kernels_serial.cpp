#include "ddforge/kernels.hpp"

#include <algorithm>
#include <vector>

namespace ddforge::kernels::serial {

#define DDFORGE_PARALLEL_FOR
#include "kernels_impl.inc"
#undef DDFORGE_PARALLEL_FOR

}  // namespace ddforge::kernels::serial
