#pragma once

// Statevector kernels. Qubit q is bit q of the amplitude index. The serial
// namespace is the reference implementation; omp is the same arithmetic with
// OpenMP work sharing over the outer loop (engaged above kOmpThreshold
// amplitudes, and serial when already inside a parallel region).

#include "ddforge/gates.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>

namespace ddforge::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kOmpThreshold = std::size_t{1} << 12;

// Diagonal factor fused in front of a one-qubit matrix. For the amplitude
// pair (x0, x1) differing in the target bit, pattern p collects bits nb[k] of
// x0 at position k; x0 is scaled by phase0[p], x1 by phase1[p].
struct PairDiagonal {
  const int* nb = nullptr;
  int count = 0;
  const cplx* phase0 = nullptr;
  const cplx* phase1 = nullptr;
};

#define DDFORGE_KERNEL_DECLS                                                                    \
  void apply_1q(cplx* psi, int n, int q, const Mat2& m);                                        \
  void apply_1q_diag(cplx* psi, int n, int q, const Mat2& m, const PairDiagonal& d);            \
  /* local index of the 4x4 is bit(a) + 2 bit(b) */                                             \
  void apply_2q(cplx* psi, int n, int a, int b, const Mat4& m);                                 \
  /* psi[x] *= table[pattern(x)], pattern bit k = bit bits[k] of x */                           \
  void apply_diag(cplx* psi, int n, const int* bits, int nbits, const cplx* table);             \
  /* out[pattern] = sum of |psi[x]|^2, pattern bit k = bit meas[k]; out has 2^m entries */      \
  void marginal_probabilities(const cplx* psi, int n, const int* meas, int m, double* out);    \
  double norm_squared(const cplx* psi, int n);

namespace serial {
DDFORGE_KERNEL_DECLS
}
namespace omp {
DDFORGE_KERNEL_DECLS
}

#undef DDFORGE_KERNEL_DECLS

}  // namespace ddforge::kernels
