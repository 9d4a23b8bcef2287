#pragma once

#include <cstdint>
#include <vector>

#include "dadist/families.hpp"
#include "dadist/kernels.hpp"
#include "dadist/rng.hpp"

namespace dadist {

/// Joint draw X_0..X_k from the spherical source law: density h(beta sum tr
/// X_i^H X_i), realized as a uniform direction on the realified unit sphere
/// scaled by the kernel's radial law.
struct SourceDraw {
  Algebra algebra;
  int m;
  std::vector<DAMatrix> blocks;
};

SourceDraw sample_source(Algebra algebra, int m, const std::vector<int>& n,
                         const KernelSpec& kernel, Rng& rng);

/// Apply the family's defining transformation to a source draw. Throws
/// singular_error on a rank-deficient block (probability zero; retry upstream).
FamilyPoint derive(const FamilyInstance& inst, const SourceDraw& draw);

/// count i.i.d. draws, a pure function of (inst, count, seed): each draw index
/// derives its own RNG stream. Families with non-integer n_i = 2 a_i have no
/// constructive sampler and raise unsupported_error. Kernel-free families
/// (their laws are source-invariant) draw through source_kernel, gaussian by
/// default; kernel-dependent families always use their own kernel.
std::vector<FamilyPoint> sample(const FamilyInstance& inst, int count,
                                std::uint64_t seed,
                                const KernelSpec& source_kernel = KernelSpec{});

/// Integer row counts n_i = 2 a_i of an instance; unsupported_error when some
/// a_i is not half-integral.
std::vector<int> integer_rows(const FamilyInstance& inst);

}  // namespace dadist
