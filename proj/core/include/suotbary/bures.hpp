#pragma once

#include <cstdint>

#include "suotbary/spd.hpp"

namespace suotbary {

/// Tangent vector X at Σ on the Bures–Wasserstein manifold. Tangent spaces
/// are identified with symmetric matrices.
struct TangentVector {
  SpdMatrix base;
  SymMatrix dir;
};

/// Exp_Σ(X) = (Id + X) Σ (Id + X). Throws kRetractionOutOfCone when
/// Id + X is not positive definite.
SpdMatrix exp_map(const TangentVector& v);
SpdMatrix exp_map(const SpdMatrix& base, const SymMatrix& dir);

/// Log_Σ(Σ') = T_{Σ→Σ'} − Id.
TangentVector log_map(const SpdMatrix& src, const SpdMatrix& dst);

/// ⟨A, B⟩_Σ = tr(A Σ B).
double tangent_inner(const SpdMatrix& base, const SymMatrix& a, const SymMatrix& b);
double tangent_norm(const SpdMatrix& base, const SymMatrix& a);

/// Point at fraction t ∈ [0, 1] of the geodesic from src to dst.
SpdMatrix geodesic(const SpdMatrix& src, const SpdMatrix& dst, double t);

/// expm((A + Aᵀ)/2) where A has i.i.d. N(0, sigma²) entries drawn from
/// Xoshiro256(seed) in row-major order.
SpdMatrix sample_spd(int d, double sigma, std::uint64_t seed);

/// Diagonal variant: diag(exp(z_i)) with z_i ~ N(0, sigma²).
SpdMatrix sample_diagonal_spd(int d, double sigma, std::uint64_t seed);

}  // namespace suotbary
