#pragma once

// Bridge between the symbolic functor tables and concrete modules: pull a
// regular module back along the morphism into the affine algebra, build the
// diagram modules M(n,k) and the projectives P(n,k) by idempotent splitting,
// certify or refute module isomorphisms, and run the functor-identity suite.

#include <optional>
#include <string>
#include <vector>

#include "atl/homsolver.hpp"

namespace atl {

struct PulledBackModule {
    ModuleInstance base;    // the regular module
    ModuleInstance module;  // the same space with the affine action through
                            // the images of the affine generators
};

// affine module structure on a regular module: e_i acts as u_i, the extra
// generators act through the braiding words; the result is an exact affine
// representation of the same dimension
PulledBackModule resphi_concrete(const ModuleInstance& X);

// the module of all diagrams from k to n points under composition
ModuleInstance build_M_concrete(int n, int k, const RingHandle& ring);

// the projective cover P(n,k), split off M(n,k) by peeling the lower
// projective summands with explicit idempotents; needs an invertible loop
// value
ModuleInstance build_P_concrete(int n, int k, const RingHandle& ring);

// submodule carried by an idempotent intertwiner Q (Q^2 = Q, Q commutes with
// the action)
ModuleInstance image_submodule(const ModuleInstance& X, const Matrix& Q);

enum class IsoVerdict { IsomorphicCertified, Distinguished, Inconclusive };

struct IsoResult {
    IsoVerdict verdict = IsoVerdict::Inconclusive;
    std::string detail;
    std::optional<Matrix> intertwiner;  // invertible witness when certified
};

// decide isomorphism where possible: certification by an explicit invertible
// intertwiner, refutation by a computable invariant, otherwise inconclusive
IsoResult isomorphism_signature(const ModuleInstance& A, const ModuleInstance& B);

struct FunctorIdentityReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool all_pass() const;
};

// for each regular test module: the pulled-back module is a representation,
// restricting it returns the original action literally, and dimensions are
// preserved; for each pair on the same algebra: Hom dimensions agree before
// and after pulling back (full faithfulness)
FunctorIdentityReport functor_identity_check(
    const std::vector<ModuleInstance>& regular_modules);

}  // namespace atl
