#pragma once

// Fusion of Temperley-Lieb modules: the explicit induced-module construction
// over the regular algebra at small sizes, the generic closed-form rule for
// standard modules, and the three affine fusion pipelines built from the
// induction and restriction functors, with decomposition reports and a
// dual-route cross-check.

#include <optional>
#include <string>

#include "atl/functors.hpp"

namespace atl {

enum class FusionKind { TL, Affine1, Affine2, Affine3 };
enum class FusionMode { Symbolic, Explicit, Both };

struct FusionTask {
    FusionKind kind = FusionKind::TL;
    ModuleLabel left, right;
    RingHandle ring;
    FusionMode mode = FusionMode::Symbolic;
    int bound = 8;  // size cap for the explicit construction
};

// the induced module over the big regular algebra: quotient of the free
// module on (diagram, basis pair) by the subalgebra relations
ModuleInstance tl_fuse_explicit(const ModuleInstance& M1, const ModuleInstance& M2,
                                const RingHandle& ring, int bound = 8);

// closed-form decomposition of the fusion of two standard modules; only
// derivable at a generic loop value, refused otherwise
DecompositionReport tl_fuse_symbolic(const ModuleLabel& l1, const ModuleLabel& l2,
                                     const CriticalStructure& cs);

struct FusionResult {
    DecompositionReport report;
    std::optional<ModuleInstance> concrete;  // explicit module when requested
    // the regular module the affine pipelines pull back (equal to `concrete`
    // for the regular kind)
    std::optional<ModuleInstance> regular_intermediate;
};

FusionResult affine_fuse(const FusionTask& task);

// multiplicity of each standard module inside a regular module at a generic
// loop value, from the ranks of the through-line ideal images; the generic
// algebra is semisimple, so this determines the direct-sum decomposition
std::map<int, long> standard_multiplicities(const ModuleInstance& X);

struct CrosscheckResult {
    bool ok = true;
    std::string witness;  // mismatch details; empty on success
    DecompositionReport report;
    std::optional<ModuleInstance> concrete;
};

// runs both routes and compares the explicit module's exact invariants
// (dimension, Hom counts, factor multiset, End dimension) with the symbolic
// report
CrosscheckResult fuse_crosscheck(FusionTask task);

}  // namespace atl
