#pragma once

// Exact intertwiner-space computation between concrete modules: dimension and
// explicit bases of Hom spaces, End dimensions, radical quotients of cell
// modules (concrete irreducibles), and composition-factor multisets.

#include <vector>

#include "atl/labels.hpp"
#include "atl/modcore.hpp"

namespace atl {

// right null space of a matrix over the coefficient field; each returned
// vector has one entry per column
std::vector<std::vector<Scalar>> mat_nullspace(Matrix m);

struct IntertwinerSpace {
    long dim = 0;
    // each basis matrix F (dim B x dim A) satisfies F rho_A(g) = rho_B(g) F
    // for every acting generator g
    std::vector<Matrix> basis;
};

// all intertwiners from A to B; the modules must live over the same ring and
// carry actions of the same generator set
IntertwinerSpace hom_space(const ModuleInstance& A, const ModuleInstance& B);

long end_dim(const ModuleInstance& A);

// block-diagonal direct sum (used for solver calibration and certification)
ModuleInstance direct_sum(const ModuleInstance& A, const ModuleInstance& B);

// quotient of a cell module by the radical of its Gram form; the result is
// the irreducible head, of dimension equal to the Gram rank
ModuleInstance radical_quotient(const ModuleInstance& W);

// concrete irreducible module for an L label, as a radical quotient of the
// corresponding cell module
ModuleInstance build_L_concrete(const ModuleLabel& lab, const RingHandle& ring);

struct FactorMultiset {
    std::vector<std::pair<ModuleLabel, long>> factors;
    bool certain = false;  // multiplicities certified by matching Hom counts
                           // on both sides and exact dimension bookkeeping
};

// multiplicities of the candidate irreducibles inside M, computed from Hom
// spaces in both directions; never fabricates an answer: when the dimension
// bookkeeping does not close the certainty flag is false
FactorMultiset factor_multiset(const ModuleInstance& M,
                               const std::vector<ModuleLabel>& candidates,
                               const CriticalStructure& cs);

}  // namespace atl
