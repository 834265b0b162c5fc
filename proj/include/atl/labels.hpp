#pragma once

// Symbolic layer over the module families: labels for the common regular and
// affine modules, criticality and orbit structure of the defect number,
// closed-form dimensions, the succession order on cell-module parameters
// (with coincidence detection), composition factors, the regular Hom-group
// table, and the label-level decomposition tables of the four functors.

#include <optional>
#include <string>
#include <vector>

#include "atl/modcore.hpp"

namespace atl {

// ---------------------------------------------------------------------------
// Twist specifications. Every twist value appearing in the structure theory
// is either a formal generic parameter or an exact value (+-1) * v^r.
struct ZSpec {
    bool generic = false;
    int sign = +1;  // +1 or -1
    long r = 0;     // z = sign * v^r
    static ZSpec generic_z() { return ZSpec{true, +1, 0}; }
    static ZSpec vpow(long r, int sign = +1) { return ZSpec{false, sign, r}; }
    static ZSpec zk(long k) { return vpow(k); }  // z_k = v^k
    // exponent of z as a power of v in the cyclotomic ring of order 4*ell
    long expo4l(long ell) const;
    std::string str() const;
};
Scalar zspec_eval(const ZSpec& z, const RingHandle& ring);
// equality of twist values; ell = 0 means the generic ring (exact match),
// ell >= 2 compares exponents modulo 4*ell
bool zspec_eq(const ZSpec& a, const ZSpec& b, long ell);

// ---------------------------------------------------------------------------
enum class Family { S, M, I, P, W, Wcell, L, Pa, IndarS };
std::string family_name(Family f);

struct ModuleLabel {
    Family family = Family::S;
    int n = 0;
    int k = 0;
    std::optional<ZSpec> z;  // required for Wcell and L
    std::string str() const;
};

// ---------------------------------------------------------------------------
// Criticality data for a fixed root-of-unity order (ell = 0: generic q).
// k is critical when k+1 is divisible by ell; the orbit of a non-critical k
// is generated by reflections through the critical integers.
struct CriticalStructure {
    long ell = 0;
    int n = 0;
    bool generic() const { return ell == 0; }
    // beta = -v^2 - v^{-2} vanishes exactly at ell = 2
    bool beta_zero() const { return ell == 2; }
    bool is_critical(int k) const;
    // reflection through the nearest critical integer on the right (left);
    // the result may fall outside [0, n]
    int reflect_right(int k) const;
    int reflect_left(int k) const;
    // the orbit of k intersected with {0..n}, sorted increasingly
    std::vector<int> orbit(int k) const;
};
CriticalStructure critical_structure(long ell, int n);

bool label_valid(const ModuleLabel& lab, const CriticalStructure& cs);

// ---------------------------------------------------------------------------
struct DimValue {
    bool finite = true;
    long value = 0;  // meaningful only when finite; for the free module W it
                     // is the rank over the Laurent ring of the twist
};
DimValue dims(const ModuleLabel& lab, const CriticalStructure& cs);

// ---------------------------------------------------------------------------
// The succession order on pairs (k, z). Nodes are all pairs reachable from
// the start; every edge is verified exactly in v-arithmetic against the two
// defining conditions, tagged 'A' or 'B'.
struct LadderNode {
    int k = 0;
    ZSpec z;
};
struct LadderEdge {
    int from = 0, to = 0;  // indices into nodes; nodes[to] succeeds nodes[from]
    char cond = 'A';
};
struct OrderLadder {
    LadderNode start;
    std::vector<LadderNode> nodes;  // start first, then by increasing k
    std::vector<LadderEdge> edges;
    bool coincidence = false;        // two of the four successor families meet
    bool linear_chain = false;       // the nodes are totally ordered
    bool possibly_incomplete = false;  // edge list not certified exhaustive
};
OrderLadder order_ladder(int k, const ZSpec& z, long ell, int n);

// (k, z) precedes (j, y) in the succession order (reflexive, transitive)
bool preceq(int k, const ZSpec& z, int j, const ZSpec& y, long ell, int n);

// composition factors of the cell module with the given label: one copy of
// the irreducible at each ladder node
std::vector<ModuleLabel> composition_factors(const ModuleLabel& wcell,
                                             const CriticalStructure& cs);

// dimension of the irreducible head of a cell module at a root of unity,
// computed by the alternating four-family telescope and checked against an
// independent closed form; throws on internal disagreement
long dimL_telescope(int k, const ZSpec& z, long ell, int n);

// ---------------------------------------------------------------------------
struct DecompositionReport {
    std::vector<std::pair<ModuleLabel, long>> summands;  // label, multiplicity
    // layered factor diagram, head layer first; empty when not specified
    std::vector<std::vector<ModuleLabel>> loewy;
    bool zero = false;
    long total_dim = -1;  // -1 when infinite or not determined
    std::string json() const;
};

enum class FunctorDir { IndPhi, ResPhi, IndAr, ResAr };
std::string functor_name(FunctorDir d);

// label-level image of a module under one of the four functors; throws
// std::domain_error when no decomposition is derivable for the pair
DecompositionReport functor_table(FunctorDir dir, const ModuleLabel& input,
                                  const CriticalStructure& cs);

// dimension of Hom(M, N) for the regular families I, S, P (same n), using
// the standard reading conventions at the orbit boundary
long hom_table_regular(const ModuleLabel& M, const ModuleLabel& N,
                       const CriticalStructure& cs);

}  // namespace atl
