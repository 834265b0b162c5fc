#pragma once

// Concrete finite-rank modules over the regular and affine Temperley-Lieb
// algebras: standard modules S_{n,k}, cell modules W_{n,k;z} (and their
// free counterpart over the Laurent ring in the twist variable), Gram
// matrices with exact radical ranks, the induced module Indar S_{n,k}
// with its stratum filtration, the restriction filtration of cell modules,
// and the Peirce graded diagram count.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atl/algebra.hpp"

namespace atl {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix mat_zero(const RingHandle& ring, long rows, long cols);
Matrix mat_identity(const RingHandle& ring, long n);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_scale(const Scalar& c, const Matrix& a);
bool mat_eq(const Matrix& a, const Matrix& b);
// exact row reduction over the coefficient field; destroys its argument
long mat_rank(Matrix m);
Scalar mat_det(Matrix m);

// Generator keys used in action maps: e_i (affine) or u_i (regular) under
// their index; the translation and its inverse under negative keys.
constexpr int GEN_TAU = -1;
constexpr int GEN_TAU_INV = -2;

struct ModuleInstance {
    RingHandle ring;
    int n = 0;      // algebra size
    bool affine = true;
    int k = 0;      // number of through lines (defects)
    std::vector<AffDiagram> basis;
    std::map<int, Matrix> action;
    std::optional<Scalar> twist;  // z for cell modules
    long dim() const { return (long)basis.size(); }
};

// Distinguished diagrams. x_{n,k} generates Hom(k,n) as a module; y_{n,k}
// is the idempotent-like element of the regular algebra with y x = x, and
// r_{n,k}^j in Hom(n, k-2j) is obtained from the right part of y by bending
// j through lines around the periodic boundary.
AffDiagram x_gen(int n, int k);
AffDiagram y_gen(int n, int k);                 // k >= 1
AffDiagram r_gen(int n, int k, int j);          // 0 <= j <= k/2, k >= 1

// Canonical representative of a monic diagram in Hom(k,n) modulo the right
// translation action (k > 0) or loop insertion (k = 0). expo is the removed
// translation power (k > 0) or loop count (k = 0).
struct CanonResult { AffDiagram rep; long expo; };
CanonResult canon_monic(const AffDiagram& d);

// Canonical monic basis: all monic (k,n) diagrams with canonical winding
// (k > 0) or no non-contractible loops (k = 0); regular_only restricts to
// rank-zero diagrams (link patterns).
std::vector<AffDiagram> monic_basis(int n, int k, bool regular_only);

ModuleInstance build_S(int n, int k, const RingHandle& ring);
ModuleInstance build_W_cell(int n, int k, const Scalar& z, const RingHandle& ring);
ModuleInstance build_W_free(int n, int k, const RingHandle& ring);
// substitute the twist variable of a free module; the ring carries the target scalars
ModuleInstance specialize_module(const ModuleInstance& free_mod, const Scalar& z,
                                 const RingHandle& ring);

// Defining relations of the acting algebra as matrix identities; returns the
// names of any failures (empty means the module is a genuine representation).
std::vector<std::string> module_relation_failures(const ModuleInstance& M);

struct GramData {
    Matrix matrix;
    long rank = 0;
    long radical_dim = 0;
};
GramData gram_matrix(const ModuleInstance& W);

// ---------------------------------------------------------------------------
// Indar S_{n,k}: the induced module with basis l . r_{n,k}^j (x) x_{n,k} over
// strata j = 0..k/2. It is infinite-dimensional over the scalars; elements
// are finitely supported combinations keyed by (stratum, canonical diagram,
// winding or loop count).
struct IndarKey {
    int j = 0;
    int idx = 0;  // index into strata[j]
    long w = 0;   // translation power of l (k-2j > 0) or loop count (k-2j = 0)
    auto operator<=>(const IndarKey&) const = default;
};

struct IndarTerm {
    IndarKey key;
    Scalar coef;
};

class IndarModule {
  public:
    RingHandle ring;
    int n = 0, k = 0;
    std::vector<std::vector<AffDiagram>> strata;  // strata[j]: monic (k-2j, n) reps
    std::vector<AffDiagram> rj;                   // r^0 .. r^{k/2}

    // action of one generator on one basis vector
    std::vector<IndarTerm> apply(int gen, const IndarKey& key) const;
    std::vector<IndarTerm> apply(int gen, const std::vector<IndarTerm>& v) const;
    long stratum_dim(int j) const { return (long)strata[j].size(); }
    int find_index(int j, const AffDiagram& d) const;
};

IndarModule build_IndarS(int n, int k, const RingHandle& ring);

// quotient by the strata j >= 1, as a free module over the winding ring;
// must coincide with build_W_free(n, k) on the same ring
ModuleInstance indar_quotient_j0(const IndarModule& M);

// ---------------------------------------------------------------------------
// Restriction of a cell module to the regular algebra, filtered by diagram
// rank; each subquotient is identified with a standard module through the
// surgery map that cuts the seam-crossing arcs open.
struct ResarStratum {
    int r = 0;
    ModuleInstance quotient;          // regular module on the rank-r basis slice
    std::vector<long> surgery;        // index into build_S(n, k+2r).basis per basis elem
    bool matches_standard = false;    // action matrices equal under the surgery map
};
std::vector<ResarStratum> resar_filtration(const ModuleInstance& Wcell);

// ---------------------------------------------------------------------------
// Graded count form of the Peirce decomposition at generic q.
struct PeirceReport {
    int n = 0, B = 0;
    long lhs = 0;  // affine diagrams with rank <= B and loops <= B
    long rhs = 0;  // sum over k of dim S_{n,k} times the graded Indar count
    std::map<int, long> rhs_per_k;
    bool ok = false;
};
PeirceReport peirce_count_check(int n, int B);

long binom(int n, int m);
long dim_S_formula(int n, int k);
long dim_W_formula(int n, int k);

}  // namespace atl
