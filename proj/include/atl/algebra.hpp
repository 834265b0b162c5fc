#pragma once

// Linear combinations of affine diagrams, generator words, the braiding
// elements T_i and eta_{r,s}, the homomorphism phi from the affine algebra
// to the regular one, and executable relation suites.

#include <string>
#include <utility>
#include <vector>

#include "atl/diagram.hpp"
#include "atl/scalar.hpp"

#include <map>

namespace atl {

// ------------------------------------------------------------ AlgebraElement

// element of a hom space: formal combination of (m,n)-diagrams
struct AlgebraElement {
    RingHandle ring;
    int m = 0, n = 0;
    std::map<AffDiagram, Scalar> terms;  // no zero coefficients

    bool is_zero() const { return terms.empty(); }
    bool operator==(const AlgebraElement& o) const;
    std::string str() const;
};

AlgebraElement elem_zero(const RingHandle& ring, int m, int n);
AlgebraElement elem_from_diagram(const RingHandle& ring, const AffDiagram& d);
AlgebraElement elem_from_diagram(const RingHandle& ring, const AffDiagram& d,
                                 const Scalar& coef);
AlgebraElement elem_identity(const RingHandle& ring, int n);

AlgebraElement elem_add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement elem_sub(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement elem_scale(const Scalar& c, const AlgebraElement& a);
// a after b; every contractible loop formed while gluing contributes beta
AlgebraElement elem_compose(const AlgebraElement& a, const AlgebraElement& b);
// stack a on top of b (labels of b keep their values)
AlgebraElement elem_tensor(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement elem_transpose(const AlgebraElement& a);

// --------------------------------------------------------------- words

struct GenLetter {
    enum Kind { E, Tau, TauInv, U } kind;
    int idx = 0;  // E: any integer mod n; U: 1..n-1
    bool operator==(const GenLetter&) const = default;
};

struct GeneratorWord {
    int n = 0;
    bool regular = false;  // regular words use only U letters
    std::vector<GenLetter> letters;

    // syntax: "e0 e1 t t- u2" (t = tau, t- = tau inverse)
    static GeneratorWord parse(int n, const std::string& text);
    std::string str() const;
};

AlgebraElement word_eval(const GeneratorWord& w, const RingHandle& ring);

// --------------------------------------------------------------- braiding

// T_i = v * id + v^-1 * e_i, with v^2 = -q
const AlgebraElement& braid_T(const RingHandle& ring, int n, int i);
AlgebraElement braid_T_inv(const RingHandle& ring, int n, int i);
// eta_{r,s} in End(r+s): the double product of T's, cached
const AlgebraElement& eta(const RingHandle& ring, int r, int s);
AlgebraElement eta_inv(const RingHandle& ring, int r, int s);

// --------------------------------------------------------------- phi

// image of one affine generator under phi, inside the regular algebra on n
AlgebraElement phi_letter(const RingHandle& ring, int n, const GenLetter& l);
// multiplicative extension to words
AlgebraElement phi_apply(const GeneratorWord& w, const RingHandle& ring);

// ------------------------------------------------------------- appendix

struct AppendixAElements {
    int n;
    AlgebraElement g, g_inv, lambda;          // Lambda = q g + q^-1 g^-1
    std::vector<AlgebraElement> gk, gk_inv;   // g_0 = g, g_k = t_k...t_1 g t_1...t_k
};

AppendixAElements braid_translation(const RingHandle& ring, int n);

// --------------------------------------------------------------- suites

enum class RelationSet { Affine, Regular, PhiImage, AppendixA };

struct RelationReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool all_pass() const;
};

RelationReport relation_suite(int n, const RingHandle& ring, RelationSet which);

// eta_{r,s} (f tensor g) = (g tensor f) eta_{m,n} for rank-zero f: m->r, g: n->s
bool eta_naturality_check(const AffDiagram& f, const AffDiagram& g,
                          const RingHandle& ring);

}  // namespace atl
