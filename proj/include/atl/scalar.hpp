#pragma once

// Exact coefficient arithmetic for the Temperley-Lieb engine.
//
// Everything is expressed through the base variable v with v^2 = -q, so that
// all the half-integer powers of (-q) appearing in braidings and twists are
// plain integer powers of v.  Three coefficient rings are supported:
//   * GenericV   : rational functions in v over Q (fractions of Laurent polys)
//   * GenericVX  : rational functions in v and a second variable x, where x
//                  plays the role of a formal twist z or of the tau-winding t
//   * Cyclotomic : Q(zeta_N) with a designated image of v
// No floating point anywhere; zero tests are exact.

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace atl {

using Rat = mpq_class;

// ---------------------------------------------------------------- LaurentV

// sparse Laurent polynomial in v over Q; no zero coefficients stored
struct LaurentV {
    std::map<int, Rat> c;

    LaurentV() = default;
    static LaurentV from_int(long x);
    static LaurentV monomial(int exp, const Rat& coef = Rat(1));

    bool is_zero() const { return c.empty(); }
    bool is_one() const;
    int min_exp() const;  // requires nonzero
    int max_exp() const;

    LaurentV operator-() const;
    LaurentV operator+(const LaurentV& o) const;
    LaurentV operator-(const LaurentV& o) const;
    LaurentV operator*(const LaurentV& o) const;
    bool operator==(const LaurentV& o) const { return c == o.c; }

    std::string str() const;
};

// gcd of Laurent polynomials, defined up to a monomial unit; the result is an
// ordinary polynomial with min_exp 0 and leading coefficient 1
LaurentV laurent_gcd(const LaurentV& a, const LaurentV& b);
// exact division; asserts divisibility
LaurentV laurent_divexact(const LaurentV& a, const LaurentV& b);

// --------------------------------------------------------------- LaurentVX

enum class XRole { ZParam, TauWinding };

// sparse bivariate Laurent polynomial in (v, x)
struct LaurentVX {
    std::map<std::pair<int, int>, Rat> c;  // key = (exp_v, exp_x)
    XRole x_role = XRole::ZParam;

    static LaurentVX from_int(long x, XRole role);
    static LaurentVX monomial(int ev, int ex, const Rat& coef, XRole role);
    static LaurentVX lift(const LaurentV& p, XRole role);  // x-degree 0

    bool is_zero() const { return c.empty(); }
    bool is_one() const;

    LaurentVX operator-() const;
    LaurentVX operator+(const LaurentVX& o) const;
    LaurentVX operator-(const LaurentVX& o) const;
    LaurentVX operator*(const LaurentVX& o) const;
    bool operator==(const LaurentVX& o) const { return c == o.c; }

    // substitute x -> value (a Laurent polynomial in v); x^-1 -> inverse
    // monomial substitution only works when value is a monomial; otherwise
    // negative x-powers require value to be a unit, so we demand a monomial
    LaurentV substitute_x(const LaurentV& value) const;

    std::string str() const;
};

LaurentVX laurentvx_gcd(const LaurentVX& a, const LaurentVX& b);
LaurentVX laurentvx_divexact(const LaurentVX& a, const LaurentVX& b);

// ------------------------------------------------------------- CyclotomicElt

// element of Q(zeta_N), stored as a rational vector modulo Phi_N
struct CyclotomicElt {
    unsigned N = 0;
    std::vector<Rat> c;  // size = deg Phi_N, may hold trailing zeros

    static CyclotomicElt zero(unsigned N);
    static CyclotomicElt from_int(unsigned N, long x);
    static CyclotomicElt root_power(unsigned N, long k);  // zeta_N^k

    bool is_zero() const;
    bool operator==(const CyclotomicElt& o) const;

    CyclotomicElt operator-() const;
    CyclotomicElt operator+(const CyclotomicElt& o) const;
    CyclotomicElt operator-(const CyclotomicElt& o) const;
    CyclotomicElt operator*(const CyclotomicElt& o) const;
    CyclotomicElt inv() const;  // asserts nonzero

    std::string str() const;
};

// degree of Phi_N (Euler totient)
unsigned cyclotomic_degree(unsigned N);

// ------------------------------------------------------------ fraction field

// fraction of Laurent polynomials with gcd normalization
template <class P>
struct Frac {
    P num, den;  // den nonzero; normalized by P-specific rules

    bool is_zero() const { return num.is_zero(); }
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

using FracV = Frac<LaurentV>;
using FracVX = Frac<LaurentVX>;

FracV fracv_make(LaurentV n, LaurentV d);
FracV fracv_add(const FracV& a, const FracV& b);
FracV fracv_mul(const FracV& a, const FracV& b);
FracV fracv_neg(const FracV& a);
FracV fracv_inv(const FracV& a);

FracVX fracvx_make(LaurentVX n, LaurentVX d);
FracVX fracvx_add(const FracVX& a, const FracVX& b);
FracVX fracvx_mul(const FracVX& a, const FracVX& b);
FracVX fracvx_neg(const FracVX& a);
FracVX fracvx_inv(const FracVX& a);

// -------------------------------------------------------------- ring handle

enum class RingKind { GenericV, GenericVX, Cyclotomic };

struct RingInfo {
    RingKind kind;
    XRole x_role = XRole::ZParam;  // GenericVX only
    unsigned N = 0;                // Cyclotomic only
    long v_exp = 1;                // v = zeta_N^v_exp
    int ell = 0;                   // 0 = generic; else q is exactly ell-critical
};

using RingHandle = std::shared_ptr<const RingInfo>;

// generic ring over Q(v)
RingHandle ring_generic();
// bivariate generic ring; x is a formal z or the tau-winding t
RingHandle ring_generic_x(XRole role);
// cyclotomic ring for the given ell >= 2: N = 4*ell, v = zeta_N.
// Validates that q = -v^2 satisfies q^(2 ell) = 1 with ell minimal.
RingHandle ring_cyclotomic(int ell);
// general cyclotomic constructor; throws on inconsistent parameters
RingHandle ring_cyclotomic_custom(unsigned N, long v_exp, int ell);

// --------------------------------------------------------------------- Scalar

// one value in the ring designated by its handle
class Scalar {
  public:
    Scalar() = default;  // invalid until assigned

    static Scalar zero(const RingHandle& r);
    static Scalar one(const RingHandle& r);
    static Scalar from_int(const RingHandle& r, long x);
    static Scalar from_rat(const RingHandle& r, const Rat& x);
    // v^e as a ring element
    static Scalar v_pow(const RingHandle& r, long e);
    // x^e (GenericVX only)
    static Scalar x_pow(const RingHandle& r, long e);

    const RingHandle& ring() const { return ring_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar inv() const;  // asserts invertible (nonzero in a field)
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;

    const FracV& as_fracv() const { return std::get<FracV>(val_); }
    const FracVX& as_fracvx() const { return std::get<FracVX>(val_); }
    const CyclotomicElt& as_cyclo() const { return std::get<CyclotomicElt>(val_); }

    static Scalar wrap(const RingHandle& r, FracV x);
    static Scalar wrap(const RingHandle& r, FracVX x);
    static Scalar wrap(const RingHandle& r, CyclotomicElt x);

  private:
    RingHandle ring_;
    std::variant<std::monostate, FracV, FracVX, CyclotomicElt> val_;
};

// ring constants
Scalar ring_v(const RingHandle& r);
Scalar ring_q(const RingHandle& r);     // q = -v^2
Scalar ring_beta(const RingHandle& r);  // beta = q + q^-1 = -v^2 - v^-2
Scalar ring_zk(const RingHandle& r, long k);  // z_k = (-q)^(k/2) = v^k

// -------------------------------------------------------------- evaluation

// ring homomorphism: substitute v (and x, if present) and land in `target`.
// v_exp_image: v maps to zeta_N^v_exp_image in a cyclotomic target, or to
// v^v_exp_image in a generic target.  x (if any) maps to x_image.
Scalar eval_laurent(const LaurentV& p, const RingHandle& target, long v_exp_image = 1);
Scalar eval_laurent_x(const LaurentVX& p, const RingHandle& target,
                      long v_exp_image, const Scalar& x_image);

// specialize a GenericVX scalar's x to a value in the same v-fraction field
Scalar specialize_x(const Scalar& s, const RingHandle& target, const Scalar& x_image);

}  // namespace atl
