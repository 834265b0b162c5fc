#include "atl/scalar.hpp"

#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace atl {

// ---------------------------------------------------------------- LaurentV

LaurentV LaurentV::from_int(long x) {
    LaurentV p;
    if (x != 0) p.c[0] = Rat(x);
    return p;
}

LaurentV LaurentV::monomial(int exp, const Rat& coef) {
    LaurentV p;
    if (coef != 0) p.c[exp] = coef;
    return p;
}

bool LaurentV::is_one() const {
    return c.size() == 1 && c.begin()->first == 0 && c.begin()->second == 1;
}

int LaurentV::min_exp() const {
    assert(!c.empty());
    return c.begin()->first;
}

int LaurentV::max_exp() const {
    assert(!c.empty());
    return c.rbegin()->first;
}

LaurentV LaurentV::operator-() const {
    LaurentV r;
    for (auto& [e, a] : c) r.c[e] = -a;
    return r;
}

LaurentV LaurentV::operator+(const LaurentV& o) const {
    LaurentV r = *this;
    for (auto& [e, a] : o.c) {
        auto it = r.c.find(e);
        if (it == r.c.end()) {
            r.c.emplace(e, a);
        } else {
            it->second += a;
            if (it->second == 0) r.c.erase(it);
        }
    }
    return r;
}

LaurentV LaurentV::operator-(const LaurentV& o) const { return *this + (-o); }

LaurentV LaurentV::operator*(const LaurentV& o) const {
    LaurentV r;
    for (auto& [e1, a1] : c)
        for (auto& [e2, a2] : o.c) {
            Rat p = a1 * a2;
            auto it = r.c.find(e1 + e2);
            if (it == r.c.end()) {
                r.c.emplace(e1 + e2, std::move(p));
            } else {
                it->second += p;
            }
        }
    for (auto it = r.c.begin(); it != r.c.end();)
        it = (it->second == 0) ? r.c.erase(it) : std::next(it);
    return r;
}

std::string LaurentV::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, a] : c) {
        if (!first) os << " + ";
        first = false;
        os << a.get_str() << "*v^" << e;
    }
    return os.str();
}

namespace {

// remainder of ordinary-poly division (inputs with min_exp >= 0)
LaurentV poly_rem(LaurentV a, const LaurentV& b) {
    assert(!b.is_zero());
    int db = b.max_exp();
    const Rat lead = b.c.rbegin()->second;
    while (!a.is_zero() && a.max_exp() >= db) {
        int sh = a.max_exp() - db;
        Rat f = a.c.rbegin()->second / lead;
        a = a - b * LaurentV::monomial(sh, f);
    }
    return a;
}

LaurentV to_ordinary(const LaurentV& p) {
    if (p.is_zero()) return p;
    return p * LaurentV::monomial(-p.min_exp());
}

}  // namespace

LaurentV laurent_gcd(const LaurentV& a, const LaurentV& b) {
    LaurentV x = to_ordinary(a), y = to_ordinary(b);
    if (x.is_zero()) std::swap(x, y);
    if (y.is_zero()) {
        if (x.is_zero()) return x;
        return x * LaurentV::monomial(0, Rat(1) / x.c.rbegin()->second);
    }
    while (!y.is_zero()) {
        LaurentV r = poly_rem(x, y);
        x = y;
        y = to_ordinary(r);
    }
    return x * LaurentV::monomial(0, Rat(1) / x.c.rbegin()->second);
}

LaurentV laurent_divexact(const LaurentV& a, const LaurentV& b) {
    assert(!b.is_zero());
    if (a.is_zero()) return a;
    // quotient in the Laurent ring: shift both ordinary, divide, shift back
    int shift = a.min_exp() - b.min_exp();
    LaurentV x = to_ordinary(a), y = to_ordinary(b);
    LaurentV q;
    int db = y.max_exp();
    const Rat lead = y.c.rbegin()->second;
    while (!x.is_zero() && x.max_exp() >= db) {
        int sh = x.max_exp() - db;
        Rat f = x.c.rbegin()->second / lead;
        q = q + LaurentV::monomial(sh, f);
        x = x - y * LaurentV::monomial(sh, f);
    }
    assert(x.is_zero() && "laurent_divexact: not divisible");
    return q * LaurentV::monomial(shift);
}

// --------------------------------------------------------------- LaurentVX

LaurentVX LaurentVX::from_int(long x, XRole role) {
    LaurentVX p;
    p.x_role = role;
    if (x != 0) p.c[{0, 0}] = Rat(x);
    return p;
}

LaurentVX LaurentVX::monomial(int ev, int ex, const Rat& coef, XRole role) {
    LaurentVX p;
    p.x_role = role;
    if (coef != 0) p.c[{ev, ex}] = coef;
    return p;
}

LaurentVX LaurentVX::lift(const LaurentV& p, XRole role) {
    LaurentVX r;
    r.x_role = role;
    for (auto& [e, a] : p.c) r.c[{e, 0}] = a;
    return r;
}

bool LaurentVX::is_one() const {
    return c.size() == 1 && c.begin()->first == std::pair<int, int>{0, 0} &&
           c.begin()->second == 1;
}

LaurentVX LaurentVX::operator-() const {
    LaurentVX r;
    r.x_role = x_role;
    for (auto& [e, a] : c) r.c[e] = -a;
    return r;
}

LaurentVX LaurentVX::operator+(const LaurentVX& o) const {
    assert(x_role == o.x_role || is_zero() || o.is_zero());
    LaurentVX r = *this;
    if (r.is_zero()) r.x_role = o.x_role;
    for (auto& [e, a] : o.c) {
        auto it = r.c.find(e);
        if (it == r.c.end()) {
            r.c.emplace(e, a);
        } else {
            it->second += a;
            if (it->second == 0) r.c.erase(it);
        }
    }
    return r;
}

LaurentVX LaurentVX::operator-(const LaurentVX& o) const { return *this + (-o); }

LaurentVX LaurentVX::operator*(const LaurentVX& o) const {
    assert(x_role == o.x_role || is_zero() || o.is_zero());
    LaurentVX r;
    r.x_role = x_role;
    for (auto& [e1, a1] : c)
        for (auto& [e2, a2] : o.c) {
            auto key = std::pair<int, int>{e1.first + e2.first, e1.second + e2.second};
            Rat p = a1 * a2;
            auto it = r.c.find(key);
            if (it == r.c.end()) {
                r.c.emplace(key, std::move(p));
            } else {
                it->second += p;
            }
        }
    for (auto it = r.c.begin(); it != r.c.end();)
        it = (it->second == 0) ? r.c.erase(it) : std::next(it);
    return r;
}

LaurentV LaurentVX::substitute_x(const LaurentV& value) const {
    // negative x-powers need an invertible image; demand a monomial there
    bool has_neg = false;
    for (auto& [e, a] : c)
        if (e.second < 0) has_neg = true;
    LaurentV inv_value;
    if (has_neg) {
        if (value.c.size() != 1) throw std::invalid_argument("x image must be a unit");
        inv_value = LaurentV::monomial(-value.min_exp(), Rat(1) / value.c.begin()->second);
    }
    LaurentV r;
    for (auto& [e, a] : c) {
        LaurentV term = LaurentV::monomial(e.first, a);
        LaurentV base = (e.second >= 0) ? value : inv_value;
        for (int i = 0; i < std::abs(e.second); ++i) term = term * base;
        r = r + term;
    }
    return r;
}

std::string LaurentVX::str() const {
    if (c.empty()) return "0";
    const char* xn = (x_role == XRole::ZParam) ? "z" : "t";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, a] : c) {
        if (!first) os << " + ";
        first = false;
        os << a.get_str() << "*v^" << e.first << "*" << xn << "^" << e.second;
    }
    return os.str();
}

namespace {

// view of a LaurentVX as a polynomial in x with LaurentV coefficients
std::map<int, LaurentV> by_x(const LaurentVX& p) {
    std::map<int, LaurentV> m;
    for (auto& [e, a] : p.c) m[e.second].c[e.first] = a;
    return m;
}

LaurentVX from_by_x(const std::map<int, LaurentV>& m, XRole role) {
    LaurentVX r;
    r.x_role = role;
    for (auto& [ex, p] : m)
        for (auto& [ev, a] : p.c)
            if (a != 0) r.c[{ev, ex}] = a;
    return r;
}

LaurentV vx_content(const LaurentVX& p) {
    LaurentV g;
    for (auto& [ex, q] : by_x(p)) g = laurent_gcd(g, q);
    return g;
}

// primitive part: divide out the common LaurentV factor and the rational
// content; coefficient growth during the x-Euclid stays tame this way,
// whereas fraction-valued coefficients blow up catastrophically
std::map<int, LaurentV> xpoly_prim(std::map<int, LaurentV> m) {
    if (m.empty()) return m;
    LaurentV g;
    for (auto& [e, q] : m) g = laurent_gcd(g, q);
    for (auto& [e, q] : m) q = laurent_divexact(q, g);
    mpz_class num_gcd = 0, den_lcm = 1;
    for (auto& [e, q] : m)
        for (auto& [ev, a] : q.c) {
            num_gcd = gcd(num_gcd, a.get_num());
            den_lcm = lcm(den_lcm, a.get_den());
        }
    Rat content(num_gcd, den_lcm);
    content.canonicalize();
    for (auto& [e, q] : m)
        for (auto& [ev, a] : q.c) a /= content;
    return m;
}

// pseudo-remainder of ordinary x-polynomials over Q[v,v^-1]: the remainder of
// lc(b)^k * a modulo b, computed without any coefficient division
std::map<int, LaurentV> xpoly_prem(std::map<int, LaurentV> a,
                                   const std::map<int, LaurentV>& b) {
    const LaurentV lb = b.rbegin()->second;
    int db = b.rbegin()->first;
    while (!a.empty() && a.rbegin()->first >= db) {
        int sh = a.rbegin()->first - db;
        LaurentV la = a.rbegin()->second;
        std::map<int, LaurentV> next;
        for (auto& [e, c] : a) next[e] = c * lb;
        for (auto& [e, c] : b) {
            LaurentV sub = c * la;
            auto it = next.find(e + sh);
            if (it == next.end())
                next[e + sh] = -sub;
            else
                it->second = it->second - sub;
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second.is_zero() ? next.erase(it) : std::next(it);
        a = std::move(next);
    }
    return a;
}

}  // namespace

LaurentVX laurentvx_gcd(const LaurentVX& a, const LaurentVX& b) {
    if (a.is_zero() && b.is_zero()) return a;
    XRole role = a.is_zero() ? b.x_role : a.x_role;
    // a single term is a unit of the bivariate Laurent ring
    if ((a.c.size() == 1 && !b.is_zero()) || (b.c.size() == 1 && !a.is_zero()))
        return LaurentVX::from_int(1, role);
    if (a == b) return a;
    // primitive x-polynomial with min x-exponent 0
    auto prep = [&](const LaurentVX& p) {
        auto m = by_x(p);
        int sh = m.begin()->first;
        std::map<int, LaurentV> out;
        for (auto& [ex, q] : m) out[ex - sh] = q;
        return xpoly_prim(std::move(out));
    };
    if (a.is_zero() || b.is_zero()) {
        const LaurentVX& p = a.is_zero() ? b : a;
        return from_by_x(prep(p), role) * LaurentVX::lift(vx_content(p), role);
    }
    // primitive pseudo-remainder sequence in x over Q[v,v^-1]
    std::map<int, LaurentV> A = prep(a), B = prep(b);
    if (A.rbegin()->first < B.rbegin()->first) std::swap(A, B);
    while (!B.empty()) {
        std::map<int, LaurentV> R = xpoly_prim(xpoly_prem(std::move(A), B));
        A = std::move(B);
        B = std::move(R);
    }
    LaurentV cg = laurent_gcd(vx_content(a), vx_content(b));
    return from_by_x(A, role) * LaurentVX::lift(cg, role);
}

LaurentVX laurentvx_divexact(const LaurentVX& a, const LaurentVX& b) {
    assert(!b.is_zero());
    if (a.is_zero()) return a;
    auto ma = by_x(a), mb = by_x(b);
    int base_a = ma.begin()->first, base_b = mb.begin()->first;
    int sh = base_a - base_b;
    std::map<int, LaurentV> A, B, Q;
    for (auto& [e, q] : ma) A[e - base_a] = q;
    for (auto& [e, q] : mb) B[e - base_b] = q;
    // classical division; every leading-coefficient division is exact when
    // b divides a, and laurent_divexact asserts exactly that
    const LaurentV lb = B.rbegin()->second;
    int db = B.rbegin()->first;
    while (!A.empty() && A.rbegin()->first >= db) {
        int s = A.rbegin()->first - db;
        LaurentV q = laurent_divexact(A.rbegin()->second, lb);
        Q[s] = q;
        for (auto& [e, c] : B) {
            LaurentV sub = c * q;
            auto it = A.find(e + s);
            if (it == A.end())
                A[e + s] = -sub;
            else
                it->second = it->second - sub;
        }
        for (auto it = A.begin(); it != A.end();)
            it = it->second.is_zero() ? A.erase(it) : std::next(it);
    }
    assert(A.empty() && "laurentvx_divexact: not divisible");
    return from_by_x(Q, a.x_role) * LaurentVX::monomial(0, sh, Rat(1), a.x_role);
}

// ------------------------------------------------------------- cyclotomics

namespace {

using ZPoly = std::vector<Rat>;  // dense, index = exponent

void zp_trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    zp_trim(r);
    return r;
}

ZPoly zp_sub(ZPoly a, const ZPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    zp_trim(a);
    return a;
}

// division with remainder; b nonzero
std::pair<ZPoly, ZPoly> zp_divmod(ZPoly a, const ZPoly& b) {
    ZPoly q;
    int db = int(b.size()) - 1;
    while (int(a.size()) - 1 >= db && !a.empty()) {
        int sh = int(a.size()) - 1 - db;
        Rat f = a.back() / b.back();
        if (int(q.size()) < sh + 1) q.resize(sh + 1, Rat(0));
        q[sh] += f;
        ZPoly sub(sh, Rat(0));
        for (auto& cb : b) sub.push_back(cb * f);
        a = zp_sub(a, sub);
    }
    return {q, a};
}

struct CycloCtx {
    unsigned N;
    unsigned deg;
    ZPoly phi;                      // Phi_N
    std::vector<ZPoly> red;        // x^(deg+i) mod Phi, i in [0, deg-1)
    std::vector<ZPoly> root_pows;  // zeta^k mod Phi for k in [0, N)
};

ZPoly cyclotomic_poly(unsigned N);

ZPoly cyclotomic_poly_uncached(unsigned N) {
    // x^N - 1 divided by the product of Phi_d over proper divisors d
    ZPoly num(N + 1, Rat(0));
    num[0] = -1;
    num[N] = 1;
    ZPoly den{Rat(1)};
    for (unsigned d = 1; d < N; ++d)
        if (N % d == 0) den = zp_mul(den, cyclotomic_poly(d));
    auto [q, r] = zp_divmod(num, den);
    assert(r.empty());
    return q;
}

std::mutex g_cyclo_mutex;
std::unordered_map<unsigned, ZPoly> g_cyclo_polys;
std::unordered_map<unsigned, std::shared_ptr<const CycloCtx>> g_cyclo_ctx;

ZPoly cyclotomic_poly(unsigned N) {
    {
        auto it = g_cyclo_polys.find(N);
        if (it != g_cyclo_polys.end()) return it->second;
    }
    ZPoly p = cyclotomic_poly_uncached(N);
    g_cyclo_polys[N] = p;
    return p;
}

std::shared_ptr<const CycloCtx> cyclo_ctx(unsigned N) {
    std::lock_guard<std::mutex> lock(g_cyclo_mutex);
    auto it = g_cyclo_ctx.find(N);
    if (it != g_cyclo_ctx.end()) return it->second;
    auto ctx = std::make_shared<CycloCtx>();
    ctx->N = N;
    ctx->phi = cyclotomic_poly(N);
    ctx->deg = unsigned(ctx->phi.size()) - 1;
    // x^(deg+i) mod Phi
    ZPoly cur(ctx->deg + 1, Rat(0));
    cur[ctx->deg] = 1;
    for (unsigned i = 0; i + 1 < ctx->deg || i == 0; ++i) {
        auto [q, r] = zp_divmod(cur, ctx->phi);
        ctx->red.push_back(r);
        if (ctx->red.size() >= (ctx->deg == 0 ? 1 : ctx->deg - 1) &&
            ctx->red.size() >= 1 && i + 2 >= ctx->deg)
            ;
        if (ctx->red.size() == std::max<unsigned>(1, ctx->deg - 1)) break;
        cur.insert(cur.begin(), Rat(0));  // multiply by x
        zp_trim(cur);
    }
    // powers of the root
    for (unsigned k = 0; k < N; ++k) {
        ZPoly xp(k + 1, Rat(0));
        xp[k] = 1;
        auto [q, r] = zp_divmod(xp, ctx->phi);
        ctx->root_pows.push_back(r);
    }
    g_cyclo_ctx[N] = ctx;
    return ctx;
}

ZPoly zp_mod_phi(ZPoly p, const CycloCtx& ctx) {
    auto [q, r] = zp_divmod(std::move(p), ctx.phi);
    return r;
}

}  // namespace

unsigned cyclotomic_degree(unsigned N) {
    return unsigned(cyclotomic_poly(N).size()) - 1;
}

CyclotomicElt CyclotomicElt::zero(unsigned N) {
    CyclotomicElt e;
    e.N = N;
    return e;
}

CyclotomicElt CyclotomicElt::from_int(unsigned N, long x) {
    CyclotomicElt e;
    e.N = N;
    if (x != 0) e.c = {Rat(x)};
    return e;
}

CyclotomicElt CyclotomicElt::root_power(unsigned N, long k) {
    auto ctx = cyclo_ctx(N);
    long kk = ((k % long(N)) + long(N)) % long(N);
    CyclotomicElt e;
    e.N = N;
    e.c = ctx->root_pows[size_t(kk)];
    return e;
}

bool CyclotomicElt::is_zero() const {
    for (auto& a : c)
        if (a != 0) return false;
    return true;
}

bool CyclotomicElt::operator==(const CyclotomicElt& o) const {
    assert(N == o.N);
    size_t n = std::max(c.size(), o.c.size());
    for (size_t i = 0; i < n; ++i) {
        Rat a = i < c.size() ? c[i] : Rat(0);
        Rat b = i < o.c.size() ? o.c[i] : Rat(0);
        if (a != b) return false;
    }
    return true;
}

CyclotomicElt CyclotomicElt::operator-() const {
    CyclotomicElt r = *this;
    for (auto& a : r.c) a = -a;
    return r;
}

CyclotomicElt CyclotomicElt::operator+(const CyclotomicElt& o) const {
    assert(N == o.N);
    CyclotomicElt r = *this;
    if (r.c.size() < o.c.size()) r.c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

CyclotomicElt CyclotomicElt::operator-(const CyclotomicElt& o) const { return *this + (-o); }

CyclotomicElt CyclotomicElt::operator*(const CyclotomicElt& o) const {
    assert(N == o.N);
    auto ctx = cyclo_ctx(N);
    ZPoly a = c, b = o.c;
    zp_trim(a);
    zp_trim(b);
    ZPoly p = zp_mul(a, b);
    CyclotomicElt r;
    r.N = N;
    r.c = zp_mod_phi(std::move(p), *ctx);
    return r;
}

CyclotomicElt CyclotomicElt::inv() const {
    assert(!is_zero());
    auto ctx = cyclo_ctx(N);
    // extended Euclid: a*phi + b*self = gcd = const
    ZPoly r0 = ctx->phi, r1 = c;
    zp_trim(r1);
    ZPoly s0 = {}, s1 = {Rat(1)};  // coefficients of self
    while (!(r1.size() == 1)) {
        assert(!r1.empty() && "inverse of zero divisor");
        auto [q, r] = zp_divmod(r0, r1);
        ZPoly s2 = zp_sub(s0, zp_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        zp_trim(r1);
        if (r1.empty()) {
            // previous remainder was the gcd; it must be a constant
            assert(r0.size() == 1);
            std::swap(r0, r1);
            std::swap(s0, s1);
            break;
        }
    }
    Rat g = r1[0];
    CyclotomicElt out;
    out.N = N;
    out.c = s1;
    for (auto& a : out.c) a /= g;
    out.c = zp_mod_phi(std::move(out.c), *ctx);
    return out;
}

std::string CyclotomicElt::str() const {
    std::ostringstream os;
    os << "[N=" << N << ";";
    unsigned deg = cyclotomic_degree(N);
    for (unsigned i = 0; i < deg; ++i) {
        if (i) os << ",";
        os << (i < c.size() ? c[i] : Rat(0)).get_str();
    }
    os << "]";
    return os.str();
}

// ------------------------------------------------------------ fraction field

FracV fracv_make(LaurentV n, LaurentV d) {
    assert(!d.is_zero());
    if (n.is_zero()) return {LaurentV(), LaurentV::from_int(1)};
    LaurentV g = laurent_gcd(n, d);
    n = laurent_divexact(n, g);
    d = laurent_divexact(d, g);
    // normalize denominator: min_exp 0, leading coefficient 1
    LaurentV u = LaurentV::monomial(-d.min_exp(), Rat(1) / d.c.rbegin()->second);
    return {n * u, d * u};
}

FracV fracv_add(const FracV& a, const FracV& b) {
    return fracv_make(a.num * b.den + b.num * a.den, a.den * b.den);
}

FracV fracv_mul(const FracV& a, const FracV& b) {
    return fracv_make(a.num * b.num, a.den * b.den);
}

FracV fracv_neg(const FracV& a) { return {-a.num, a.den}; }

FracV fracv_inv(const FracV& a) {
    assert(!a.num.is_zero());
    return fracv_make(a.den, a.num);
}

FracVX fracvx_make(LaurentVX n, LaurentVX d) {
    assert(!d.is_zero());
    if (n.is_zero()) return {LaurentVX::from_int(0, d.x_role), LaurentVX::from_int(1, d.x_role)};
    LaurentVX g = laurentvx_gcd(n, d);
    n = laurentvx_divexact(n, g);
    d = laurentvx_divexact(d, g);
    // normalize: denominator's trailing (lexicographically first) term -> coefficient 1,
    // exponents shifted so that its minimal v- and x-exponents are 0
    int mv = d.c.begin()->first.first, mx = d.c.begin()->first.second;
    for (auto& [e, a] : d.c) {
        mv = std::min(mv, e.first);
        mx = std::min(mx, e.second);
    }
    Rat lead = d.c.rbegin()->second;
    LaurentVX u = LaurentVX::monomial(-mv, -mx, Rat(1) / lead, d.x_role);
    return {n * u, d * u};
}

FracVX fracvx_add(const FracVX& a, const FracVX& b) {
    return fracvx_make(a.num * b.den + b.num * a.den, a.den * b.den);
}

FracVX fracvx_mul(const FracVX& a, const FracVX& b) {
    return fracvx_make(a.num * b.num, a.den * b.den);
}

FracVX fracvx_neg(const FracVX& a) { return {-a.num, a.den}; }

FracVX fracvx_inv(const FracVX& a) {
    assert(!a.num.is_zero());
    return fracvx_make(a.den, a.num);
}

// -------------------------------------------------------------- ring handle

RingHandle ring_generic() {
    auto r = std::make_shared<RingInfo>();
    r->kind = RingKind::GenericV;
    return r;
}

RingHandle ring_generic_x(XRole role) {
    auto r = std::make_shared<RingInfo>();
    r->kind = RingKind::GenericVX;
    r->x_role = role;
    return r;
}

RingHandle ring_cyclotomic(int ell) { return ring_cyclotomic_custom(4u * unsigned(ell), 1, ell); }

RingHandle ring_cyclotomic_custom(unsigned N, long v_exp, int ell) {
    if (N < 3) throw std::invalid_argument("cyclotomic N must be >= 3");
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    auto r = std::make_shared<RingInfo>();
    r->kind = RingKind::Cyclotomic;
    r->N = N;
    r->v_exp = v_exp;
    r->ell = ell;
    // q = -v^2 must satisfy q^(2 ell') = 1 exactly when ell | ell'
    CyclotomicElt v = CyclotomicElt::root_power(N, v_exp);
    CyclotomicElt q = -(v * v);
    CyclotomicElt one = CyclotomicElt::from_int(N, 1);
    CyclotomicElt p = one;
    for (int i = 0; i < 2 * ell; ++i) p = p * q;
    if (!(p == one)) throw std::invalid_argument("v image inconsistent with requested ell");
    for (int e2 = 1; e2 < ell; ++e2) {
        CyclotomicElt t = one;
        for (int i = 0; i < 2 * e2; ++i) t = t * q;
        if (t == one) throw std::invalid_argument("requested ell is not minimal for this root");
    }
    if (q == one || q == -one) throw std::invalid_argument("q = +-1 is excluded");
    return r;
}

// --------------------------------------------------------------------- Scalar

namespace {
bool ring_eq(const RingHandle& a, const RingHandle& b) {
    if (a.get() == b.get()) return true;
    return a->kind == b->kind && a->x_role == b->x_role && a->N == b->N &&
           a->v_exp == b->v_exp;
}
}  // namespace

Scalar Scalar::wrap(const RingHandle& r, FracV x) {
    Scalar s;
    s.ring_ = r;
    s.val_ = std::move(x);
    return s;
}

Scalar Scalar::wrap(const RingHandle& r, FracVX x) {
    Scalar s;
    s.ring_ = r;
    s.val_ = std::move(x);
    return s;
}

Scalar Scalar::wrap(const RingHandle& r, CyclotomicElt x) {
    Scalar s;
    s.ring_ = r;
    s.val_ = std::move(x);
    return s;
}

Scalar Scalar::zero(const RingHandle& r) { return from_int(r, 0); }
Scalar Scalar::one(const RingHandle& r) { return from_int(r, 1); }

Scalar Scalar::from_int(const RingHandle& r, long x) {
    switch (r->kind) {
        case RingKind::GenericV:
            return wrap(r, fracv_make(LaurentV::from_int(x), LaurentV::from_int(1)));
        case RingKind::GenericVX:
            return wrap(r, fracvx_make(LaurentVX::from_int(x, r->x_role),
                                       LaurentVX::from_int(1, r->x_role)));
        case RingKind::Cyclotomic:
            return wrap(r, CyclotomicElt::from_int(r->N, x));
    }
    return {};
}

Scalar Scalar::from_rat(const RingHandle& r, const Rat& x) {
    switch (r->kind) {
        case RingKind::GenericV:
            return wrap(r, fracv_make(LaurentV::monomial(0, x), LaurentV::from_int(1)));
        case RingKind::GenericVX:
            return wrap(r, fracvx_make(LaurentVX::monomial(0, 0, x, r->x_role),
                                       LaurentVX::from_int(1, r->x_role)));
        case RingKind::Cyclotomic: {
            CyclotomicElt e = CyclotomicElt::zero(r->N);
            if (x != 0) e.c = {x};
            return wrap(r, e);
        }
    }
    return {};
}

Scalar Scalar::v_pow(const RingHandle& r, long e) {
    switch (r->kind) {
        case RingKind::GenericV:
            return wrap(r, fracv_make(LaurentV::monomial(int(e)), LaurentV::from_int(1)));
        case RingKind::GenericVX:
            return wrap(r, fracvx_make(LaurentVX::monomial(int(e), 0, Rat(1), r->x_role),
                                       LaurentVX::from_int(1, r->x_role)));
        case RingKind::Cyclotomic:
            return wrap(r, CyclotomicElt::root_power(r->N, e * r->v_exp));
    }
    return {};
}

Scalar Scalar::x_pow(const RingHandle& r, long e) {
    assert(r->kind == RingKind::GenericVX);
    return wrap(r, fracvx_make(LaurentVX::monomial(0, int(e), Rat(1), r->x_role),
                               LaurentVX::from_int(1, r->x_role)));
}

bool Scalar::is_zero() const {
    if (auto* f = std::get_if<FracV>(&val_)) return f->is_zero();
    if (auto* f = std::get_if<FracVX>(&val_)) return f->is_zero();
    if (auto* f = std::get_if<CyclotomicElt>(&val_)) return f->is_zero();
    assert(false && "uninitialized scalar");
    return true;
}

bool Scalar::is_one() const { return *this == Scalar::one(ring_); }

Scalar Scalar::operator-() const {
    if (auto* f = std::get_if<FracV>(&val_)) return wrap(ring_, fracv_neg(*f));
    if (auto* f = std::get_if<FracVX>(&val_)) return wrap(ring_, fracvx_neg(*f));
    return wrap(ring_, -std::get<CyclotomicElt>(val_));
}

Scalar Scalar::operator+(const Scalar& o) const {
    assert(ring_eq(ring_, o.ring_) && "mixed-ring arithmetic rejected");
    if (auto* f = std::get_if<FracV>(&val_)) return wrap(ring_, fracv_add(*f, o.as_fracv()));
    if (auto* f = std::get_if<FracVX>(&val_)) return wrap(ring_, fracvx_add(*f, o.as_fracvx()));
    return wrap(ring_, std::get<CyclotomicElt>(val_) + o.as_cyclo());
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    assert(ring_eq(ring_, o.ring_) && "mixed-ring arithmetic rejected");
    if (auto* f = std::get_if<FracV>(&val_)) return wrap(ring_, fracv_mul(*f, o.as_fracv()));
    if (auto* f = std::get_if<FracVX>(&val_)) return wrap(ring_, fracvx_mul(*f, o.as_fracvx()));
    return wrap(ring_, std::get<CyclotomicElt>(val_) * o.as_cyclo());
}

Scalar Scalar::inv() const {
    if (auto* f = std::get_if<FracV>(&val_)) return wrap(ring_, fracv_inv(*f));
    if (auto* f = std::get_if<FracVX>(&val_)) return wrap(ring_, fracvx_inv(*f));
    return wrap(ring_, std::get<CyclotomicElt>(val_).inv());
}

bool Scalar::operator==(const Scalar& o) const {
    assert(ring_eq(ring_, o.ring_));
    if (auto* f = std::get_if<FracV>(&val_)) return *f == o.as_fracv();
    if (auto* f = std::get_if<FracVX>(&val_)) return *f == o.as_fracvx();
    return std::get<CyclotomicElt>(val_) == o.as_cyclo();
}

std::string Scalar::str() const {
    if (auto* f = std::get_if<FracV>(&val_)) {
        if (f->den.is_one()) return f->num.str();
        return "(" + f->num.str() + ")/(" + f->den.str() + ")";
    }
    if (auto* f = std::get_if<FracVX>(&val_)) {
        if (f->den.is_one()) return f->num.str();
        return "(" + f->num.str() + ")/(" + f->den.str() + ")";
    }
    return std::get<CyclotomicElt>(val_).str();
}

Scalar ring_v(const RingHandle& r) { return Scalar::v_pow(r, 1); }
Scalar ring_q(const RingHandle& r) { return -Scalar::v_pow(r, 2); }
Scalar ring_beta(const RingHandle& r) { return -Scalar::v_pow(r, 2) - Scalar::v_pow(r, -2); }
Scalar ring_zk(const RingHandle& r, long k) { return Scalar::v_pow(r, k); }

// -------------------------------------------------------------- evaluation

Scalar eval_laurent(const LaurentV& p, const RingHandle& target, long v_exp_image) {
    Scalar acc = Scalar::zero(target);
    for (auto& [e, a] : p.c)
        acc += Scalar::from_rat(target, a) * Scalar::v_pow(target, e * v_exp_image);
    return acc;
}

Scalar eval_laurent_x(const LaurentVX& p, const RingHandle& target, long v_exp_image,
                      const Scalar& x_image) {
    Scalar acc = Scalar::zero(target);
    std::map<int, Scalar> xpow;
    auto get_xpow = [&](int e) {
        auto it = xpow.find(e);
        if (it != xpow.end()) return it->second;
        Scalar val = Scalar::one(target);
        Scalar base = e >= 0 ? x_image : x_image.inv();
        for (int i = 0; i < std::abs(e); ++i) val *= base;
        xpow.emplace(e, val);
        return val;
    };
    for (auto& [e, a] : p.c)
        acc += Scalar::from_rat(target, a) * Scalar::v_pow(target, e.first * v_exp_image) *
               get_xpow(e.second);
    return acc;
}

Scalar specialize_x(const Scalar& s, const RingHandle& target, const Scalar& x_image) {
    const FracVX& f = s.as_fracvx();
    Scalar n = eval_laurent_x(f.num, target, 1, x_image);
    Scalar d = eval_laurent_x(f.den, target, 1, x_image);
    assert(!d.is_zero() && "specialization hits a pole");
    return n * d.inv();
}

}  // namespace atl
