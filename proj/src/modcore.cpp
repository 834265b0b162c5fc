#include "atl/modcore.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <queue>
#include <set>
#include <stdexcept>

namespace atl {

// ------------------------------------------------------------- combinatorics

long binom(int n, int m) {
    if (m < 0 || m > n) return 0;
    long r = 1;
    for (int i = 0; i < m; ++i) r = r * (n - i) / (i + 1);
    return r;
}

long dim_S_formula(int n, int k) {
    int p = (n - k) / 2;
    return binom(n, p) - binom(n, p - 1);
}

long dim_W_formula(int n, int k) { return binom(n, (n - k) / 2); }

static void validate_nk(int n, int k) {
    if (n < 1 || k < 0 || k > n || (n - k) % 2 != 0)
        throw std::invalid_argument("need 0 <= k <= n with n - k even");
}

// ------------------------------------------------------------------ matrices

Matrix mat_zero(const RingHandle& ring, long rows, long cols) {
    return Matrix(rows, std::vector<Scalar>(cols, Scalar::zero(ring)));
}

Matrix mat_identity(const RingHandle& ring, long n) {
    Matrix m = mat_zero(ring, n, n);
    for (long i = 0; i < n; ++i) m[i][i] = Scalar::one(ring);
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    long r = (long)a.size(), mid = r ? (long)a[0].size() : 0;
    long c = b.empty() ? 0 : (long)b[0].size();
    assert(mid == (long)b.size());
    if (r == 0 || c == 0) return a;
    const RingHandle& ring = a[0][0].ring();
    Matrix out = mat_zero(ring, r, c);
    for (long i = 0; i < r; ++i)
        for (long t = 0; t < mid; ++t) {
            if (a[i][t].is_zero()) continue;
            for (long j = 0; j < c; ++j) {
                if (b[t][j].is_zero()) continue;
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    return out;
}

Matrix mat_scale(const Scalar& c, const Matrix& a) {
    Matrix out = a;
    for (auto& row : out)
        for (auto& x : row) x *= c;
    return out;
}

bool mat_eq(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

namespace {

// fraction-free one-step elimination; the division by the previous pivot is
// exact (a determinant identity), so no gcd normalization is ever needed
template <class P, class One, class Div>
long bareiss_rank(std::vector<std::vector<P>> m, One one, Div divexact) {
    if (m.empty() || m[0].empty()) return 0;
    long rows = (long)m.size(), cols = (long)m[0].size();
    long rank = 0, prow = 0;
    P prev = one();
    for (long c = 0; c < cols && prow < rows; ++c) {
        long piv = prow;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[prow]);
        for (long r2 = prow + 1; r2 < rows; ++r2) {
            for (long c2 = c + 1; c2 < cols; ++c2)
                m[r2][c2] =
                    divexact(m[prow][c] * m[r2][c2] - m[r2][c] * m[prow][c2], prev);
            m[r2][c] = P();
        }
        prev = m[prow][c];
        ++rank;
        ++prow;
    }
    return rank;
}

// clear the denominators of one row (scaling a row never changes the rank)
template <class P, class Frac>
std::vector<P> cleared_row(const std::vector<Scalar>& row,
                           const Frac& (Scalar::*get)() const) {
    bool plain = true;
    for (auto& s : row)
        if (!(s.*get)().den.is_one()) plain = false;
    std::vector<P> out;
    out.reserve(row.size());
    if (plain) {
        for (auto& s : row) out.push_back((s.*get)().num);
        return out;
    }
    for (size_t i = 0; i < row.size(); ++i) {
        P v = (row[i].*get)().num;
        for (size_t j = 0; j < row.size(); ++j)
            if (j != i) v = v * (row[j].*get)().den;
        out.push_back(v);
    }
    return out;
}

Rat rat_pow(const Rat& b, long e) {
    Rat base = e >= 0 ? b : Rat(1) / b;
    long r = std::labs(e);
    Rat out(1);
    while (r > 0) {
        if (r & 1) out *= base;
        base *= base;
        r >>= 1;
    }
    return out;
}

bool rat_eval_v(const LaurentV& p, const Rat& v0, Rat& out) {
    out = 0;
    for (auto& [e, c] : p.c) out += c * rat_pow(v0, e);
    return true;
}

bool rat_eval_vx(const LaurentVX& p, const Rat& v0, const Rat& x0, Rat& out) {
    out = 0;
    for (auto& [e, c] : p.c) out += c * rat_pow(v0, e.first) * rat_pow(x0, e.second);
    return true;
}

// rank after sending v, x to fixed rationals: always a lower bound for the
// rank over the function field, so reaching full rank is an exact certificate
long rational_rank_lower_bound(const Matrix& m, const RingHandle& ring) {
    Rat v0(17, 5), x0(23, 7);
    long rows = (long)m.size(), cols = (long)m[0].size();
    std::vector<std::vector<Rat>> q(rows, std::vector<Rat>(cols));
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) {
            Rat num, den;
            if (ring->kind == RingKind::GenericV) {
                rat_eval_v(m[i][j].as_fracv().num, v0, num);
                rat_eval_v(m[i][j].as_fracv().den, v0, den);
            } else {
                rat_eval_vx(m[i][j].as_fracvx().num, v0, x0, num);
                rat_eval_vx(m[i][j].as_fracvx().den, v0, x0, den);
            }
            if (den == 0) return -1;
            q[i][j] = num / den;
        }
    long rank = 0, prow = 0;
    for (long c = 0; c < cols && prow < rows; ++c) {
        long piv = prow;
        while (piv < rows && q[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(q[piv], q[prow]);
        for (long r2 = prow + 1; r2 < rows; ++r2) {
            if (q[r2][c] == 0) continue;
            Rat f = q[r2][c] / q[prow][c];
            for (long c2 = c; c2 < cols; ++c2) q[r2][c2] -= f * q[prow][c2];
        }
        ++rank;
        ++prow;
    }
    return rank;
}

}  // namespace

long mat_rank(Matrix m) {
    if (m.empty() || m[0].empty()) return 0;
    const RingHandle& ring = m[0][0].ring();
    if (ring->kind != RingKind::Cyclotomic) {
        long lb = rational_rank_lower_bound(m, ring);
        if (lb == (long)std::min(m.size(), m[0].size())) return lb;
    }
    if (ring->kind == RingKind::GenericV) {
        std::vector<std::vector<LaurentV>> p;
        for (auto& row : m) p.push_back(cleared_row<LaurentV>(row, &Scalar::as_fracv));
        return bareiss_rank(std::move(p), [] { return LaurentV::from_int(1); },
                            [](const LaurentV& a, const LaurentV& b) {
                                return laurent_divexact(a, b);
                            });
    }
    if (ring->kind == RingKind::GenericVX) {
        XRole role = ring->x_role;
        std::vector<std::vector<LaurentVX>> p;
        for (auto& row : m)
            p.push_back(cleared_row<LaurentVX>(row, &Scalar::as_fracvx));
        return bareiss_rank(std::move(p),
                            [role] { return LaurentVX::from_int(1, role); },
                            [](const LaurentVX& a, const LaurentVX& b) {
                                return laurentvx_divexact(a, b);
                            });
    }
    long rows = (long)m.size(), cols = (long)m[0].size();
    long rank = 0, prow = 0;
    for (long c = 0; c < cols && prow < rows; ++c) {
        long piv = prow;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[prow]);
        Scalar inv = m[prow][c].inv();
        for (long r2 = prow + 1; r2 < rows; ++r2) {
            if (m[r2][c].is_zero()) continue;
            Scalar f = m[r2][c] * inv;
            for (long c2 = c; c2 < cols; ++c2) m[r2][c2] -= f * m[prow][c2];
        }
        ++rank;
        ++prow;
    }
    return rank;
}

Scalar mat_det(Matrix m) {
    long n = (long)m.size();
    assert(n == 0 || n == (long)m[0].size());
    if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
    const RingHandle& ring = m[0][0].ring();
    Scalar det = Scalar::one(ring);
    for (long c = 0; c < n; ++c) {
        long piv = c;
        while (piv < n && m[piv][c].is_zero()) ++piv;
        if (piv == n) return Scalar::zero(ring);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Scalar inv = m[c][c].inv();
        for (long r2 = c + 1; r2 < n; ++r2) {
            if (m[r2][c].is_zero()) continue;
            Scalar f = m[r2][c] * inv;
            for (long c2 = c; c2 < n; ++c2) m[r2][c2] -= f * m[c][c2];
        }
    }
    return det;
}

// --------------------------------------------------------------- small utils

static Scalar spow(const Scalar& s, long e) {
    Scalar base = e >= 0 ? s : s.inv();
    long m = std::labs(e);
    Scalar out = Scalar::one(s.ring());
    for (long i = 0; i < m; ++i) out *= base;
    return out;
}

static AffDiagram tau_pow_diag(int n, long w) {
    AffDiagram d = AffDiagram::identity(n);
    if (w == 0) return d;
    AffDiagram t = w > 0 ? AffDiagram::tau(n) : AffDiagram::tau_inv(n);
    for (long i = 0; i < std::labs(w); ++i) {
        auto r = compose(t, d);
        assert(r.beta_loops == 0);
        d = r.d;
    }
    return d;
}

// -------------------------------------------------------- canonical elements

AffDiagram x_gen(int n, int k) {
    validate_nk(n, k);
    std::vector<Arc> arcs;
    for (int i = 1; i <= k; ++i) arcs.push_back(Arc{{0, i}, {1, i}, 0});
    for (int t = k + 1; t < n; t += 2) arcs.push_back(Arc{{0, t}, {0, t + 1}, 0});
    return AffDiagram::make(n, k, arcs);
}

AffDiagram y_gen(int n, int k) {
    validate_nk(n, k);
    if (k < 1) throw std::invalid_argument("y needs at least one through line");
    if (k == n) return AffDiagram::identity(n);
    std::vector<Arc> arcs;
    for (int i = 1; i < k; ++i) arcs.push_back(Arc{{0, i}, {1, i}, 0});
    arcs.push_back(Arc{{0, k}, {1, n}, 0});
    for (int t = k + 1; t < n; t += 2) arcs.push_back(Arc{{0, t}, {0, t + 1}, 0});
    for (int t = k; t < n - 1; t += 2) arcs.push_back(Arc{{1, t}, {1, t + 1}, 0});
    return AffDiagram::make(n, n, arcs);
}

AffDiagram r_gen(int n, int k, int j) {
    validate_nk(n, k);
    if (k < 1 || j < 0 || 2 * j > k) throw std::invalid_argument("bad bending count");
    AffDiagram r0 = [&] {
        if (k == n) return AffDiagram::identity(n);
        std::vector<Arc> arcs;
        for (int i = 1; i < k; ++i) arcs.push_back(Arc{{0, i}, {1, i}, 0});
        arcs.push_back(Arc{{0, k}, {1, n}, 0});
        for (int t = k; t < n - 1; t += 2) arcs.push_back(Arc{{1, t}, {1, t + 1}, 0});
        return AffDiagram::make(k, n, arcs);
    }();
    if (j == 0) return r0;
    // bend the top j and bottom j of the k target points around the seam
    std::vector<Arc> arcs;
    for (int i = 1; i <= k - 2 * j; ++i) arcs.push_back(Arc{{0, i}, {1, i + j}, 0});
    for (int t = 1; t <= j; ++t) arcs.push_back(Arc{{1, t}, {1, k + 1 - t}, -1});
    AffDiagram bend = AffDiagram::make(k - 2 * j, k, arcs);
    auto res = compose(bend, r0);
    assert(res.beta_loops == 0);
    assert(res.d.through_count() == k - 2 * j);
    assert(res.d.rank() == j);
    return res.d;
}

// -------------------------------------------------------------- canonical rep

CanonResult canon_monic(const AffDiagram& d) {
    int k = d.n();
    if (k == 0) return {AffDiagram::make(d.m(), 0, d.arcs(), 0), d.nc_loops()};
    assert(d.through_count() == k);
    auto total = [](const AffDiagram& x) {
        long t = 0;
        for (auto& a : x.arcs())
            if (a.a.side != a.b.side) t += a.w;
        return t;
    };
    AffDiagram cur = d;
    long e = 0, t = total(cur);
    const AffDiagram tp = AffDiagram::tau(k), tm = AffDiagram::tau_inv(k);
    while (t != 0) {
        // maintain d == cur . tau^e
        auto c1 = compose(cur, tp);
        long t1 = total(c1.d);
        if (std::labs(t1) < std::labs(t)) {
            cur = c1.d;
            e -= 1;
            t = t1;
        } else {
            auto c2 = compose(cur, tm);
            long t2 = total(c2.d);
            assert(std::labs(t2) < std::labs(t));
            cur = c2.d;
            e += 1;
            t = t2;
        }
    }
    return {cur, e};
}

static std::vector<AffDiagram> affine_gen_diagrams(int n) {
    std::vector<AffDiagram> gens;
    if (n >= 2)
        for (int i = 0; i < n; ++i) gens.push_back(AffDiagram::e_gen(n, i));
    gens.push_back(AffDiagram::tau(n));
    gens.push_back(AffDiagram::tau_inv(n));
    return gens;
}

std::vector<AffDiagram> monic_basis(int n, int k, bool regular_only) {
    validate_nk(n, k);
    std::vector<AffDiagram> gens;
    if (regular_only) {
        for (int i = 1; i < n; ++i) gens.push_back(AffDiagram::e_gen(n, i));
    } else {
        gens = affine_gen_diagrams(n);
    }
    std::set<AffDiagram> seen;
    std::queue<AffDiagram> bfs;
    AffDiagram x0 = canon_monic(x_gen(n, k)).rep;
    seen.insert(x0);
    bfs.push(x0);
    while (!bfs.empty()) {
        AffDiagram d = bfs.front();
        bfs.pop();
        for (auto& g : gens) {
            auto r = compose(g, d);
            if (r.d.through_count() < k) continue;
            AffDiagram rep = canon_monic(r.d).rep;
            if (seen.insert(rep).second) bfs.push(rep);
        }
    }
    std::vector<AffDiagram> out(seen.begin(), seen.end());
    long expect = regular_only ? dim_S_formula(n, k) : dim_W_formula(n, k);
    assert((long)out.size() == expect);
    (void)expect;
    return out;
}

// --------------------------------------------------------------- module build

namespace {

struct BasisIndex {
    std::map<AffDiagram, int> pos;
    explicit BasisIndex(const std::vector<AffDiagram>& b) {
        for (int i = 0; i < (int)b.size(); ++i) pos[b[i]] = i;
    }
    int at(const AffDiagram& d) const {
        auto it = pos.find(d);
        if (it == pos.end()) throw std::logic_error("diagram missing from basis");
        return it->second;
    }
};

template <class ZFac>
Matrix action_matrix(const RingHandle& ring, const std::vector<AffDiagram>& basis,
                     const BasisIndex& index, const AffDiagram& gd, int k,
                     ZFac&& zfac, bool cell) {
    Scalar beta = ring_beta(ring);
    long d = (long)basis.size();
    Matrix mat = mat_zero(ring, d, d);
    for (long j = 0; j < d; ++j) {
        auto r = compose(gd, basis[j]);
        if (r.d.through_count() < k) continue;  // falls into the lower cell
        auto c = canon_monic(r.d);
        Scalar coef = spow(beta, r.beta_loops);
        if (cell)
            coef *= zfac(c.expo);
        else
            assert(c.expo == 0);
        mat[index.at(c.rep)][j] += coef;
    }
    return mat;
}

}  // namespace

ModuleInstance build_S(int n, int k, const RingHandle& ring) {
    validate_nk(n, k);
    ModuleInstance M;
    M.ring = ring;
    M.n = n;
    M.affine = false;
    M.k = k;
    M.basis = monic_basis(n, k, true);
    BasisIndex index(M.basis);
    auto one = [&](long) { return Scalar::one(ring); };
    for (int g = 1; g < n; ++g)
        M.action[g] =
            action_matrix(ring, M.basis, index, AffDiagram::e_gen(n, g), k, one, false);
    return M;
}

template <class ZFac>
static ModuleInstance build_W_impl(int n, int k, const RingHandle& ring, ZFac&& zfac) {
    validate_nk(n, k);
    ModuleInstance M;
    M.ring = ring;
    M.n = n;
    M.affine = true;
    M.k = k;
    M.basis = monic_basis(n, k, false);
    BasisIndex index(M.basis);
    if (n >= 2)
        for (int g = 0; g < n; ++g)
            M.action[g] = action_matrix(ring, M.basis, index, AffDiagram::e_gen(n, g),
                                        k, zfac, true);
    M.action[GEN_TAU] =
        action_matrix(ring, M.basis, index, AffDiagram::tau(n), k, zfac, true);
    M.action[GEN_TAU_INV] =
        action_matrix(ring, M.basis, index, AffDiagram::tau_inv(n), k, zfac, true);
    return M;
}

ModuleInstance build_W_cell(int n, int k, const Scalar& z, const RingHandle& ring) {
    if (z.is_zero()) throw std::invalid_argument("the twist must be invertible");
    Scalar zloop = k == 0 ? z + z.inv() : z;
    ModuleInstance M =
        build_W_impl(n, k, ring, [&](long e) { return spow(zloop, e); });
    M.twist = z;
    return M;
}

ModuleInstance build_W_free(int n, int k, const RingHandle& ring) {
    if (ring->kind != RingKind::GenericVX || ring->x_role != XRole::TauWinding)
        throw std::invalid_argument("the free module lives over the winding ring");
    Scalar x1 = Scalar::x_pow(ring, 1);
    Scalar zloop = k == 0 ? x1 + x1.inv() : x1;
    return build_W_impl(n, k, ring, [&](long e) { return spow(zloop, e); });
}

ModuleInstance specialize_module(const ModuleInstance& free_mod, const Scalar& z,
                                 const RingHandle& ring) {
    if (free_mod.ring->kind != RingKind::GenericVX)
        throw std::invalid_argument("only a free module can be specialized");
    if (z.is_zero()) throw std::invalid_argument("the twist must be invertible");
    ModuleInstance M;
    M.ring = ring;
    M.n = free_mod.n;
    M.affine = free_mod.affine;
    M.k = free_mod.k;
    M.basis = free_mod.basis;
    M.twist = z;
    for (auto& [g, mat] : free_mod.action) {
        Matrix out = mat_zero(ring, (long)mat.size(), (long)mat.size());
        for (size_t i = 0; i < mat.size(); ++i)
            for (size_t j = 0; j < mat[i].size(); ++j)
                out[i][j] = specialize_x(mat[i][j], ring, z);
        M.action[g] = out;
    }
    return M;
}

// ----------------------------------------------------------------- relations

std::vector<std::string> module_relation_failures(const ModuleInstance& M) {
    std::vector<std::string> fail;
    const RingHandle& ring = M.ring;
    long d = M.dim();
    Matrix id = mat_identity(ring, d);
    Scalar beta = ring_beta(ring);
    auto A = [&](int g) -> const Matrix& { return M.action.at(g); };
    auto chk = [&](const std::string& name, const Matrix& l, const Matrix& r) {
        if (!mat_eq(l, r)) fail.push_back(name);
    };
    int n = M.n;
    auto nm = [](const std::string& s, int i) { return s + std::to_string(i); };
    if (!M.affine) {
        for (int i = 1; i < n; ++i) {
            chk(nm("u^2 = beta u at ", i), mat_mul(A(i), A(i)), mat_scale(beta, A(i)));
            if (i + 1 < n) {
                chk(nm("u u+ u at ", i), mat_mul(A(i), mat_mul(A(i + 1), A(i))), A(i));
                chk(nm("u+ u u+ at ", i), mat_mul(A(i + 1), mat_mul(A(i), A(i + 1))),
                    A(i + 1));
            }
            for (int j = i + 2; j < n; ++j)
                chk(nm("commute at ", i * 100 + j), mat_mul(A(i), A(j)),
                    mat_mul(A(j), A(i)));
        }
        return fail;
    }
    chk("tau tau^-1", mat_mul(A(GEN_TAU), A(GEN_TAU_INV)), id);
    chk("tau^-1 tau", mat_mul(A(GEN_TAU_INV), A(GEN_TAU)), id);
    if (n >= 2) {
        for (int i = 0; i < n; ++i) {
            chk(nm("e^2 = beta e at ", i), mat_mul(A(i), A(i)), mat_scale(beta, A(i)));
            chk(nm("tau shift at ", i),
                mat_mul(A(GEN_TAU), mat_mul(A(i), A(GEN_TAU_INV))), A((i + 1) % n));
            if (n >= 3) {
                int ip = (i + 1) % n, im = (i + n - 1) % n;
                chk(nm("e e+ e at ", i), mat_mul(A(i), mat_mul(A(ip), A(i))), A(i));
                chk(nm("e e- e at ", i), mat_mul(A(i), mat_mul(A(im), A(i))), A(i));
            }
            for (int j = i + 1; j < n; ++j) {
                int dist = std::min(j - i, n - (j - i));
                if (dist >= 2)
                    chk(nm("commute at ", i * 100 + j), mat_mul(A(i), A(j)),
                        mat_mul(A(j), A(i)));
            }
        }
    }
    return fail;
}

// ---------------------------------------------------------------- Gram forms

GramData gram_matrix(const ModuleInstance& W) {
    if (!W.affine)
        throw std::invalid_argument("the invariant form is defined on cell modules");
    const RingHandle& ring = W.ring;
    Scalar z = Scalar::zero(ring);
    if (W.twist) {
        z = *W.twist;
    } else if (ring->kind == RingKind::GenericVX) {
        z = Scalar::x_pow(ring, 1);
    } else {
        throw std::invalid_argument("no twist value available for the form");
    }
    Scalar beta = ring_beta(ring);
    Scalar zloop = z + z.inv();
    int k = W.k;
    long d = W.dim();
    GramData G;
    G.matrix = mat_zero(ring, d, d);
    AffDiagram idk = AffDiagram::identity(k);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) {
            auto r = compose(W.basis[i].transpose(), W.basis[j]);
            if (r.d.through_count() < k) continue;
            Scalar val = spow(beta, r.beta_loops);
            if (k > 0) {
                auto c = canon_monic(r.d);
                assert(c.rep == idk);
                val *= spow(z, c.expo);
            } else {
                val *= spow(zloop, r.d.nc_loops());
            }
            G.matrix[i][j] = val;
        }
    }
    G.rank = mat_rank(G.matrix);
    G.radical_dim = d - G.rank;
    return G;
}

// ------------------------------------------------------------------ Indar S

// factor a diagram in Hom(kp, n) with kpp through lines as monic . epic,
// searching over the finitely many seam placements of the cut circle
static std::pair<AffDiagram, AffDiagram> epi_mono_factor(const AffDiagram& d) {
    int nn = d.m(), kp = d.n(), kpp = d.through_count();
    std::vector<Arc> left, right, thr;
    for (auto& a : d.arcs()) {
        if (a.a.side == 0 && a.b.side == 0)
            left.push_back(a);
        else if (a.a.side == 1 && a.b.side == 1)
            right.push_back(a);
        else
            thr.push_back(a);
    }
    if (kpp == 0)
        return {AffDiagram::make(nn, 0, left, d.nc_loops()),
                AffDiagram::make(0, kp, right)};
    // the cut circle meets the through strands in the cyclic order of their
    // left endpoints; the rotation s places the seam, and the monic-side
    // windings follow the wrap pattern shifted by a global sheet base
    long wmax = 2;
    for (auto& a : thr) wmax = std::max(wmax, std::labs((long)a.w) + 2);
    for (int s = 0; s < kpp; ++s) {
        for (long base = -wmax; base <= wmax; ++base) {
            std::vector<Arc> la = left, ra = right;
            for (int i = 0; i < kpp; ++i) {
                int t = 1 + (i + s) % kpp;
                int carry = (i + s) >= kpp ? 1 : 0;
                int ui = (int)base + carry;
                int vi = thr[i].w - ui;
                la.push_back(Arc{{0, thr[i].a.idx}, {1, t}, ui});
                ra.push_back(Arc{{0, t}, {1, thr[i].b.idx}, vi});
            }
            try {
                AffDiagram lp = AffDiagram::make(nn, kpp, la);
                AffDiagram rp = AffDiagram::make(kpp, kp, ra);
                auto c = compose(lp, rp);
                if (c.beta_loops == 0 && c.d == d) return {lp, rp};
            } catch (const std::invalid_argument&) {
            }
        }
    }
    throw std::logic_error("no monic-epic factorization found");
}

int IndarModule::find_index(int j, const AffDiagram& d) const {
    const auto& v = strata[j];
    auto it = std::lower_bound(v.begin(), v.end(), d);
    if (it == v.end() || !(*it == d)) throw std::logic_error("missing stratum rep");
    return (int)(it - v.begin());
}

std::vector<IndarTerm> IndarModule::apply(int gen, const IndarKey& key) const {
    Scalar beta = ring_beta(ring);
    int kp = k - 2 * key.j;
    const AffDiagram& l0 = strata[key.j][key.idx];
    AffDiagram l = l0;
    if (kp > 0 && key.w != 0) {
        auto c = compose(l0, tau_pow_diag(kp, key.w));
        assert(c.beta_loops == 0);
        l = c.d;
    } else if (kp == 0 && key.w != 0) {
        l = AffDiagram::make(l0.m(), 0, l0.arcs(), key.w);
    }
    AffDiagram gd = gen == GEN_TAU      ? AffDiagram::tau(n)
                    : gen == GEN_TAU_INV ? AffDiagram::tau_inv(n)
                                         : AffDiagram::e_gen(n, gen);
    auto r1 = compose(gd, l);
    long bl = r1.beta_loops;
    int kpp = r1.d.through_count();
    std::vector<IndarTerm> out;
    if (kpp == kp) {
        if (kp > 0) {
            auto c = canon_monic(r1.d);
            out.push_back({{key.j, find_index(key.j, c.rep), c.expo}, spow(beta, bl)});
        } else {
            AffDiagram rep = AffDiagram::make(r1.d.m(), 0, r1.d.arcs(), 0);
            out.push_back(
                {{key.j, find_index(key.j, rep), r1.d.nc_loops()}, spow(beta, bl)});
        }
        return out;
    }
    // the image falls into a deeper stratum: peel off the epic part and
    // rewrite it through the bent elements
    auto [lp, rpp] = epi_mono_factor(r1.d);
    int jpp = (k - kpp) / 2;
    auto c2 = compose(rpp, rj[key.j]);
    auto c3 = compose(c2.d, y_gen(n, k));
    long bl2 = bl + c2.beta_loops + c3.beta_loops;
    const AffDiagram& D = c3.d;
    if (kpp > 0) {
        long bound = k + n + 4;
        for (long c = -bound; c <= bound; ++c) {
            auto cand = compose(tau_pow_diag(kpp, c), rj[jpp]);
            assert(cand.beta_loops == 0);
            if (cand.d == D) {
                auto cl = canon_monic(lp);
                out.push_back({{jpp, find_index(jpp, cl.rep), cl.expo + c},
                               spow(beta, bl2)});
                return out;
            }
        }
        return out;  // an arc missed the seam: the element is zero
    }
    AffDiagram D0 = AffDiagram::make(D.m(), D.n(), D.arcs(), 0);
    if (!(D0 == rj[jpp])) return out;
    AffDiagram l0p = AffDiagram::make(lp.m(), 0, lp.arcs(), 0);
    out.push_back({{jpp, find_index(jpp, l0p), lp.nc_loops() + D.nc_loops()},
                   spow(beta, bl2)});
    return out;
}

std::vector<IndarTerm> IndarModule::apply(int gen,
                                          const std::vector<IndarTerm>& v) const {
    std::map<IndarKey, Scalar> acc;
    for (auto& t : v) {
        for (auto& u : apply(gen, t.key)) {
            auto it = acc.find(u.key);
            Scalar c = t.coef * u.coef;
            if (it == acc.end())
                acc.emplace(u.key, c);
            else
                it->second += c;
        }
    }
    std::vector<IndarTerm> out;
    for (auto& [key, c] : acc)
        if (!c.is_zero()) out.push_back({key, c});
    return out;
}

IndarModule build_IndarS(int n, int k, const RingHandle& ring) {
    validate_nk(n, k);
    if (ring_beta(ring).is_zero() && k <= 2)
        throw std::invalid_argument(
            "induction from k <= 2 needs an invertible loop value beta");
    IndarModule M;
    M.ring = ring;
    M.n = n;
    M.k = k;
    for (int j = 0; 2 * j <= k; ++j) M.strata.push_back(monic_basis(n, k - 2 * j, false));
    if (k >= 1)
        for (int j = 0; 2 * j <= k; ++j) M.rj.push_back(r_gen(n, k, j));
    else
        M.rj.push_back(x_gen(n, 0).transpose());
    return M;
}

ModuleInstance indar_quotient_j0(const IndarModule& M) {
    const RingHandle& ring = M.ring;
    if (ring->kind != RingKind::GenericVX || ring->x_role != XRole::TauWinding)
        throw std::invalid_argument("the top quotient lives over the winding ring");
    ModuleInstance Q;
    Q.ring = ring;
    Q.n = M.n;
    Q.affine = true;
    Q.k = M.k;
    Q.basis = M.strata[0];
    long d = Q.dim();
    Scalar x1 = Scalar::x_pow(ring, 1);
    Scalar zloop = M.k == 0 ? x1 + x1.inv() : x1;
    std::vector<int> gens;
    if (M.n >= 2)
        for (int i = 0; i < M.n; ++i) gens.push_back(i);
    gens.push_back(GEN_TAU);
    gens.push_back(GEN_TAU_INV);
    for (int g : gens) {
        Matrix mat = mat_zero(ring, d, d);
        for (long col = 0; col < d; ++col) {
            for (auto& t : M.apply(g, IndarKey{0, (int)col, 0})) {
                if (t.key.j != 0) continue;
                mat[t.key.idx][col] += t.coef * spow(zloop, t.key.w);
            }
        }
        Q.action[g] = mat;
    }
    return Q;
}

// ------------------------------------------------------------- restriction

// open a rank-r representative along the seam: every winding arc is cut into
// a pair of through lines attached to fresh bottom and top points
static AffDiagram surgery_cut(const AffDiagram& d, int r, int variant) {
    int n = d.m(), k = d.n();
    int K = k + 2 * r;
    std::vector<Arc> arcs;
    std::vector<int> bot, top;
    for (auto& a : d.arcs()) {
        if (a.a.side != a.b.side) {
            assert(a.w == 0);
            arcs.push_back(Arc{{0, a.a.idx}, {1, a.b.idx + r}, 0});
        } else if (a.w == 0) {
            arcs.push_back(a);
        } else {
            assert(std::abs(a.w) == 1);
            bool up = (variant & 4) ? a.w == -1 : a.w == 1;
            if (up) {
                top.push_back(a.a.idx);
                bot.push_back(a.b.idx);
            } else {
                bot.push_back(a.a.idx);
                top.push_back(a.b.idx);
            }
        }
    }
    std::sort(bot.begin(), bot.end());
    std::sort(top.begin(), top.end());
    if (variant & 1) std::reverse(bot.begin(), bot.end());
    if (variant & 2) std::reverse(top.begin(), top.end());
    for (int t = 0; t < (int)bot.size(); ++t)
        arcs.push_back(Arc{{0, bot[t]}, {1, t + 1}, 0});
    for (int t = 0; t < (int)top.size(); ++t)
        arcs.push_back(Arc{{0, top[t]}, {1, K - r + 1 + t}, 0});
    return AffDiagram::make(n, K, arcs);
}

std::vector<ResarStratum> resar_filtration(const ModuleInstance& W) {
    if (!W.affine || !W.twist)
        throw std::invalid_argument("the rank filtration needs a cell module");
    if (W.ring->kind == RingKind::Cyclotomic)
        throw std::invalid_argument(
            "the rank filtration is only identified over a generic ring");
    int n = W.n, k = W.k;
    long rmax = (n - k) / 2;
    std::vector<std::vector<long>> slice(rmax + 1);
    for (long i = 0; i < W.dim(); ++i) {
        long r = W.basis[i].rank();
        assert(r <= rmax);
        slice[r].push_back(i);
    }
    std::vector<long> rank_of(W.dim());
    for (long i = 0; i < W.dim(); ++i) rank_of[i] = W.basis[i].rank();
    std::vector<ResarStratum> out;
    for (long r = 0; r <= rmax; ++r) {
        ResarStratum st;
        st.r = (int)r;
        ModuleInstance& Q = st.quotient;
        Q.ring = W.ring;
        Q.n = n;
        Q.affine = false;
        Q.k = k + 2 * (int)r;
        for (long i : slice[r]) Q.basis.push_back(W.basis[i]);
        long sz = (long)slice[r].size();
        for (int g = 1; g < n; ++g) {
            const Matrix& A = W.action.at(g);
            Matrix mat = mat_zero(W.ring, sz, sz);
            for (long a = 0; a < sz; ++a) {
                long col = slice[r][a];
                for (long row = 0; row < W.dim(); ++row) {
                    if (A[row][col].is_zero()) continue;
                    assert(rank_of[row] <= r);  // the filtration is respected
                    if (rank_of[row] < r) continue;
                }
                for (long b = 0; b < sz; ++b) mat[b][a] = A[slice[r][b]][col];
            }
            Q.action[g] = mat;
        }
        // identify the quotient with the standard module by cutting the seam
        ModuleInstance S = build_S(n, k + 2 * (int)r, W.ring);
        BasisIndex sidx(S.basis);
        st.surgery.assign(sz, -1);
        for (int variant = 0; variant < 8 && !st.matches_standard; ++variant) {
            std::vector<long> map(sz, -1);
            bool good = true;
            for (long a = 0; a < sz && good; ++a) {
                try {
                    map[a] = sidx.at(surgery_cut(Q.basis[a], (int)r, variant));
                } catch (const std::exception&) {
                    good = false;
                }
            }
            if (good) {
                std::set<long> img(map.begin(), map.end());
                good = (long)img.size() == sz && sz == S.dim();
            }
            for (int g = 1; g < n && good; ++g) {
                const Matrix& QA = Q.action.at(g);
                const Matrix& SA = S.action.at(g);
                for (long a = 0; a < sz && good; ++a)
                    for (long b = 0; b < sz && good; ++b)
                        if (QA[b][a] != SA[map[b]][map[a]]) good = false;
            }
            if (good) {
                st.surgery = map;
                st.matches_standard = true;
            }
        }
        out.push_back(std::move(st));
    }
    return out;
}

// ---------------------------------------------------------------- Peirce count

PeirceReport peirce_count_check(int n, int B) {
    PeirceReport rep;
    rep.n = n;
    rep.B = B;
    // left side: exact count of diagrams through the cell parametrization
    for (int kq = n; kq >= 0; kq -= 2) {
        auto mon = monic_basis(n, kq, false);
        for (auto& l : mon) {
            for (auto& e : mon) {
                AffDiagram et = e.transpose();
                // any diagram of rank <= B has total through winding <= B,
                // and loops are bounded directly
                for (long w = -(long)B; w <= (long)B; ++w) {
                    if (kq == 0 && w < 0) continue;
                    AffDiagram D;
                    long loops = 0;
                    if (kq > 0) {
                        auto c1 = compose(l, tau_pow_diag(kq, w));
                        auto c2 = compose(c1.d, et);
                        assert(c1.beta_loops == 0 && c2.beta_loops == 0);
                        D = c2.d;
                        loops = D.nc_loops();
                    } else {
                        auto c2 = compose(l, et);
                        assert(c2.beta_loops == 0);
                        D = c2.d;
                        loops = D.nc_loops() + w;
                    }
                    if (D.rank() <= B && loops <= B) ++rep.lhs;
                }
            }
        }
    }
    // right side: standard multiplicities times the graded induced count
    auto ring = ring_generic();
    for (int k = n; k >= 0; k -= 2) {
        IndarModule M = build_IndarS(n, k, ring);
        long cnt = 0;
        for (int j = 0; 2 * j <= k; ++j) {
            int kp = k - 2 * j;
            for (auto& l0 : M.strata[j]) {
                long bound = B + k + 2;
                for (long w = kp == 0 ? 0 : -bound; w <= (kp == 0 ? (long)B : bound);
                     ++w) {
                    AffDiagram l = l0;
                    if (kp > 0 && w != 0) {
                        auto c = compose(l0, tau_pow_diag(kp, w));
                        assert(c.beta_loops == 0);
                        l = c.d;
                    } else if (kp == 0) {
                        l = AffDiagram::make(l0.m(), 0, l0.arcs(), w);
                    }
                    auto c = compose(l, M.rj[j]);
                    assert(c.beta_loops == 0);
                    if (c.d.rank() <= B && c.d.nc_loops() <= B) ++cnt;
                }
            }
        }
        rep.rhs_per_k[k] = dim_S_formula(n, k) * cnt;
        rep.rhs += rep.rhs_per_k[k];
    }
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace atl
