#include "atl/functors.hpp"

#include <cassert>
#include <map>
#include <stdexcept>

namespace atl {

namespace {

Matrix mat_add(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < out[i].size(); ++j) out[i][j] = out[i][j] + b[i][j];
    return out;
}

bool rings_match(const RingHandle& a, const RingHandle& b) {
    if (a == b) return true;
    return a->kind == b->kind && a->x_role == b->x_role && a->N == b->N &&
           a->v_exp == b->v_exp;
}

// Gauss-Jordan inverse; throws on a singular input
Matrix mat_inverse(Matrix m) {
    if (m.empty()) return {};
    long d = (long)m.size();
    Matrix inv = mat_identity(m[0][0].ring(), d);
    for (long col = 0; col < d; ++col) {
        long piv = -1;
        for (long r = col; r < d; ++r)
            if (!m[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::invalid_argument("mat_inverse: singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Scalar f = m[col][col].inv();
        for (long j = 0; j < d; ++j) {
            m[col][j] = m[col][j] * f;
            inv[col][j] = inv[col][j] * f;
        }
        for (long r = 0; r < d; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Scalar g = m[r][col];
            for (long j = 0; j < d; ++j) {
                m[r][j] = m[r][j] - g * m[col][j];
                inv[r][j] = inv[r][j] - g * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace

// --------------------------------------------------------- pulled-back action

PulledBackModule resphi_concrete(const ModuleInstance& X) {
    if (X.affine)
        throw std::invalid_argument("resphi_concrete expects a regular module");
    const RingHandle& ring = X.ring;
    int n = X.n;
    long d = X.dim();
    Matrix id = mat_identity(ring, d);

    auto U = [&](int i) -> const Matrix& { return X.action.at(i); };
    // matrix of the braid generator and its inverse on X
    auto Tm = [&](int i, bool inverse) {
        Scalar a = Scalar::v_pow(ring, inverse ? -1 : 1);
        Scalar b = Scalar::v_pow(ring, inverse ? 1 : -1);
        return mat_add(mat_scale(a, id), mat_scale(b, U(i)));
    };

    ModuleInstance P;
    P.ring = ring;
    P.n = n;
    P.affine = true;
    P.k = X.k;
    P.basis = X.basis;
    P.twist = X.twist;

    if (n == 1) {
        P.action[GEN_TAU] = mat_scale(Scalar::v_pow(ring, 3), id);
        P.action[GEN_TAU_INV] = mat_scale(Scalar::v_pow(ring, -3), id);
        return {X, P};
    }
    if (n == 2) {
        Matrix tau = mat_add(mat_scale(Scalar::v_pow(ring, 4), id),
                             mat_scale(Scalar::v_pow(ring, 2), U(1)));
        Matrix taui = mat_add(mat_scale(Scalar::v_pow(ring, -4), id),
                              mat_scale(Scalar::v_pow(ring, -2), U(1)));
        P.action[GEN_TAU] = tau;
        P.action[GEN_TAU_INV] = taui;
        P.action[0] = mat_mul(tau, mat_mul(U(1), taui));
        P.action[1] = U(1);
        return {X, P};
    }

    // the commutor word T_1 T_2 ... T_{n-1} and its inverse
    Matrix H = id, Hi = id;
    for (int j = n - 1; j >= 1; --j) H = mat_mul(Tm(j, false), H);
    for (int j = 1; j <= n - 1; ++j) Hi = mat_mul(Tm(j, true), Hi);

    P.action[GEN_TAU] = mat_scale(Scalar::v_pow(ring, 3), H);
    P.action[GEN_TAU_INV] = mat_scale(Scalar::v_pow(ring, -3), Hi);
    P.action[0] = mat_mul(Hi, mat_mul(U(1), H));
    for (int i = 1; i < n; ++i) P.action[i] = U(i);
    return {X, P};
}

// -------------------------------------------------------------- M(n,k), P(n,k)

ModuleInstance build_M_concrete(int n, int k, const RingHandle& ring) {
    if (k < 0 || k > n || (n - k) % 2 != 0)
        throw std::invalid_argument("build_M_concrete: invalid (n,k)");
    ModuleInstance M;
    M.ring = ring;
    M.n = n;
    M.affine = false;
    M.k = k;
    // every diagram from k to n factors uniquely through its through-line
    // count t as a monic (t,n) piece over an epic (k,t) piece
    if (k == 0) M.basis = monic_basis(n, 0, true);
    for (int t = k % 2 + (k == 0 ? 2 : 0); t <= k; t += 2) {
        auto tops = monic_basis(n, t, true);
        auto bots = monic_basis(k, t, true);
        for (const auto& m1 : tops)
            for (const auto& m2 : bots) {
                auto c = compose(m1, m2.transpose());
                assert(c.beta_loops == 0);
                M.basis.push_back(c.d);
            }
    }
    long catalan = binom(n + k, (n + k) / 2) - binom(n + k, (n + k) / 2 + 1);
    if ((long)M.basis.size() != catalan)
        throw std::logic_error("build_M_concrete: basis count mismatch");

    std::map<AffDiagram, int> index;
    for (size_t i = 0; i < M.basis.size(); ++i) index[M.basis[i]] = (int)i;
    Scalar beta = ring_beta(ring);
    long d = (long)M.basis.size();
    for (int g = 1; g < n; ++g) {
        Matrix mat = mat_zero(ring, d, d);
        for (long col = 0; col < d; ++col) {
            auto c = compose(AffDiagram::e_gen(n, g), M.basis[col]);
            Scalar coef = Scalar::one(ring);
            for (long l = 0; l < c.beta_loops; ++l) coef = coef * beta;
            mat[index.at(c.d)][col] = mat[index.at(c.d)][col] + coef;
        }
        M.action[g] = mat;
    }
    return M;
}

ModuleInstance image_submodule(const ModuleInstance& X, const Matrix& Q) {
    long d = X.dim();
    // independent columns of Q span the image
    std::vector<long> cols;
    {
        Matrix work = Q;
        long row = 0;
        for (long c = 0; c < d && row < d; ++c) {
            long piv = -1;
            for (long r = row; r < d; ++r)
                if (!work[r][c].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            std::swap(work[piv], work[row]);
            Scalar f = work[row][c].inv();
            for (long j = c; j < d; ++j) work[row][j] = work[row][j] * f;
            for (long r = 0; r < d; ++r) {
                if (r == row || work[r][c].is_zero()) continue;
                Scalar g = work[r][c];
                for (long j = c; j < d; ++j) work[r][j] = work[r][j] - g * work[row][j];
            }
            cols.push_back(c);
            ++row;
        }
    }
    long r = (long)cols.size();
    Matrix B = mat_zero(X.ring, d, r);
    for (long i = 0; i < d; ++i)
        for (long s = 0; s < r; ++s) B[i][s] = Q[i][cols[s]];

    // pivot rows of B give coordinates on the image
    std::vector<long> rows;
    {
        Matrix work = B;
        std::vector<long> who(d);
        for (long i = 0; i < d; ++i) who[i] = i;
        long row = 0;
        for (long c = 0; c < r && row < d; ++c) {
            long piv = -1;
            for (long rr = row; rr < d; ++rr)
                if (!work[rr][c].is_zero()) {
                    piv = rr;
                    break;
                }
            if (piv < 0) throw std::logic_error("image_submodule: rank drop");
            std::swap(work[piv], work[row]);
            std::swap(who[piv], who[row]);
            Scalar f = work[row][c].inv();
            for (long j = c; j < r; ++j) work[row][j] = work[row][j] * f;
            for (long rr = 0; rr < d; ++rr) {
                if (rr == row || work[rr][c].is_zero()) continue;
                Scalar g = work[rr][c];
                for (long j = c; j < r; ++j)
                    work[rr][j] = work[rr][j] - g * work[row][j];
            }
            rows.push_back(who[row]);
            ++row;
        }
    }
    Matrix BR = mat_zero(X.ring, r, r);
    for (long i = 0; i < r; ++i)
        for (long s = 0; s < r; ++s) BR[i][s] = B[rows[i]][s];
    Matrix BRinv = mat_inverse(BR);

    ModuleInstance S;
    S.ring = X.ring;
    S.n = X.n;
    S.affine = X.affine;
    S.k = X.k;
    S.twist = X.twist;
    for (long i = 0; i < r; ++i) S.basis.push_back(X.basis[rows[i]]);
    for (auto& [g, MA] : X.action) {
        Matrix W = mat_mul(MA, B);            // d x r, columns stay in the image
        Matrix WR = mat_zero(X.ring, r, r);
        for (long i = 0; i < r; ++i)
            for (long s = 0; s < r; ++s) WR[i][s] = W[rows[i]][s];
        Matrix act = mat_mul(BRinv, WR);
        if (!mat_eq(mat_mul(B, act), W))
            throw std::logic_error("image_submodule: image is not invariant");
        S.action[g] = act;
    }
    return S;
}

namespace {

ModuleInstance build_P_cached(int n, int k, const RingHandle& ring,
                              std::map<int, ModuleInstance>& cache) {
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    ModuleInstance X = build_M_concrete(n, k, ring);
    Scalar one = Scalar::one(ring);
    for (int j = k - 2; j >= k % 2; j -= 2) {
        ModuleInstance Pj = build_P_cached(n, j, ring, cache);
        // peel every summand isomorphic to P(n,j)
        for (;;) {
            auto G = hom_space(Pj, X);
            auto Hh = hom_space(X, Pj);
            bool peeled = false;
            for (const Matrix& g : G.basis) {
                for (const Matrix& h : Hh.basis) {
                    Matrix C = mat_mul(h, g);
                    if (mat_det(C).is_zero()) continue;
                    // pi = g C^{-1} h projects onto a copy of P(n,j)
                    Matrix pi = mat_mul(g, mat_mul(mat_inverse(C), h));
                    Matrix comp = mat_scale(one, mat_identity(ring, X.dim()));
                    for (size_t a = 0; a < comp.size(); ++a)
                        for (size_t b = 0; b < comp.size(); ++b)
                            comp[a][b] = comp[a][b] - pi[a][b];
                    X = image_submodule(X, comp);
                    peeled = true;
                    break;
                }
                if (peeled) break;
            }
            if (!peeled) break;
        }
    }
    cache.emplace(k, X);
    return X;
}

}  // namespace

ModuleInstance build_P_concrete(int n, int k, const RingHandle& ring) {
    if (ring_beta(ring).is_zero())
        throw std::domain_error(
            "build_P_concrete: projective splitting needs an invertible loop value");
    std::map<int, ModuleInstance> cache;
    return build_P_cached(n, k, ring, cache);
}

// -------------------------------------------------------------- isomorphism

IsoResult isomorphism_signature(const ModuleInstance& A, const ModuleInstance& B) {
    if (!rings_match(A.ring, B.ring))
        throw std::invalid_argument("isomorphism_signature: ring mismatch");
    IsoResult res;
    if (A.dim() != B.dim()) {
        res.verdict = IsoVerdict::Distinguished;
        res.detail = "dimensions differ: " + std::to_string(A.dim()) + " vs " +
                     std::to_string(B.dim());
        return res;
    }
    if (A.dim() == 0) {
        res.verdict = IsoVerdict::IsomorphicCertified;
        res.detail = "both modules are zero";
        return res;
    }
    auto H = hom_space(A, B);
    auto certify = [&](const Matrix& F) {
        if (mat_det(F).is_zero()) return false;
        res.verdict = IsoVerdict::IsomorphicCertified;
        res.detail = "explicit invertible intertwiner";
        res.intertwiner = F;
        return true;
    };
    for (const Matrix& F : H.basis)
        if (certify(F)) return res;
    // small deterministic combinations hit the invertible locus when it is
    // nonempty in all but degenerate coincidences
    if (H.dim >= 2) {
        for (size_t a = 0; a < H.basis.size(); ++a)
            for (size_t b = a + 1; b < H.basis.size(); ++b) {
                if (certify(mat_add(H.basis[a], H.basis[b]))) return res;
                if (certify(mat_add(H.basis[a],
                                    mat_scale(Scalar::from_int(A.ring, -1),
                                              H.basis[b]))))
                    return res;
            }
        for (int trial = 2; trial <= 3; ++trial) {
            Matrix F = mat_zero(A.ring, B.dim(), A.dim());
            long c = 1;
            for (const Matrix& G : H.basis) {
                F = mat_add(F, mat_scale(Scalar::from_int(A.ring, c), G));
                c = c * trial + 1;
            }
            if (certify(F)) return res;
        }
    }
    auto Hrev = hom_space(B, A);
    long ea = end_dim(A), eb = end_dim(B);
    if (ea != eb) {
        res.verdict = IsoVerdict::Distinguished;
        res.detail = "endomorphism dimensions differ: " + std::to_string(ea) +
                     " vs " + std::to_string(eb);
        return res;
    }
    if (H.dim != Hrev.dim) {
        res.verdict = IsoVerdict::Distinguished;
        res.detail = "asymmetric Hom dimensions: " + std::to_string(H.dim) +
                     " vs " + std::to_string(Hrev.dim);
        return res;
    }
    if (H.dim == 0) {
        res.verdict = IsoVerdict::Distinguished;
        res.detail = "no nonzero intertwiners";
        return res;
    }
    res.verdict = IsoVerdict::Inconclusive;
    res.detail = "no invertible intertwiner found and no separating invariant";
    return res;
}

// --------------------------------------------------------- identity checking

bool FunctorIdentityReport::all_pass() const {
    for (auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

FunctorIdentityReport functor_identity_check(
    const std::vector<ModuleInstance>& regular_modules) {
    FunctorIdentityReport rep;
    std::vector<PulledBackModule> pulled;
    for (size_t i = 0; i < regular_modules.size(); ++i) {
        const auto& X = regular_modules[i];
        std::string tag = "module " + std::to_string(i) + " (n=" +
                          std::to_string(X.n) + ",k=" + std::to_string(X.k) + ")";
        auto P = resphi_concrete(X);
        rep.checks.emplace_back("representation after pulling back: " + tag,
                                module_relation_failures(P.module).empty());
        bool literal = true;
        for (int g = 1; g < X.n; ++g)
            literal = literal && mat_eq(P.module.action.at(g), X.action.at(g));
        rep.checks.emplace_back("restriction returns the original action: " + tag,
                                literal);
        rep.checks.emplace_back("dimension preserved: " + tag,
                                P.module.dim() == X.dim());
        pulled.push_back(std::move(P));
    }
    for (size_t i = 0; i < regular_modules.size(); ++i)
        for (size_t j = 0; j < regular_modules.size(); ++j) {
            const auto& A = regular_modules[i];
            const auto& B = regular_modules[j];
            if (A.n != B.n || !rings_match(A.ring, B.ring)) continue;
            std::string tag =
                "Hom dimension preserved: (" + std::to_string(i) + "," +
                std::to_string(j) + ")";
            rep.checks.emplace_back(
                tag, hom_space(A, B).dim ==
                         hom_space(pulled[i].module, pulled[j].module).dim);
        }
    return rep;
}

}  // namespace atl
