#include "atl/homsolver.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace atl {

namespace {

bool same_ring(const RingHandle& a, const RingHandle& b) {
    if (a == b) return true;
    return a->kind == b->kind && a->N == b->N && a->v_exp == b->v_exp &&
           a->ell == b->ell && a->x_role == b->x_role;
}

// generalized permutation matrix: exactly one nonzero entry in every row and
// every column (the translation acts like this on cell bases)
bool is_genperm(const Matrix& m) {
    const size_t d = m.size();
    if (d == 0) return false;
    std::vector<int> col_count(d, 0);
    for (size_t i = 0; i < d; ++i) {
        int row_count = 0;
        for (size_t j = 0; j < d; ++j)
            if (!m[i][j].is_zero()) {
                ++row_count;
                ++col_count[j];
            }
        if (row_count != 1) return false;
    }
    for (size_t j = 0; j < d; ++j)
        if (col_count[j] != 1) return false;
    return true;
}

// union-find over matrix entries with multiplicative offsets:
// F_t = ratio[t] * F_{root(t)}, or F_t = 0 when the class is degenerate
struct RatioUF {
    std::vector<long> parent;
    std::vector<Scalar> ratio;
    std::vector<bool> zero;  // valid on roots

    RatioUF(long n, const RingHandle& ring)
        : parent(n), ratio(n, Scalar::one(ring)), zero(n, false) {
        for (long i = 0; i < n; ++i) parent[i] = i;
    }

    std::pair<long, Scalar> find(long t) {
        if (parent[t] == t) return {t, ratio[t]};
        auto [r, c] = find(parent[t]);
        parent[t] = r;
        ratio[t] = ratio[t] * c;
        return {t == r ? r : r, ratio[t]};
    }

    // impose F_w = f * F_u
    void unite(long w, long u, const Scalar& f) {
        auto [rw, cw] = find(w);  // F_w = cw F_rw
        auto [ru, cu] = find(u);  // F_u = cu F_ru
        if (rw == ru) {
            // cw F_r = f cu F_r; conflict forces the whole class to zero
            if (cw != f * cu) zero[rw] = true;
            return;
        }
        // F_rw = cw^-1 f cu F_ru
        parent[rw] = ru;
        ratio[rw] = cw.inv() * f * cu;
        if (zero[rw]) zero[ru] = true;
    }
};

}  // namespace

std::vector<std::vector<Scalar>> mat_nullspace(Matrix m) {
    const long rows = (long)m.size();
    const long cols = rows ? (long)m[0].size() : 0;
    if (cols == 0) return {};
    if (rows == 0) {
        // ambient ring unknown; callers never pass zero-row matrices
        throw std::invalid_argument("mat_nullspace: empty matrix");
    }
    const RingHandle ring = m[0][0].ring();
    std::vector<long> pivot_row_of_col(cols, -1);
    long prow = 0;
    for (long col = 0; col < cols && prow < rows; ++col) {
        long sel = -1;
        for (long r = prow; r < rows; ++r)
            if (!m[r][col].is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[prow], m[sel]);
        Scalar inv = m[prow][col].inv();
        for (long j = col; j < cols; ++j)
            if (!m[prow][j].is_zero()) m[prow][j] = m[prow][j] * inv;
        for (long r = 0; r < rows; ++r) {
            if (r == prow || m[r][col].is_zero()) continue;
            Scalar f = m[r][col];
            for (long j = col; j < cols; ++j)
                if (!m[prow][j].is_zero()) m[r][j] = m[r][j] - f * m[prow][j];
        }
        pivot_row_of_col[col] = prow;
        ++prow;
    }
    std::vector<std::vector<Scalar>> out;
    for (long f = 0; f < cols; ++f) {
        if (pivot_row_of_col[f] >= 0) continue;
        std::vector<Scalar> x(cols, Scalar::zero(ring));
        x[f] = Scalar::one(ring);
        for (long c = 0; c < cols; ++c)
            if (pivot_row_of_col[c] >= 0) x[c] = -m[pivot_row_of_col[c]][f];
        out.push_back(std::move(x));
    }
    return out;
}

IntertwinerSpace hom_space(const ModuleInstance& A, const ModuleInstance& B) {
    if (!same_ring(A.ring, B.ring))
        throw std::invalid_argument("hom_space: modules live over different rings");
    std::vector<int> gens;
    for (auto& [g, _] : A.action) gens.push_back(g);
    {
        std::vector<int> gb;
        for (auto& [g, _] : B.action) gb.push_back(g);
        if (gens != gb)
            throw std::invalid_argument("hom_space: generator sets differ");
    }
    const long dA = A.dim(), dB = B.dim();
    IntertwinerSpace out;
    if (dA == 0 || dB == 0) return out;
    const RingHandle& ring = A.ring;
    const long D = dA * dB;
    auto ent = [&](long i, long k) { return i * dA + k; };  // F_{i,k}

    // first pass: generators acting by generalized permutations give pairwise
    // identifications of the entries of F, collapsing the unknowns
    RatioUF uf(D, ring);
    std::vector<int> dense_gens;
    for (int g : gens) {
        const Matrix& MA = A.action.at(g);
        const Matrix& MB = B.action.at(g);
        if (!is_genperm(MA) || !is_genperm(MB)) {
            dense_gens.push_back(g);
            continue;
        }
        // MA column k has its nonzero a_k in row sigma(k);
        // MB row i has its nonzero b_i in column omega(i);
        // F MA = MB F reads a_k F_{i, sigma(k)} = b_i F_{omega(i), k}
        std::vector<long> sigma(dA);
        std::vector<Scalar> acoef(dA, Scalar::zero(ring));
        for (long r = 0; r < dA; ++r)
            for (long c = 0; c < dA; ++c)
                if (!MA[r][c].is_zero()) {
                    sigma[c] = r;
                    acoef[c] = MA[r][c];
                }
        std::vector<long> omega(dB);
        std::vector<Scalar> bcoef(dB, Scalar::zero(ring));
        for (long r = 0; r < dB; ++r)
            for (long c = 0; c < dB; ++c)
                if (!MB[r][c].is_zero()) {
                    omega[r] = c;
                    bcoef[r] = MB[r][c];
                }
        for (long i = 0; i < dB; ++i)
            for (long k = 0; k < dA; ++k)
                uf.unite(ent(i, sigma[k]), ent(omega[i], k),
                         bcoef[i] * acoef[k].inv());
    }

    // parametrize: one basis matrix per surviving class
    std::vector<long> root_slot(D, -1);
    std::vector<Matrix> basis;
    for (long t = 0; t < D; ++t) {
        auto [r, _] = uf.find(t);
        if (uf.zero[r]) continue;
        if (r == t && root_slot[t] < 0) {
            root_slot[t] = (long)basis.size();
            basis.push_back(mat_zero(ring, dB, dA));
        }
    }
    for (long t = 0; t < D; ++t) {
        auto [r, c] = uf.find(t);
        if (uf.zero[r] || root_slot[r] < 0) continue;
        basis[root_slot[r]][t / dA][t % dA] = c;
    }

    // remaining generators: intersect with the kernel of F -> F MA - MB F
    for (int g : dense_gens) {
        if (basis.empty()) break;
        const Matrix& MA = A.action.at(g);
        const Matrix& MB = B.action.at(g);
        const long c = (long)basis.size();
        Matrix constraints(D, std::vector<Scalar>(c, Scalar::zero(ring)));
        for (long j = 0; j < c; ++j) {
            Matrix R = mat_mul(basis[j], MA);
            Matrix L = mat_mul(MB, basis[j]);
            for (long i = 0; i < dB; ++i)
                for (long k = 0; k < dA; ++k)
                    constraints[ent(i, k)][j] = R[i][k] - L[i][k];
        }
        auto null = mat_nullspace(std::move(constraints));
        std::vector<Matrix> next;
        for (auto& comb : null) {
            Matrix F = mat_zero(ring, dB, dA);
            for (long j = 0; j < c; ++j) {
                if (comb[j].is_zero()) continue;
                for (long i = 0; i < dB; ++i)
                    for (long k = 0; k < dA; ++k)
                        if (!basis[j][i][k].is_zero())
                            F[i][k] = F[i][k] + comb[j] * basis[j][i][k];
            }
            next.push_back(std::move(F));
        }
        basis = std::move(next);
    }

    out.basis = std::move(basis);
    out.dim = (long)out.basis.size();
    return out;
}

long end_dim(const ModuleInstance& A) { return hom_space(A, A).dim; }

ModuleInstance direct_sum(const ModuleInstance& A, const ModuleInstance& B) {
    if (!same_ring(A.ring, B.ring) || A.n != B.n || A.affine != B.affine)
        throw std::invalid_argument("direct_sum: incompatible modules");
    ModuleInstance S;
    S.ring = A.ring;
    S.n = A.n;
    S.affine = A.affine;
    S.k = A.k;
    S.basis = A.basis;
    S.basis.insert(S.basis.end(), B.basis.begin(), B.basis.end());
    if (A.twist && B.twist && *A.twist == *B.twist) S.twist = A.twist;
    const long dA = A.dim(), dB = B.dim();
    for (auto& [g, MA] : A.action) {
        const Matrix& MB = B.action.at(g);
        Matrix M = mat_zero(S.ring, dA + dB, dA + dB);
        for (long i = 0; i < dA; ++i)
            for (long j = 0; j < dA; ++j) M[i][j] = MA[i][j];
        for (long i = 0; i < dB; ++i)
            for (long j = 0; j < dB; ++j) M[dA + i][dA + j] = MB[i][j];
        S.action[g] = std::move(M);
    }
    return S;
}

ModuleInstance radical_quotient(const ModuleInstance& W) {
    if (!W.twist)
        throw std::invalid_argument("radical_quotient: needs a cell module");
    const RingHandle& ring = W.ring;
    const long d = W.dim();
    GramData gd = gram_matrix(W);
    auto kernel = mat_nullspace(gd.matrix);
    const long r = d - (long)kernel.size();
    assert(r == gd.rank);

    // reduced row echelon form of the kernel rows: pivot coordinates can be
    // eliminated modulo the radical, the rest survive as quotient coordinates
    Matrix K;
    for (auto& v : kernel) K.push_back(v);
    std::vector<long> pivot_col_of_row;
    {
        long prow = 0;
        for (long col = 0; col < d && prow < (long)K.size(); ++col) {
            long sel = -1;
            for (long rr = prow; rr < (long)K.size(); ++rr)
                if (!K[rr][col].is_zero()) {
                    sel = rr;
                    break;
                }
            if (sel < 0) continue;
            std::swap(K[prow], K[sel]);
            Scalar inv = K[prow][col].inv();
            for (long j = 0; j < d; ++j)
                if (!K[prow][j].is_zero()) K[prow][j] = K[prow][j] * inv;
            for (long rr = 0; rr < (long)K.size(); ++rr) {
                if (rr == prow || K[rr][col].is_zero()) continue;
                Scalar f = K[rr][col];
                for (long j = 0; j < d; ++j)
                    if (!K[prow][j].is_zero()) K[rr][j] = K[rr][j] - f * K[prow][j];
            }
            pivot_col_of_row.push_back(col);
            ++prow;
        }
    }
    std::vector<bool> is_pivot(d, false);
    for (long c : pivot_col_of_row) is_pivot[c] = true;
    std::vector<long> keep;  // surviving coordinates
    for (long c = 0; c < d; ++c)
        if (!is_pivot[c]) keep.push_back(c);
    assert((long)keep.size() == r);
    std::vector<long> slot(d, -1);
    for (long s = 0; s < r; ++s) slot[keep[s]] = s;

    // projection of a coordinate vector to quotient coordinates
    auto project = [&](const std::vector<Scalar>& x) {
        std::vector<Scalar> y(r, Scalar::zero(ring));
        for (long c = 0; c < d; ++c) {
            if (x[c].is_zero()) continue;
            if (slot[c] >= 0) {
                y[slot[c]] = y[slot[c]] + x[c];
            } else {
                // pivot coordinate: e_c = -sum of its kernel-row tail
                long rr = -1;
                for (size_t t = 0; t < pivot_col_of_row.size(); ++t)
                    if (pivot_col_of_row[t] == c) rr = (long)t;
                for (long j = 0; j < d; ++j) {
                    if (j == c || K[rr][j].is_zero() || slot[j] < 0) continue;
                    y[slot[j]] = y[slot[j]] - x[c] * K[rr][j];
                }
            }
        }
        return y;
    };

    ModuleInstance Q;
    Q.ring = ring;
    Q.n = W.n;
    Q.affine = W.affine;
    Q.k = W.k;
    Q.twist = W.twist;
    for (long s = 0; s < r; ++s) Q.basis.push_back(W.basis[keep[s]]);
    for (auto& [g, M] : W.action) {
        Matrix Mq = mat_zero(ring, r, r);
        for (long s = 0; s < r; ++s) {
            std::vector<Scalar> col(d, Scalar::zero(ring));
            for (long i = 0; i < d; ++i) col[i] = M[i][keep[s]];
            auto y = project(col);
            for (long i = 0; i < r; ++i) Mq[i][s] = y[i];
        }
        Q.action[g] = std::move(Mq);
    }
    return Q;
}

ModuleInstance build_L_concrete(const ModuleLabel& lab, const RingHandle& ring) {
    if (lab.family != Family::L || !lab.z || lab.z->generic)
        throw std::invalid_argument("build_L_concrete: needs an L label with an exact twist");
    Scalar z = zspec_eval(*lab.z, ring);
    return radical_quotient(build_W_cell(lab.n, lab.k, z, ring));
}

FactorMultiset factor_multiset(const ModuleInstance& M,
                               const std::vector<ModuleLabel>& candidates,
                               const CriticalStructure& cs) {
    FactorMultiset out;
    if (M.dim() == 0) {
        out.certain = true;
        return out;
    }
    // deduplicate candidate labels up to twist equality
    std::vector<ModuleLabel> cand;
    for (auto& c : candidates) {
        bool dup = false;
        for (auto& d : cand)
            if (d.family == c.family && d.n == c.n && d.k == c.k &&
                ((!d.z && !c.z) || (d.z && c.z && zspec_eq(*d.z, *c.z, cs.ell))))
                dup = true;
        if (!dup) cand.push_back(c);
    }
    long covered = 0;
    bool two_sided = true;
    for (auto& c : cand) {
        ModuleInstance L = build_L_concrete(c, M.ring);
        long to = hom_space(M, L).dim;
        long from = hom_space(L, M).dim;
        long mult = std::max(to, from);
        if (to != from) two_sided = false;
        if (mult > 0) {
            out.factors.push_back({c, mult});
            covered += mult * L.dim();
        }
    }
    out.certain = two_sided && covered == M.dim();
    return out;
}

}  // namespace atl
