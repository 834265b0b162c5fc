#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atl/homsolver.hpp"

using namespace atl;

namespace {

// check that every basis matrix genuinely intertwines the two actions
bool all_intertwine(const IntertwinerSpace& H, const ModuleInstance& A,
                    const ModuleInstance& B) {
    for (const Matrix& F : H.basis)
        for (auto& [g, MA] : A.action)
            if (!mat_eq(mat_mul(F, MA), mat_mul(B.action.at(g), F))) return false;
    return true;
}

Matrix from_rows(const RingHandle& ring, const std::vector<std::vector<long>>& rows) {
    Matrix m;
    for (auto& r : rows) {
        m.emplace_back();
        for (long x : r) m.back().push_back(Scalar::from_int(ring, x));
    }
    return m;
}

}  // namespace

TEST_CASE("null space computation") {
    auto ring = ring_generic();
    Matrix m = from_rows(ring, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
    auto ns = mat_nullspace(m);
    REQUIRE(ns.size() == 1);
    for (auto& row : m) {
        Scalar acc = Scalar::zero(ring);
        for (size_t j = 0; j < row.size(); ++j) acc = acc + row[j] * ns[0][j];
        CHECK(acc.is_zero());
    }
    CHECK(mat_nullspace(from_rows(ring, {{1, 0}, {0, 1}})).empty());
    CHECK(mat_nullspace(from_rows(ring, {{0, 0}, {0, 0}})).size() == 2);
}

TEST_CASE("hom spaces between cell modules") {
    auto ring = ring_generic();

    // a maximal twist gives an irreducible cell module: End = C
    auto Wmax = build_W_cell(4, 2, Scalar::v_pow(ring, 1), ring);
    auto E = hom_space(Wmax, Wmax);
    CHECK(E.dim == 1);
    CHECK(all_intertwine(E, Wmax, Wmax));

    // non-split extension: one map in, none out
    auto W24 = build_W_cell(4, 2, Scalar::v_pow(ring, 4), ring);
    auto W42 = build_W_cell(4, 4, Scalar::v_pow(ring, 2), ring);
    auto in = hom_space(W42, W24);
    CHECK(in.dim == 1);
    CHECK(all_intertwine(in, W42, W24));
    CHECK(hom_space(W24, W42).dim == 0);
    CHECK(hom_space(W24, W24).dim == 1);

    // unrelated twists see nothing
    auto Wother = build_W_cell(4, 4, Scalar::v_pow(ring, 3), ring);
    CHECK(hom_space(Wother, W24).dim == 0);

    // the succession order at a root of unity governs the Hom pattern
    auto c3 = ring_cyclotomic(3);
    auto W0 = build_W_cell(4, 0, Scalar::v_pow(c3, 2), c3);
    auto W2 = build_W_cell(4, 2, Scalar::v_pow(c3, 0), c3);
    auto W4 = build_W_cell(4, 4, Scalar::v_pow(c3, 6), c3);
    CHECK(hom_space(W2, W0).dim == 1);
    CHECK(hom_space(W4, W0).dim == 1);
    CHECK(hom_space(W0, W2).dim == 0);
    CHECK(hom_space(W4, W2).dim == 0);  // (2,v^0) does not precede (4,v^6)
    // the two twist representatives of a defect-free module are isomorphic
    auto W0inv = build_W_cell(4, 0, Scalar::v_pow(c3, 10), c3);
    CHECK(hom_space(W0inv, W0).dim == 1);
}

TEST_CASE("hom spaces against direct sums") {
    auto ring = ring_generic();
    auto S42 = build_S(4, 2, ring);
    auto S40 = build_S(4, 0, ring);
    auto A = direct_sum(S42, S40);
    CHECK(module_relation_failures(A).empty());
    CHECK(end_dim(S42) == 1);
    CHECK(end_dim(A) == 2);
    CHECK(hom_space(A, S42).dim == 1);
    CHECK(hom_space(S40, A).dim == 1);
    CHECK(end_dim(direct_sum(S42, S42)) == 4);
}

TEST_CASE("formal-twist cell modules are pairwise orthogonal") {
    auto ring = ring_generic_x(XRole::ZParam);
    Scalar x = Scalar::x_pow(ring, 1);
    for (int n = 4; n <= 5; ++n) {
        std::vector<ModuleInstance> cells;
        for (int k = n % 2; k <= n; k += 2)
            cells.push_back(build_W_cell(n, k, x, ring));
        for (size_t a = 0; a < cells.size(); ++a)
            for (size_t b = 0; b < cells.size(); ++b) {
                INFO("n=", n, " a=", a, " b=", b);
                CHECK(hom_space(cells[a], cells[b]).dim == (a == b ? 1 : 0));
            }
    }
}

TEST_CASE("radical quotients") {
    auto ring = ring_generic();
    auto W = build_W_cell(4, 2, Scalar::v_pow(ring, 4), ring);
    auto Q = radical_quotient(W);
    CHECK(Q.dim() == 3);
    CHECK(module_relation_failures(Q).empty());
    CHECK(end_dim(Q) == 1);

    // full-rank Gram form: the quotient is the module itself
    auto Wmax = build_W_cell(4, 2, Scalar::v_pow(ring, 1), ring);
    CHECK(radical_quotient(Wmax).dim() == 4);

    auto cs0 = critical_structure(0, 4);
    ModuleLabel lab{Family::L, 4, 2, ZSpec::zk(4)};
    auto L = build_L_concrete(lab, ring);
    CHECK(L.dim() == dims(lab, cs0).value);
    CHECK(end_dim(L) == 1);

    // at a root of unity the quotient dimension follows the ladder value
    auto c3 = ring_cyclotomic(3);
    ModuleLabel lr{Family::L, 6, 0, ZSpec::zk(2)};
    auto Lr = build_L_concrete(lr, c3);
    CHECK(Lr.dim() == dimL_telescope(0, ZSpec::zk(2), 3, 6));
    CHECK(module_relation_failures(Lr).empty());
    CHECK(end_dim(Lr) == 1);
}

TEST_CASE("factor multisets") {
    auto ring = ring_generic();
    auto cs0 = critical_structure(0, 4);

    // irreducible cell module: a single factor, certified
    auto Wmax = build_W_cell(4, 2, Scalar::v_pow(ring, 1), ring);
    auto cand1 = composition_factors({Family::Wcell, 4, 2, ZSpec::vpow(1)}, cs0);
    auto fm1 = factor_multiset(Wmax, cand1, cs0);
    REQUIRE(fm1.factors.size() == 1);
    CHECK(fm1.factors[0].second == 1);
    CHECK(fm1.certain);

    // non-split cell module: both factors found, certainty withheld
    auto W24 = build_W_cell(4, 2, Scalar::v_pow(ring, 4), ring);
    auto cand2 = composition_factors({Family::Wcell, 4, 2, ZSpec::zk(4)}, cs0);
    auto fm2 = factor_multiset(W24, cand2, cs0);
    REQUIRE(fm2.factors.size() == 2);
    CHECK(fm2.factors[0].second == 1);
    CHECK(fm2.factors[1].second == 1);
    CHECK_FALSE(fm2.certain);

    // genuine direct sum of the same factors: certified
    ModuleLabel l1{Family::L, 4, 2, ZSpec::zk(4)};
    ModuleLabel l2{Family::L, 4, 4, ZSpec::zk(2)};
    auto D = direct_sum(build_L_concrete(l1, ring), build_L_concrete(l2, ring));
    auto fm3 = factor_multiset(D, {l1, l2}, cs0);
    CHECK(fm3.certain);
    REQUIRE(fm3.factors.size() == 2);
    CHECK(fm3.factors[0].second == 1);
    CHECK(fm3.factors[1].second == 1);

    // empty module: empty, certified
    ModuleInstance Z;
    Z.ring = ring;
    CHECK(factor_multiset(Z, {}, cs0).certain);
    CHECK(factor_multiset(Z, {}, cs0).factors.empty());
}
