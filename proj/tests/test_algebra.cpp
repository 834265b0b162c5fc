#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "atl/algebra.hpp"

using namespace atl;

namespace {

std::mt19937 rng(60311);

GeneratorWord random_affine_word(int n, int len) {
    GeneratorWord w;
    w.n = n;
    std::uniform_int_distribution<int> pick(0, n + 1);
    for (int s = 0; s < len; ++s) {
        int c = pick(rng);
        if (c == n)
            w.letters.push_back({GenLetter::Tau, 0});
        else if (c == n + 1)
            w.letters.push_back({GenLetter::TauInv, 0});
        else if (n >= 2)
            w.letters.push_back({GenLetter::E, c});
        else
            w.letters.push_back({GenLetter::Tau, 0});
    }
    return w;
}

GeneratorWord concat(const GeneratorWord& a, const GeneratorWord& b) {
    GeneratorWord w = a;
    w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
    return w;
}

AffDiagram random_rank0(int src, int tgt) {
    // random rank-zero diagram built from a regular word capped appropriately
    // here: simply pick from a small catalogue per (src, tgt)
    std::vector<AffDiagram> cat;
    if (src == tgt) {
        cat.push_back(AffDiagram::identity(src));
        for (int i = 1; i < src; ++i) cat.push_back(AffDiagram::e_gen(src, i));
    }
    if (src == 2 && tgt == 0) cat.push_back(AffDiagram::make(0, 2, {Arc{{1, 1}, {1, 2}, 0}}));
    if (src == 0 && tgt == 2) cat.push_back(AffDiagram::make(2, 0, {Arc{{0, 1}, {0, 2}, 0}}));
    if (src == 3 && tgt == 1)
        cat.push_back(AffDiagram::make(1, 3, {Arc{{0, 1}, {1, 1}, 0}, Arc{{1, 2}, {1, 3}, 0}}));
    if (src == 1 && tgt == 3)
        cat.push_back(AffDiagram::make(3, 1, {Arc{{0, 1}, {1, 1}, 0}, Arc{{0, 2}, {0, 3}, 0}}));
    REQUIRE(!cat.empty());
    std::uniform_int_distribution<size_t> pick(0, cat.size() - 1);
    return cat[pick(rng)];
}

}  // namespace

TEST_CASE("element arithmetic") {
    auto ring = ring_generic();
    AlgebraElement e1 = elem_from_diagram(ring, AffDiagram::e_gen(3, 1));
    AlgebraElement e2 = elem_from_diagram(ring, AffDiagram::e_gen(3, 2));
    // (e_1 + e_2) e_1 = beta e_1 + e_2 e_1
    AlgebraElement lhs = elem_compose(elem_add(e1, e2), e1);
    AlgebraElement rhs = elem_add(elem_scale(ring_beta(ring), e1), elem_compose(e2, e1));
    CHECK(lhs == rhs);
    CHECK(elem_compose(elem_zero(ring, 3, 3), e1).is_zero());
    CHECK(elem_sub(lhs, lhs).is_zero());
    // T_i squared by brute force: (v 1 + v^-1 e)^2 = v^2 + (2 + v^-2 beta) e
    const AlgebraElement& t = braid_T(ring, 3, 1);
    AlgebraElement sq = elem_compose(t, t);
    Scalar c_e = Scalar::from_int(ring, 2) + Scalar::v_pow(ring, -2) * ring_beta(ring);
    AlgebraElement expect = elem_add(
        elem_scale(Scalar::v_pow(ring, 2), elem_identity(ring, 3)), elem_scale(c_e, e1));
    CHECK(sq == expect);
}

TEST_CASE("word evaluation") {
    auto ring = ring_generic();
    for (int n = 3; n <= 5; ++n) {
        GeneratorWord w1{n, false, {{GenLetter::Tau, 0}, {GenLetter::E, 0}, {GenLetter::TauInv, 0}}};
        CHECK(word_eval(w1, ring) ==
              elem_from_diagram(ring, AffDiagram::e_gen(n, 1)));
        GeneratorWord w2{n, false, {{GenLetter::E, 1}, {GenLetter::Tau, 0}, {GenLetter::Tau, 0}}};
        AlgebraElement rhs = elem_from_diagram(ring, AffDiagram::e_gen(n, 1));
        for (int i = 2; i <= n - 1; ++i)
            rhs = elem_compose(rhs, elem_from_diagram(ring, AffDiagram::e_gen(n, i)));
        CHECK(word_eval(w2, ring) == rhs);
        CHECK(word_eval(GeneratorWord{n, false, {}}, ring) == elem_identity(ring, n));
    }
    GeneratorWord p = GeneratorWord::parse(4, "e0 e1 t t- u2");
    CHECK(p.letters.size() == 5);
    CHECK(p.str() == "e0 e1 t t- u2");
    CHECK_FALSE(p.regular);
    CHECK(GeneratorWord::parse(4, "u1 u3").regular);
}

TEST_CASE("relation suites pass on every ring") {
    std::vector<RingHandle> rings = {ring_generic(), ring_cyclotomic(2),
                                     ring_cyclotomic(3), ring_cyclotomic(5)};
    for (auto& ring : rings) {
        for (int n = 1; n <= 5; ++n) {
            for (auto which : {RelationSet::Affine, RelationSet::Regular,
                               RelationSet::PhiImage}) {
                auto r = relation_suite(n, ring, which);
                for (auto& [name, ok] : r.checks) {
                    INFO("n = " << n << ": " << name);
                    CHECK(ok);
                }
            }
        }
        for (int n = 1; n <= 4; ++n) {
            auto r = relation_suite(n, ring, RelationSet::AppendixA);
            for (auto& [name, ok] : r.checks) {
                INFO("n = " << n << ": " << name);
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("phi is multiplicative") {
    auto ring = ring_generic();
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            GeneratorWord a = random_affine_word(n, 3), b = random_affine_word(n, 3);
            CHECK(phi_apply(concat(a, b), ring) ==
                  elem_compose(phi_apply(a, ring), phi_apply(b, ring)));
        }
    }
}

TEST_CASE("phi composed with the inclusion is the identity on the regular algebra") {
    auto ring = ring_generic();
    for (int n = 2; n <= 5; ++n) {
        for (int i = 1; i <= n - 1; ++i) {
            // a regular word, viewed inside the affine algebra, maps back to itself
            GeneratorWord reg{n, true, {{GenLetter::U, i}}};
            GeneratorWord aff{n, false, {{GenLetter::E, i}}};
            CHECK(phi_apply(aff, ring) == word_eval(reg, ring));
        }
        // hence phi . iota . phi = phi on random affine words
        GeneratorWord w = random_affine_word(n, 4);
        AlgebraElement pw = phi_apply(w, ring);
        // iota is the identity on diagrams; applying phi again letter by letter
        // needs pw written as a combination of regular diagrams, on which phi
        // acts as the identity; so the identity reduces to rank-zero-ness
        for (auto& [d, c] : pw.terms) CHECK(d.is_regular());
    }
}

TEST_CASE("n=2 special images") {
    auto ring = ring_generic();
    AlgebraElement pt = phi_letter(ring, 2, {GenLetter::Tau, 0});
    AlgebraElement pe = phi_letter(ring, 2, {GenLetter::E, 1});
    AlgebraElement u1 = elem_from_diagram(ring, AffDiagram::e_gen(2, 1));
    CHECK(pe == u1);
    CHECK(elem_compose(pt, pe) == elem_scale(-Scalar::one(ring), u1));
    // n=1: phi(tau) is the scalar (-q)^{3/2}
    CHECK(phi_letter(ring, 1, {GenLetter::Tau, 0}) ==
          elem_scale(Scalar::v_pow(ring, 3), elem_identity(ring, 1)));
}

TEST_CASE("eta matches its defining expansions") {
    auto ring = ring_generic();
    for (int n = 3; n <= 5; ++n) {
        // eta_{n-1,1} = T_1 T_2 ... T_{n-1}
        AlgebraElement prod = elem_identity(ring, n);
        for (int i = 1; i <= n - 1; ++i) prod = elem_compose(prod, braid_T(ring, n, i));
        CHECK(eta(ring, n - 1, 1) == prod);
        // eta_{1,n-1} = T_{n-1} ... T_1
        AlgebraElement prod2 = elem_identity(ring, n);
        for (int i = n - 1; i >= 1; --i) prod2 = elem_compose(prod2, braid_T(ring, n, i));
        CHECK(eta(ring, 1, n - 1) == prod2);
        // both orders of eq. commutor agree: eta_{r,s} via the second product
        for (int rr = 1; rr <= n - 1; ++rr) {
            int s = n - rr;
            AlgebraElement alt = elem_identity(ring, n);
            for (int i = 1; i <= rr; ++i) {
                AlgebraElement inner = elem_identity(ring, n);
                for (int j = 0; j <= s - 1; ++j)
                    inner = elem_compose(braid_T(ring, n, i + j), inner);
                // factors listed starting from the right in each product
                alt = elem_compose(alt, inner);
            }
            CHECK(eta(ring, rr, s) == alt);
            CHECK(elem_compose(eta(ring, rr, s), eta_inv(ring, rr, s)) ==
                  elem_identity(ring, n));
        }
    }
}

TEST_CASE("eta naturality") {
    auto ring = ring_generic();
    CHECK(eta_naturality_check(AffDiagram::identity(2), AffDiagram::identity(1), ring));
    CHECK(eta_naturality_check(AffDiagram::e_gen(2, 1), AffDiagram::identity(1), ring));
    for (int trial = 0; trial < 12; ++trial) {
        std::uniform_int_distribution<int> pick(0, 2);
        int kind_f = pick(rng), kind_g = pick(rng);
        auto make = [&](int kind) {
            if (kind == 0) return random_rank0(2, 2);
            if (kind == 1) return random_rank0(2, 0);
            return random_rank0(1, 3);
        };
        CHECK(eta_naturality_check(make(kind_f), make(kind_g), ring));
    }
}

TEST_CASE("transpose interacts correctly with the element operations") {
    auto ring = ring_generic();
    GeneratorWord a = random_affine_word(3, 4), b = random_affine_word(3, 4);
    AlgebraElement A = word_eval(a, ring), B = word_eval(b, ring);
    CHECK(elem_transpose(elem_compose(A, B)) ==
          elem_compose(elem_transpose(B), elem_transpose(A)));
    CHECK(elem_transpose(elem_transpose(A)) == A);
}
