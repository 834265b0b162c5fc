#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "atl/diagram.hpp"

using namespace atl;

namespace {

std::mt19937 rng(7121);

AffDiagram mul(const AffDiagram& a, const AffDiagram& b) { return compose(a, b).d; }

// random word in the End(n) generators
AffDiagram random_word(int n, int len, long* beta_out = nullptr) {
    AffDiagram d = AffDiagram::identity(n);
    long beta = 0;
    std::uniform_int_distribution<int> pick(0, n + 1);
    for (int s = 0; s < len; ++s) {
        int c = pick(rng);
        AffDiagram g = c == n     ? AffDiagram::tau(n)
                       : c == n + 1 ? AffDiagram::tau_inv(n)
                       : n >= 2     ? AffDiagram::e_gen(n, c)
                                    : AffDiagram::tau(n);
        auto r = compose(d, g);
        d = r.d;
        beta += r.beta_loops;
    }
    if (beta_out) *beta_out = beta;
    return d;
}

}  // namespace

TEST_CASE("identity is neutral") {
    for (int n = 1; n <= 5; ++n) {
        AffDiagram id = AffDiagram::identity(n);
        CHECK(mul(id, id) == id);
        AffDiagram w = random_word(n, 6);
        CHECK(mul(id, w) == w);
        CHECK(mul(w, id) == w);
    }
}

TEST_CASE("temperley-lieb relations among the e generators") {
    for (int n = 3; n <= 6; ++n) {
        for (int i = 0; i < n; ++i) {
            AffDiagram e = AffDiagram::e_gen(n, i);
            auto sq = compose(e, e);
            CHECK(sq.d == e);
            CHECK(sq.beta_loops == 1);
            AffDiagram enb = AffDiagram::e_gen(n, (i + 1) % n);
            auto r = compose(compose(e, enb).d, e);
            CHECK(r.d == e);
            CHECK(r.beta_loops + compose(e, enb).beta_loops == 0);
            for (int j = 0; j < n; ++j) {
                int dist = std::min((i - j + n) % n, (j - i + n) % n);
                if (dist < 2) continue;
                AffDiagram f = AffDiagram::e_gen(n, j);
                CHECK(mul(e, f) == mul(f, e));
            }
        }
    }
}

TEST_CASE("rotation relations") {
    for (int n = 1; n <= 6; ++n) {
        AffDiagram t = AffDiagram::tau(n), ti = AffDiagram::tau_inv(n);
        CHECK(mul(t, ti) == AffDiagram::identity(n));
        CHECK(mul(ti, t) == AffDiagram::identity(n));
        CHECK(t.transpose() == ti);
        if (n >= 2) {
            for (int i = 0; i < n; ++i) {
                AffDiagram lhs = mul(mul(t, AffDiagram::e_gen(n, i)), ti);
                CHECK(lhs == AffDiagram::e_gen(n, (i + 1) % n));
            }
        }
    }
}

TEST_CASE("braid-translation style word identities") {
    // e_1 tau^2 = e_1 e_2 ... e_{n-1} for n > 2; at n = 2, e_1 tau^2 = e_1
    for (int n = 2; n <= 6; ++n) {
        AffDiagram t = AffDiagram::tau(n);
        AffDiagram lhs = mul(mul(AffDiagram::e_gen(n, 1), t), t);
        AffDiagram rhs = AffDiagram::e_gen(n, 1);
        for (int i = 2; i <= n - 1; ++i) rhs = mul(rhs, AffDiagram::e_gen(n, i));
        CHECK(lhs == rhs);
    }
    // e_i = tau^i e_0 tau^-i
    for (int n = 2; n <= 5; ++n) {
        AffDiagram cur = AffDiagram::e_gen(n, 0);
        for (int i = 1; i < n; ++i) {
            cur = mul(mul(AffDiagram::tau(n), cur), AffDiagram::tau_inv(n));
            CHECK(cur == AffDiagram::e_gen(n, i));
        }
    }
}

TEST_CASE("ranks of the standard elements") {
    for (int n = 2; n <= 6; ++n) {
        CHECK(AffDiagram::identity(n).rank() == 0);
        for (int i = 1; i < n; ++i) CHECK(AffDiagram::e_gen(n, i).rank() == 0);
        CHECK(AffDiagram::e_gen(n, 0).rank() == 2);
        AffDiagram p = AffDiagram::identity(n);
        for (int w = 1; w <= 4; ++w) {
            p = mul(p, AffDiagram::tau(n));
            CHECK(p.rank() == w);
        }
    }
}

TEST_CASE("winding caps produce non-contractible loops") {
    // e_0 e_1 in End(2): both boundary arcs capped, one essential loop remains
    AffDiagram d = mul(AffDiagram::e_gen(2, 0), AffDiagram::e_gen(2, 1));
    CHECK(d.nc_loops() == 1);
    CHECK(d.through_count() == 0);
    // capping the wound arc with e_1 closes off a second essential loop
    auto r = compose(AffDiagram::e_gen(2, 1), d);
    CHECK(r.d.nc_loops() == 2);
    CHECK(r.beta_loops == 0);
    CHECK(r.d.arcs() == AffDiagram::e_gen(2, 1).arcs());
}

TEST_CASE("transpose is an anti-automorphism") {
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            AffDiagram a = random_word(n, 5), b = random_word(n, 5);
            CHECK(mul(a, b).transpose() == mul(b.transpose(), a.transpose()));
            CHECK(a.transpose().transpose() == a);
            CHECK(a.transpose().rank() == a.rank());
        }
        for (int i = 0; i < n; ++i)
            CHECK(AffDiagram::e_gen(n, i).transpose() == AffDiagram::e_gen(n, i));
    }
}

TEST_CASE("composition is associative and parity is conserved") {
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            AffDiagram a = random_word(n, 4), b = random_word(n, 4), c = random_word(n, 4);
            auto ab = compose(a, b);
            auto bc = compose(b, c);
            auto l = compose(ab.d, c);
            auto r = compose(a, bc.d);
            CHECK(l.d == r.d);
            CHECK(ab.beta_loops + l.beta_loops == bc.beta_loops + r.beta_loops);
            // seam crossings (arcs plus essential loops) keep their parity
            long lhs = ab.d.rank() + ab.d.nc_loops();
            CHECK((lhs - a.rank() - a.nc_loops() - b.rank() - b.nc_loops()) % 2 == 0);
        }
    }
}

TEST_CASE("tensor stacking") {
    CHECK(tensor_stack(AffDiagram::identity(2), AffDiagram::identity(3)) ==
          AffDiagram::identity(5));
    // the left factor keeps its labels, the right factor is stacked above
    CHECK(tensor_stack(AffDiagram::e_gen(3, 1), AffDiagram::identity(2)) ==
          AffDiagram::e_gen(5, 1));
    CHECK(tensor_stack(AffDiagram::identity(2), AffDiagram::e_gen(3, 1)) ==
          AffDiagram::e_gen(5, 3));
    // compatible with composition in each slot (for winding-free diagrams;
    // a wound factor cannot be stacked next to through lines at all)
    std::uniform_int_distribution<int> pick(1, 2);
    auto random_regular = [&](int n, int len) {
        AffDiagram d = AffDiagram::identity(n);
        for (int s = 0; s < len; ++s) d = mul(d, AffDiagram::e_gen(n, pick(rng) % (n - 1) + 1));
        return d;
    };
    for (int trial = 0; trial < 8; ++trial) {
        AffDiagram a = random_regular(3, 4), b = random_regular(3, 4);
        AffDiagram c = AffDiagram::identity(3);
        CHECK(mul(tensor_stack(a, c), tensor_stack(b, c)) == tensor_stack(mul(a, b), c));
    }
}

TEST_CASE("validation rejects broken data") {
    CHECK_THROWS(AffDiagram::make(1, 1, {Arc{{0, 1}, {0, 1}, 0}}));
    CHECK_THROWS(AffDiagram::make(2, 2, {Arc{{0, 1}, {1, 1}, 0}, Arc{{0, 2}, {1, 1}, 0}}));
    // crossing through lines
    CHECK_THROWS(AffDiagram::make(2, 2, {Arc{{0, 1}, {1, 2}, 0}, Arc{{0, 2}, {1, 1}, 0}}));
    // a doubly winding arc cannot be embedded
    CHECK_THROWS(AffDiagram::make(0, 2, {Arc{{1, 1}, {1, 2}, 2}}));
    // loops cannot coexist with through lines
    CHECK_THROWS(AffDiagram::make(1, 1, {Arc{{0, 1}, {1, 1}, 0}}, 1));
    // but the identity-with-nothing and capped diagrams are fine
    CHECK(AffDiagram::make(0, 2, {Arc{{1, 1}, {1, 2}, 0}}, 3).nc_loops() == 3);
}

TEST_CASE("string round trip") {
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            AffDiagram d = random_word(n, 5);
            CHECK(AffDiagram::parse(d.str()) == d);
        }
    }
    CHECK(AffDiagram::identity(2).str() == "2;2;L1-R1:0,L2-R2:0;loops=0");
}
