#include "atl/algebra.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace atl {

namespace {

void add_term(AlgebraElement& e, const AffDiagram& d, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = e.terms.find(d);
    if (it == e.terms.end()) {
        e.terms.emplace(d, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) e.terms.erase(it);
    }
}

void check_compat(const AlgebraElement& a, const AlgebraElement& b, bool composing) {
    bool ok = composing ? a.n == b.m : (a.m == b.m && a.n == b.n);
    if (!ok) throw std::invalid_argument("element size mismatch");
}

}  // namespace

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    return m == o.m && n == o.n && terms == o.terms;
}

std::string AlgebraElement::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [d, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ") " << d.str();
    }
    return os.str();
}

AlgebraElement elem_zero(const RingHandle& ring, int m, int n) {
    AlgebraElement e;
    e.ring = ring;
    e.m = m;
    e.n = n;
    return e;
}

AlgebraElement elem_from_diagram(const RingHandle& ring, const AffDiagram& d) {
    return elem_from_diagram(ring, d, Scalar::one(ring));
}

AlgebraElement elem_from_diagram(const RingHandle& ring, const AffDiagram& d,
                                 const Scalar& coef) {
    AlgebraElement e = elem_zero(ring, d.m(), d.n());
    add_term(e, d, coef);
    return e;
}

AlgebraElement elem_identity(const RingHandle& ring, int n) {
    return elem_from_diagram(ring, AffDiagram::identity(n));
}

AlgebraElement elem_add(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b, false);
    AlgebraElement r = a;
    for (auto& [d, c] : b.terms) add_term(r, d, c);
    return r;
}

AlgebraElement elem_sub(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b, false);
    AlgebraElement r = a;
    for (auto& [d, c] : b.terms) add_term(r, d, -c);
    return r;
}

AlgebraElement elem_scale(const Scalar& c, const AlgebraElement& a) {
    AlgebraElement r = elem_zero(a.ring, a.m, a.n);
    for (auto& [d, x] : a.terms) add_term(r, d, c * x);
    return r;
}

AlgebraElement elem_compose(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b, true);
    AlgebraElement r = elem_zero(a.ring, a.m, b.n);
    Scalar beta = ring_beta(a.ring);
    for (auto& [da, ca] : a.terms) {
        for (auto& [db, cb] : b.terms) {
            ComposeResult cr = compose(da, db);
            Scalar c = ca * cb;
            for (long l = 0; l < cr.beta_loops; ++l) c *= beta;
            add_term(r, cr.d, c);
        }
    }
    return r;
}

AlgebraElement elem_tensor(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r = elem_zero(a.ring, a.m + b.m, a.n + b.n);
    for (auto& [da, ca] : a.terms)
        for (auto& [db, cb] : b.terms) add_term(r, tensor_stack(da, db), ca * cb);
    return r;
}

AlgebraElement elem_transpose(const AlgebraElement& a) {
    AlgebraElement r = elem_zero(a.ring, a.n, a.m);
    for (auto& [d, c] : a.terms) add_term(r, d.transpose(), c);
    return r;
}

// ------------------------------------------------------------------- words

GeneratorWord GeneratorWord::parse(int n, const std::string& text) {
    GeneratorWord w;
    w.n = n;
    w.regular = true;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        GenLetter l;
        if (tok == "t") {
            l = {GenLetter::Tau, 0};
            w.regular = false;
        } else if (tok == "t-") {
            l = {GenLetter::TauInv, 0};
            w.regular = false;
        } else if (tok.size() > 1 && tok[0] == 'e') {
            l = {GenLetter::E, std::stoi(tok.substr(1))};
            w.regular = false;
        } else if (tok.size() > 1 && tok[0] == 'u') {
            l = {GenLetter::U, std::stoi(tok.substr(1))};
        } else {
            throw std::invalid_argument("bad word token: " + tok);
        }
        w.letters.push_back(l);
    }
    return w;
}

std::string GeneratorWord::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& l : letters) {
        if (!first) os << " ";
        first = false;
        switch (l.kind) {
            case GenLetter::E: os << "e" << l.idx; break;
            case GenLetter::Tau: os << "t"; break;
            case GenLetter::TauInv: os << "t-"; break;
            case GenLetter::U: os << "u" << l.idx; break;
        }
    }
    return os.str();
}

namespace {

AffDiagram letter_diagram(int n, const GenLetter& l) {
    switch (l.kind) {
        case GenLetter::Tau: return AffDiagram::tau(n);
        case GenLetter::TauInv: return AffDiagram::tau_inv(n);
        case GenLetter::E: {
            if (n < 2) throw std::invalid_argument("e generator needs n >= 2");
            int i = ((l.idx % n) + n) % n;
            return AffDiagram::e_gen(n, i);
        }
        case GenLetter::U:
            if (l.idx < 1 || l.idx > n - 1)
                throw std::invalid_argument("regular generator out of range");
            return AffDiagram::e_gen(n, l.idx);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

AlgebraElement word_eval(const GeneratorWord& w, const RingHandle& ring) {
    AlgebraElement acc = elem_identity(ring, w.n);
    for (auto& l : w.letters)
        acc = elem_compose(acc, elem_from_diagram(ring, letter_diagram(w.n, l)));
    return acc;
}

// ---------------------------------------------------------------- braiding

namespace {

using RingKey = std::tuple<int, int, unsigned, long>;

RingKey ring_key(const RingHandle& r) {
    return {int(r->kind), int(r->x_role), r->N, r->v_exp};
}

std::mutex g_braid_mutex;
std::map<std::tuple<RingKey, int, int>, AlgebraElement> g_T_cache;
std::map<std::tuple<RingKey, int, int>, AlgebraElement> g_eta_cache;

AlgebraElement make_T(const RingHandle& ring, int n, int i, bool inverse) {
    AlgebraElement e = elem_scale(Scalar::v_pow(ring, inverse ? -1 : 1),
                                  elem_identity(ring, n));
    return elem_add(e, elem_from_diagram(ring, AffDiagram::e_gen(n, i),
                                         Scalar::v_pow(ring, inverse ? 1 : -1)));
}

}  // namespace

const AlgebraElement& braid_T(const RingHandle& ring, int n, int i) {
    std::lock_guard<std::mutex> lock(g_braid_mutex);
    auto key = std::tuple{ring_key(ring), n, i};
    auto it = g_T_cache.find(key);
    if (it == g_T_cache.end())
        it = g_T_cache.emplace(key, make_T(ring, n, i, false)).first;
    return it->second;
}

AlgebraElement braid_T_inv(const RingHandle& ring, int n, int i) {
    return make_T(ring, n, i, true);
}

const AlgebraElement& eta(const RingHandle& ring, int r, int s) {
    int n = r + s;
    std::lock_guard<std::mutex> lock(g_braid_mutex);
    auto key = std::tuple{ring_key(ring), r, s};
    auto it = g_eta_cache.find(key);
    if (it != g_eta_cache.end()) return it->second;
    // product over i = s..1 of (T_i T_{i+1} ... T_{i+r-1})
    AlgebraElement acc = elem_identity(ring, n);
    for (int i = 1; i <= s; ++i) {
        AlgebraElement inner = elem_identity(ring, n);
        for (int j = i + r - 1; j >= i; --j)
            inner = elem_compose(make_T(ring, n, j, false), inner);
        acc = elem_compose(inner, acc);
    }
    return g_eta_cache.emplace(key, std::move(acc)).first->second;
}

AlgebraElement eta_inv(const RingHandle& ring, int r, int s) {
    int n = r + s;
    AlgebraElement acc = elem_identity(ring, n);
    for (int i = s; i >= 1; --i) {
        AlgebraElement inner = elem_identity(ring, n);
        for (int j = i; j <= i + r - 1; ++j)
            inner = elem_compose(make_T(ring, n, j, true), inner);
        acc = elem_compose(inner, acc);
    }
    return acc;
}

// --------------------------------------------------------------------- phi

AlgebraElement phi_letter(const RingHandle& ring, int n, const GenLetter& l) {
    if (l.kind == GenLetter::U) return elem_from_diagram(ring, letter_diagram(n, l));
    if (n == 1) {
        if (l.kind == GenLetter::Tau) return elem_scale(Scalar::v_pow(ring, 3),
                                                        elem_identity(ring, 1));
        if (l.kind == GenLetter::TauInv)
            return elem_scale(Scalar::v_pow(ring, -3), elem_identity(ring, 1));
        throw std::invalid_argument("no e generators at n = 1");
    }
    if (n == 2) {
        AlgebraElement u1 = elem_from_diagram(ring, AffDiagram::e_gen(2, 1));
        switch (l.kind) {
            case GenLetter::Tau:
                // q(q - u_1)
                return elem_add(elem_scale(Scalar::v_pow(ring, 4), elem_identity(ring, 2)),
                                elem_scale(Scalar::v_pow(ring, 2), u1));
            case GenLetter::TauInv:
                return elem_add(elem_scale(Scalar::v_pow(ring, -4), elem_identity(ring, 2)),
                                elem_scale(Scalar::v_pow(ring, -2), u1));
            case GenLetter::E: {
                int i = ((l.idx % 2) + 2) % 2;
                if (i == 1) return u1;
                AlgebraElement t = phi_letter(ring, 2, {GenLetter::Tau, 0});
                AlgebraElement ti = phi_letter(ring, 2, {GenLetter::TauInv, 0});
                return elem_compose(elem_compose(t, u1), ti);
            }
            default: break;
        }
    }
    const AlgebraElement& h = eta(ring, n - 1, 1);
    switch (l.kind) {
        case GenLetter::Tau:
            return elem_scale(Scalar::v_pow(ring, 3), h);
        case GenLetter::TauInv:
            return elem_scale(Scalar::v_pow(ring, -3), eta_inv(ring, n - 1, 1));
        case GenLetter::E: {
            int i = ((l.idx % n) + n) % n;
            if (i >= 1) return elem_from_diagram(ring, AffDiagram::e_gen(n, i));
            AlgebraElement u1 = elem_from_diagram(ring, AffDiagram::e_gen(n, 1));
            return elem_compose(elem_compose(eta_inv(ring, n - 1, 1), u1), h);
        }
        default: break;
    }
    throw std::logic_error("unreachable");
}

AlgebraElement phi_apply(const GeneratorWord& w, const RingHandle& ring) {
    AlgebraElement acc = elem_identity(ring, w.n);
    for (auto& l : w.letters) acc = elem_compose(acc, phi_letter(ring, w.n, l));
    return acc;
}

// ------------------------------------------------------------- appendix A

AppendixAElements braid_translation(const RingHandle& ring, int n) {
    AppendixAElements a;
    a.n = n;
    AlgebraElement g = elem_from_diagram(ring, AffDiagram::tau(n));
    for (int i = n - 1; i >= 1; --i) g = elem_compose(g, braid_T_inv(ring, n, i));
    g = elem_scale(Scalar::v_pow(ring, -3), g);
    AlgebraElement gi = elem_identity(ring, n);
    for (int i = 1; i <= n - 1; ++i) gi = elem_compose(gi, braid_T(ring, n, i));
    gi = elem_compose(gi, elem_from_diagram(ring, AffDiagram::tau_inv(n)));
    gi = elem_scale(Scalar::v_pow(ring, 3), gi);
    a.g = g;
    a.g_inv = gi;
    Scalar q = ring_q(ring);
    a.lambda = elem_add(elem_scale(q, g), elem_scale(q.inv(), gi));
    a.gk.push_back(g);
    a.gk_inv.push_back(gi);
    for (int k = 1; k <= n - 1; ++k) {
        const AlgebraElement& t = braid_T(ring, n, k);
        AlgebraElement ti = braid_T_inv(ring, n, k);
        a.gk.push_back(elem_compose(elem_compose(t, a.gk.back()), t));
        a.gk_inv.push_back(elem_compose(elem_compose(ti, a.gk_inv.back()), ti));
    }
    return a;
}

// ----------------------------------------------------------------- suites

bool RelationReport::all_pass() const {
    for (auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

namespace {

void rep(RelationReport& r, const std::string& name, bool ok) {
    r.checks.emplace_back(name, ok);
}

AlgebraElement D(const RingHandle& ring, const AffDiagram& d) {
    return elem_from_diagram(ring, d);
}

}  // namespace

RelationReport relation_suite(int n, const RingHandle& ring, RelationSet which) {
    RelationReport r;
    auto mul = [](const AlgebraElement& a, const AlgebraElement& b) {
        return elem_compose(a, b);
    };
    Scalar beta = ring_beta(ring);
    AlgebraElement id = elem_identity(ring, n);
    switch (which) {
        case RelationSet::Affine: {
            AlgebraElement t = D(ring, AffDiagram::tau(n));
            AlgebraElement ti = D(ring, AffDiagram::tau_inv(n));
            rep(r, "tau tau^-1 = 1", mul(t, ti) == id && mul(ti, t) == id);
            if (n >= 2) {
                for (int i = 0; i < n; ++i) {
                    AlgebraElement e = D(ring, AffDiagram::e_gen(n, i));
                    rep(r, "e_" + std::to_string(i) + "^2 = beta e",
                        mul(e, e) == elem_scale(beta, e));
                    rep(r, "tau e_" + std::to_string(i) + " tau^-1 = e_next",
                        mul(mul(t, e), ti) == D(ring, AffDiagram::e_gen(n, (i + 1) % n)));
                    if (n > 2) {
                        AlgebraElement en = D(ring, AffDiagram::e_gen(n, (i + 1) % n));
                        rep(r, "e e_next e = e (i=" + std::to_string(i) + ")",
                            mul(mul(e, en), e) == e);
                        rep(r, "e_next e e_next = e_next (i=" + std::to_string(i) + ")",
                            mul(mul(en, e), en) == en);
                    }
                    for (int j = 0; j < n; ++j) {
                        int dist = std::min((i - j + n) % n, (j - i + n) % n);
                        if (dist < 2) continue;
                        AlgebraElement f = D(ring, AffDiagram::e_gen(n, j));
                        rep(r, "e_i e_j commute", mul(e, f) == mul(f, e));
                    }
                }
                AlgebraElement lhs = mul(mul(D(ring, AffDiagram::e_gen(n, 1)), t), t);
                AlgebraElement rhs = D(ring, AffDiagram::e_gen(n, 1));
                for (int i = 2; i <= n - 1; ++i)
                    rhs = mul(rhs, D(ring, AffDiagram::e_gen(n, i)));
                rep(r, "e_1 tau^2 = e_1 e_2 ... e_{n-1}", lhs == rhs);
                // periodic index convention
                GeneratorWord w1{n, false, {{GenLetter::E, 1 + n}}};
                GeneratorWord w2{n, false, {{GenLetter::E, 1}}};
                rep(r, "e_{i+n} = e_i", word_eval(w1, ring) == word_eval(w2, ring));
                // the full twists are central in the regular algebra; the
                // n-th powers of the braidings are accumulated one sparse
                // T-factor at a time (eta(1,n-1) = T_{n-1} o ... o T_1 and
                // eta(n-1,1) = T_1 o ... o T_{n-1}, verified elsewhere
                // against their cached expansions)
                AlgebraElement tw1 = elem_identity(ring, n), tw2 = tw1;
                for (int i = 0; i < n; ++i) {
                    for (int j = n - 1; j >= 1; --j)
                        tw1 = mul(tw1, braid_T(ring, n, j));
                    for (int j = 1; j <= n - 1; ++j)
                        tw2 = mul(tw2, braid_T(ring, n, j));
                }
                if (n <= 5) {
                    AlgebraElement p1 = elem_identity(ring, n), p2 = p1;
                    for (int i = 0; i < n; ++i) {
                        p1 = mul(p1, eta(ring, 1, n - 1));
                        p2 = mul(p2, eta(ring, n - 1, 1));
                    }
                    rep(r, "full twists equal the braiding powers",
                        tw1 == p1 && tw2 == p2);
                }
                bool central = true;
                for (int i = 1; i <= n - 1; ++i) {
                    AlgebraElement e = D(ring, AffDiagram::e_gen(n, i));
                    central = central && mul(tw1, e) == mul(e, tw1) &&
                              mul(tw2, e) == mul(e, tw2);
                }
                rep(r, "full twists are central in the regular algebra", central);
            }
            break;
        }
        case RelationSet::Regular: {
            for (int i = 1; i <= n - 1; ++i) {
                AlgebraElement u = D(ring, AffDiagram::e_gen(n, i));
                rep(r, "u_" + std::to_string(i) + "^2 = beta u",
                    mul(u, u) == elem_scale(beta, u));
                // u_i T_i T_i = (-q)^{-3} u_i
                const AlgebraElement& t = braid_T(ring, n, i);
                rep(r, "u T T = (-q)^-3 u (i=" + std::to_string(i) + ")",
                    mul(mul(u, t), t) == elem_scale(Scalar::v_pow(ring, -6), u));
                rep(r, "T T^-1 = 1 (i=" + std::to_string(i) + ")",
                    mul(t, braid_T_inv(ring, n, i)) == id);
                for (int j = i + 2; j <= n - 1; ++j) {
                    AlgebraElement w = D(ring, AffDiagram::e_gen(n, j));
                    rep(r, "u_i u_j commute", mul(u, w) == mul(w, u));
                }
            }
            for (int i = 1; i <= n - 2; ++i) {
                AlgebraElement u = D(ring, AffDiagram::e_gen(n, i));
                AlgebraElement un = D(ring, AffDiagram::e_gen(n, i + 1));
                rep(r, "u u_next u = u", mul(mul(u, un), u) == u);
                rep(r, "u_next u u_next = u_next", mul(mul(un, u), un) == un);
                // e_i T_{i+1} T_i = e_i e_{i+1} = T_{i+1} T_i e_{i+1}
                const AlgebraElement& ti = braid_T(ring, n, i);
                const AlgebraElement& tn = braid_T(ring, n, i + 1);
                AlgebraElement mid = mul(u, un);
                rep(r, "e T T = e e_next (i=" + std::to_string(i) + ")",
                    mul(mul(u, tn), ti) == mid);
                rep(r, "T T e_next = e e_next (i=" + std::to_string(i) + ")",
                    mul(mul(tn, ti), un) == mid);
            }
            break;
        }
        case RelationSet::PhiImage: {
            auto P = [&](const GenLetter& l) { return phi_letter(ring, n, l); };
            GenLetter LT{GenLetter::Tau, 0}, LTi{GenLetter::TauInv, 0};
            AlgebraElement pt = P(LT), pti = P(LTi);
            rep(r, "phi(tau) phi(tau^-1) = 1", mul(pt, pti) == id && mul(pti, pt) == id);
            if (n >= 2) {
                for (int i = 0; i < n; ++i) {
                    AlgebraElement pe = P({GenLetter::E, i});
                    rep(r, "phi(e)^2 = beta phi(e)", mul(pe, pe) == elem_scale(beta, pe));
                    rep(r, "phi conjugation shifts e_" + std::to_string(i),
                        mul(mul(pt, pe), pti) == P({GenLetter::E, (i + 1) % n}));
                }
                AlgebraElement lhs = mul(mul(P({GenLetter::E, 1}), pt), pt);
                AlgebraElement rhs = P({GenLetter::E, 1});
                for (int i = 2; i <= n - 1; ++i) rhs = mul(rhs, P({GenLetter::E, i}));
                rep(r, "phi(e_1 tau^2) = phi(e_1 e_2 ... )", lhs == rhs);
                // every term of every phi image is rank zero
                bool flat = true;
                for (int i = 0; i < n; ++i)
                    for (auto& [d, c] : P({GenLetter::E, i}).terms)
                        flat = flat && d.is_regular();
                for (auto& [d, c] : pt.terms) flat = flat && d.is_regular();
                rep(r, "phi lands in the regular algebra", flat);
            }
            if (n == 2) {
                AlgebraElement u1 = D(ring, AffDiagram::e_gen(2, 1));
                rep(r, "n=2: phi(tau) u_1 = -u_1",
                    mul(pt, u1) == elem_scale(-Scalar::one(ring), u1));
            }
            break;
        }
        case RelationSet::AppendixA: {
            AppendixAElements ax = braid_translation(ring, n);
            Scalar q = ring_q(ring);
            rep(r, "g g^-1 = 1",
                mul(ax.g, ax.g_inv) == id && mul(ax.g_inv, ax.g) == id);
            for (int i = 1; i <= n - 1; ++i) {
                AlgebraElement e = D(ring, AffDiagram::e_gen(n, i));
                rep(r, "Lambda e_" + std::to_string(i) + " commute",
                    mul(ax.lambda, e) == mul(e, ax.lambda));
            }
            if (n >= 2) {
                AlgebraElement e1 = D(ring, AffDiagram::e_gen(n, 1));
                rep(r, "e_1 g e_1 = Lambda e_1",
                    mul(mul(e1, ax.g), e1) == mul(ax.lambda, e1));
                const AlgebraElement& t1 = braid_T(ring, n, 1);
                rep(r, "type B braid relation",
                    mul(mul(mul(t1, ax.g), t1), ax.g) == mul(mul(mul(ax.g, t1), ax.g), t1));
            }
            // Chebyshev: (qg)^n = qg P_{n-1}(Lambda) - P_{n-2}(Lambda)
            {
                AlgebraElement qg = elem_scale(q, ax.g);
                AlgebraElement pw = id;
                for (int i = 0; i < n; ++i) pw = mul(pw, qg);
                AlgebraElement p0 = id, p1 = ax.lambda;  // P_0, P_1
                for (int m = 2; m <= n - 1; ++m) {
                    AlgebraElement p2 = elem_sub(mul(ax.lambda, p1), p0);
                    p0 = p1;
                    p1 = p2;
                }
                AlgebraElement rhs =
                    n == 1 ? qg : elem_sub(mul(qg, p1), p0);
                rep(r, "Chebyshev power identity", pw == rhs);
            }
            for (int k = 0; k <= n - 1; ++k) {
                for (int t = k + 1; t <= n - 1; ++t)
                    rep(r, "g_k g_t commute", mul(ax.gk[k], ax.gk[t]) ==
                                                  mul(ax.gk[t], ax.gk[k]));
                if (k >= 1) {
                    rep(r, "g_k g_k^-1 = 1", mul(ax.gk[k], ax.gk_inv[k]) == id);
                    AlgebraElement lk = elem_add(elem_scale(q, ax.gk[k]),
                                                 elem_scale(q.inv(), ax.gk_inv[k]));
                    if (k + 1 <= n - 1) {
                        AlgebraElement ek1 = D(ring, AffDiagram::e_gen(n, k + 1));
                        rep(r, "e_{k+1} g_k e_{k+1} = Lambda_k e_{k+1}",
                            mul(mul(ek1, ax.gk[k]), ek1) == mul(lk, ek1));
                    }
                    for (int j = 1; j <= n - 1; ++j) {
                        if (j == k) continue;
                        AlgebraElement ej = D(ring, AffDiagram::e_gen(n, j));
                        rep(r, "Lambda_k e_j commute", mul(lk, ej) == mul(ej, lk));
                    }
                }
            }
            break;
        }
    }
    return r;
}

bool eta_naturality_check(const AffDiagram& f, const AffDiagram& g,
                          const RingHandle& ring) {
    // f: m -> r and g: n -> s, both rank zero
    int m = f.n(), rr = f.m(), nn = g.n(), s = g.m();
    AlgebraElement F = elem_from_diagram(ring, f), G = elem_from_diagram(ring, g);
    AlgebraElement lhs = elem_compose(eta(ring, rr, s), elem_tensor(F, G));
    AlgebraElement rhs = elem_compose(elem_tensor(G, F), eta(ring, m, nn));
    return lhs == rhs;
}

}  // namespace atl
