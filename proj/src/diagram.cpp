#include "atl/diagram.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace atl {

namespace {

Arc normalize(Arc a) {
    if (a.b < a.a) {
        std::swap(a.a, a.b);
        a.w = -a.w;
    }
    return a;
}

// boundary coordinate in the universal cover, exact: (side, y) where the
// strip boundary is traversed down the left edge then up the right edge.
// y = (2*idx - 1) / (2*count) + sheet, negated on the left side.
struct BKey {
    int side;
    long num;  // value = num / den
    long den;  // > 0
    bool operator<(const BKey& o) const {
        if (side != o.side) return side < o.side;
        return num * o.den < o.num * den;
    }
    bool operator==(const BKey& o) const {
        return side == o.side && num * o.den == o.num * den;
    }
};

BKey bkey(const Endpt& e, long sheet, int m, int n) {
    long count = e.side == 0 ? m : n;
    long num = 2 * e.idx - 1 + 2 * count * sheet;
    long den = 2 * count;
    if (e.side == 0) num = -num;
    return {e.side, num, den};
}

// do the chords (a1,a2) and (b1,b2) interleave around the disk boundary?
bool interleaves(BKey a1, BKey a2, BKey b1, BKey b2) {
    if (a2 < a1) std::swap(a1, a2);
    auto inside = [&](const BKey& k) { return a1 < k && k < a2; };
    return inside(b1) != inside(b2);
}

}  // namespace

AffDiagram AffDiagram::make(int m, int n, std::vector<Arc> arcs, long nc_loops) {
    if (m < 0 || n < 0 || (m + n) % 2 != 0)
        throw std::invalid_argument("bad boundary sizes");
    if (nc_loops < 0) throw std::invalid_argument("negative loop count");
    for (auto& a : arcs) a = normalize(a);
    std::sort(arcs.begin(), arcs.end());
    // every boundary point paired exactly once
    std::map<Endpt, int> seen;
    for (auto& a : arcs) {
        if (a.a == a.b) throw std::invalid_argument("arc endpoints coincide");
        ++seen[a.a];
        ++seen[a.b];
    }
    if (int(seen.size()) != m + n || int(arcs.size()) * 2 != m + n)
        throw std::invalid_argument("pairing is not a perfect matching");
    for (auto& [e, cnt] : seen) {
        bool ok = cnt == 1 && e.idx >= 1 && e.idx <= (e.side == 0 ? m : n);
        if (!ok) throw std::invalid_argument("pairing is not a perfect matching");
    }
    // loops coexist only with fully capped diagrams
    bool has_through = false;
    for (auto& a : arcs)
        if (a.a.side != a.b.side) has_through = true;
    if (nc_loops > 0 && has_through)
        throw std::invalid_argument("non-contractible loops next to through lines");
    // planarity: no two arc lifts interleave, over a sufficient shift window
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i; j < arcs.size(); ++j) {
            long w1 = std::abs(arcs[i].w), w2 = std::abs(arcs[j].w);
            long window = w1 + w2 + 2;
            for (long t = (i == j ? 1 : -window); t <= window; ++t) {
                if (i == j && t == 0) continue;
                BKey a1 = bkey(arcs[i].a, 0, m, n);
                BKey a2 = bkey(arcs[i].b, arcs[i].w, m, n);
                BKey b1 = bkey(arcs[j].a, t, m, n);
                BKey b2 = bkey(arcs[j].b, arcs[j].w + t, m, n);
                if (interleaves(a1, a2, b1, b2))
                    throw std::invalid_argument("arcs cross");
            }
        }
    }
    AffDiagram d;
    d.m_ = m;
    d.n_ = n;
    d.arcs_ = std::move(arcs);
    d.nc_loops_ = nc_loops;
    return d;
}

AffDiagram AffDiagram::identity(int n) {
    std::vector<Arc> arcs;
    for (int i = 1; i <= n; ++i) arcs.push_back({{0, i}, {1, i}, 0});
    return make(n, n, std::move(arcs));
}

AffDiagram AffDiagram::e_gen(int n, int i) {
    if (n < 2 || i < 0 || i >= n) throw std::invalid_argument("e generator out of range");
    std::vector<Arc> arcs;
    if (i == 0) {
        arcs.push_back({{0, 1}, {0, n}, -1});
        arcs.push_back({{1, 1}, {1, n}, -1});
        for (int j = 2; j <= n - 1; ++j) arcs.push_back({{0, j}, {1, j}, 0});
    } else {
        arcs.push_back({{0, i}, {0, i + 1}, 0});
        arcs.push_back({{1, i}, {1, i + 1}, 0});
        for (int j = 1; j <= n; ++j)
            if (j != i && j != i + 1) arcs.push_back({{0, j}, {1, j}, 0});
    }
    return make(n, n, std::move(arcs));
}

AffDiagram AffDiagram::tau(int n) {
    if (n < 1) throw std::invalid_argument("tau needs n >= 1");
    std::vector<Arc> arcs;
    for (int i = 1; i <= n - 1; ++i) arcs.push_back({{0, i + 1}, {1, i}, 0});
    arcs.push_back({{0, 1}, {1, n}, -1});
    return make(n, n, std::move(arcs));
}

AffDiagram AffDiagram::tau_inv(int n) {
    if (n < 1) throw std::invalid_argument("tau needs n >= 1");
    std::vector<Arc> arcs;
    for (int i = 1; i <= n - 1; ++i) arcs.push_back({{0, i}, {1, i + 1}, 0});
    arcs.push_back({{0, n}, {1, 1}, 1});
    return make(n, n, std::move(arcs));
}

long AffDiagram::rank() const {
    long r = 0;
    for (auto& a : arcs_) r += std::abs(a.w);
    return r;
}

int AffDiagram::through_count() const {
    int t = 0;
    for (auto& a : arcs_)
        if (a.a.side != a.b.side) ++t;
    return t;
}

bool AffDiagram::is_regular() const { return rank() == 0 && nc_loops_ == 0; }

AffDiagram AffDiagram::transpose() const {
    std::vector<Arc> arcs;
    for (auto a : arcs_) {
        a.a.side ^= 1;
        a.b.side ^= 1;
        arcs.push_back(a);
    }
    return make(n_, m_, std::move(arcs), nc_loops_);
}

bool AffDiagram::operator<(const AffDiagram& o) const {
    return std::tie(m_, n_, arcs_, nc_loops_) < std::tie(o.m_, o.n_, o.arcs_, o.nc_loops_);
}

std::string AffDiagram::str() const {
    std::ostringstream os;
    os << m_ << ";" << n_ << ";";
    bool first = true;
    for (auto& a : arcs_) {
        if (!first) os << ",";
        first = false;
        os << (a.a.side == 0 ? "L" : "R") << a.a.idx << "-"
           << (a.b.side == 0 ? "L" : "R") << a.b.idx << ":" << a.w;
    }
    os << ";loops=" << nc_loops_;
    return os.str();
}

AffDiagram AffDiagram::parse(const std::string& s) {
    std::istringstream is(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, ';')) parts.push_back(part);
    if (parts.size() != 4) throw std::invalid_argument("bad diagram string");
    int m = std::stoi(parts[0]), n = std::stoi(parts[1]);
    std::vector<Arc> arcs;
    if (!parts[2].empty()) {
        std::istringstream as(parts[2]);
        std::string tok;
        while (std::getline(as, tok, ',')) {
            Arc a;
            size_t dash = tok.find('-', 1);  // skip a leading minus-free side char
            size_t colon = tok.rfind(':');
            if (dash == std::string::npos || colon == std::string::npos)
                throw std::invalid_argument("bad arc token");
            auto ep = [](const std::string& t) {
                if (t.empty() || (t[0] != 'L' && t[0] != 'R'))
                    throw std::invalid_argument("bad endpoint token");
                return Endpt{t[0] == 'L' ? 0 : 1, std::stoi(t.substr(1))};
            };
            a.a = ep(tok.substr(0, dash));
            a.b = ep(tok.substr(dash + 1, colon - dash - 1));
            a.w = std::stoi(tok.substr(colon + 1));
            arcs.push_back(a);
        }
    }
    const std::string lp = "loops=";
    if (parts[3].rfind(lp, 0) != 0) throw std::invalid_argument("bad loop token");
    long loops = std::stol(parts[3].substr(lp.size()));
    return make(m, n, std::move(arcs), loops);
}

// ----------------------------------------------------------------- compose

namespace {

// node in the glued picture: (which diagram, side, idx)
using Node = std::tuple<int, int, int>;

}  // namespace

ComposeResult compose(const AffDiagram& g, const AffDiagram& f) {
    if (f.m() != g.n()) throw std::invalid_argument("compose: boundary mismatch");
    const int p = f.m();
    std::map<Node, std::pair<Node, int>> adj;
    auto add = [&](int which, const Arc& a) {
        Node u{which, a.a.side, a.a.idx}, v{which, a.b.side, a.b.idx};
        adj[u] = {v, a.w};
        adj[v] = {u, -a.w};
    };
    for (auto& a : f.arcs()) add(0, a);
    for (auto& a : g.arcs()) add(1, a);
    auto is_outer = [&](const Node& u) {
        auto [which, side, idx] = u;
        return (which == 0 && side == 1) || (which == 1 && side == 0);
    };
    auto glue_partner = [&](const Node& u) {
        auto [which, side, idx] = u;
        return which == 0 ? Node{1, 1, idx} : Node{0, 0, idx};
    };
    std::map<Node, bool> visited;
    std::vector<Arc> arcs;
    long beta = 0, nc = f.nc_loops() + g.nc_loops();
    // open chains from each outer endpoint
    for (auto& [start, link] : adj) {
        if (!is_outer(start) || visited[start]) continue;
        Node cur = start;
        long sheet = 0;
        for (;;) {
            visited[cur] = true;
            auto [next, dw] = adj.at(cur);
            sheet += dw;
            visited[next] = true;
            if (is_outer(next)) {
                auto [wf, sf, i0] = start;
                auto [wn, sn, i1] = next;
                Endpt ea{wf == 0 ? 1 : 0, i0};  // f's right stays right, g's left stays left
                Endpt eb{wn == 0 ? 1 : 0, i1};
                arcs.push_back(normalize({ea, eb, int(sheet)}));
                break;
            }
            cur = glue_partner(next);
        }
    }
    // closed cycles entirely inside the glue region
    for (auto& [start, link] : adj) {
        if (visited[start]) continue;
        Node cur = start;
        long sheet = 0;
        for (;;) {
            visited[cur] = true;
            auto [next, dw] = adj.at(cur);
            sheet += dw;
            visited[next] = true;
            Node jump = glue_partner(next);
            if (jump == start) break;
            cur = jump;
        }
        if (sheet == 0) {
            ++beta;
        } else if (sheet == 1 || sheet == -1) {
            ++nc;
        } else {
            throw std::logic_error("composition produced a loop of winding " +
                                   std::to_string(sheet));
        }
    }
    ComposeResult res;
    res.d = AffDiagram::make(g.m(), f.n(), std::move(arcs), nc);
    res.beta_loops = beta;
    return res;
}

AffDiagram tensor_stack(const AffDiagram& f, const AffDiagram& g) {
    std::vector<Arc> arcs = f.arcs();
    for (auto a : g.arcs()) {
        a.a.idx += a.a.side == 0 ? f.m() : f.n();
        a.b.idx += a.b.side == 0 ? f.m() : f.n();
        arcs.push_back(a);
    }
    return AffDiagram::make(f.m() + g.m(), f.n() + g.n(), std::move(arcs),
                            f.nc_loops() + g.nc_loops());
}

}  // namespace atl
