#pragma once

// Affine Temperley-Lieb diagrams on the annulus, exactly.
//
// A morphism from n to m is drawn in a rectangle with top and bottom edges
// identified: n marked points on the right edge (the source), m on the left
// (the target), both numbered from the bottom up.  The seam is the identified
// edge; it sits between point max and point 1.  An arc is recorded by its two
// endpoints together with a sheet offset w: lifting the first endpoint to the
// universal cover at sheet 0, the partner lands on sheet w.  Point i of a
// boundary with k points sits at height (i - 1/2)/k + sheet, so the minimal
// number of seam crossings of the arc class is exactly |w| and the rank of a
// diagram is the sum of |w| over its arcs.  Non-contractible loops are kept
// as a separate counter; they coexist only with diagrams without through
// lines.  No isotopy representatives are ever stored: the (endpoints, w) data
// plus the loop count is a complete invariant.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace atl {

struct Endpt {
    int side;  // 0 = left (target), 1 = right (source)
    int idx;   // 1-based, increasing from the bottom
    auto operator<=>(const Endpt&) const = default;
};

struct Arc {
    Endpt a, b;  // canonical: a < b; w = sheet(b) - sheet(a)
    int w = 0;
    auto operator<=>(const Arc&) const = default;
};

class AffDiagram {
  public:
    AffDiagram() = default;

    // throws std::invalid_argument on incomplete pairings or crossings
    static AffDiagram make(int m, int n, std::vector<Arc> arcs, long nc_loops = 0);

    static AffDiagram identity(int n);
    // e_{n,i} for 0 <= i <= n-1; i = 0 is the pair of arcs across the seam
    static AffDiagram e_gen(int n, int i);
    // the rotation: right i joins left i+1, the top strand wraps around
    static AffDiagram tau(int n);
    static AffDiagram tau_inv(int n);

    int m() const { return m_; }  // target points (left)
    int n() const { return n_; }  // source points (right)
    const std::vector<Arc>& arcs() const { return arcs_; }
    long nc_loops() const { return nc_loops_; }

    long rank() const;           // sum of |w|
    int through_count() const;   // arcs joining the two boundaries
    bool is_regular() const;     // no seam crossings, no loops

    // mirror image across the vertical axis: source and target swap
    AffDiagram transpose() const;

    bool operator==(const AffDiagram& o) const = default;
    bool operator<(const AffDiagram& o) const;

    std::string str() const;
    static AffDiagram parse(const std::string& s);

  private:
    int m_ = 0, n_ = 0;
    std::vector<Arc> arcs_;  // sorted
    long nc_loops_ = 0;
};

struct ComposeResult {
    AffDiagram d;
    long beta_loops = 0;  // contractible loops removed during gluing
};

// g after f: glue f's target boundary to g's source boundary.
// Requires f.m() == g.n().  Contractible loops are counted into beta_loops;
// non-contractible ones (net sheet shift +-1) go into the diagram itself.
ComposeResult compose(const AffDiagram& g, const AffDiagram& f);

// f tensor g: f keeps its labels at the bottom, g is stacked above it.
// This orientation is the one compatible with the commutor naturality
// eta_{r,s} (f tensor g) = (g tensor f) eta_{m,n}.
AffDiagram tensor_stack(const AffDiagram& f, const AffDiagram& g);

}  // namespace atl
