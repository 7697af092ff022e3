#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sixv {

/// Orientation of an outgoing edge of a down-right path. An `Up` label is a
/// vertical edge and corresponds to a rightward step of the path; a `Right`
/// label is a horizontal edge and corresponds to a downward step.
enum class EdgeKind : std::uint8_t { Up, Right };

/// A down-right path across the strip 0 <= y <= x <= y+N, encoded by its N
/// outgoing-edge labels (listed from the up-left end to the down-right end)
/// plus the height of its down-right endpoint on the boundary x = y+N.
/// The up-left endpoint sits on x = y at height anchor + (#Right labels).
struct DownRightPath {
    int N = 0;
    std::vector<EdgeKind> labels;
    long long anchor = 0;

    bool horizontal() const {
        for (EdgeKind k : labels)
            if (k == EdgeKind::Right) return false;
        return true;
    }

    /// Height profile g_0..g_N: g_j is the y-coordinate of the unique path
    /// vertex on the diagonal x - y = j. Nonincreasing, g_N = anchor.
    std::vector<long long> heights() const;

    /// x-coordinate of the vertex on diagonal j is heights()[j] + j.
    bool operator==(const DownRightPath& o) const = default;
};

enum class MoveKind : std::uint8_t { Bulk, LeftBoundary, RightBoundary };

/// One of the three elementary deformations that raise a down-right path.
/// A bulk move flips the down-then-right corner between labels position and
/// position+1 (requires labels (Right, Up), 1-based position in 1..N-1).
/// The left-boundary move raises the up-left endpoint (requires first label
/// Up); the right-boundary move raises the down-right endpoint (requires
/// last label Right). position is ignored for boundary moves.
struct LocalMove {
    MoveKind kind = MoveKind::Bulk;
    int position = 0;
};

/// Validate and construct a path. Empty `labels` means the horizontal path.
/// Throws if labels.size() != N or the path leaves the strip (anchor < 0).
DownRightPath build_path(int N, std::vector<EdgeKind> labels, long long anchor);
DownRightPath horizontal_path(int N, long long anchor = 0);

/// Parse a path literal over {U,R}, e.g. "URU".
std::vector<EdgeKind> parse_labels(const std::string& s);
std::string format_labels(const DownRightPath& p);

bool move_applicable(const DownRightPath& p, const LocalMove& m);

/// Apply one local move; throws if it is not applicable. The result sits
/// weakly above the input and differs from it on at most two path edges.
DownRightPath apply_local_move(const DownRightPath& p, const LocalMove& m);

/// A sequence of applicable local moves carrying the path to its up-right
/// translate by (1,1). Always has length N+1 (each of the N+1 profile
/// heights rises exactly once) and preserves the label sequence.
std::vector<LocalMove> decompose_translation(const DownRightPath& p);

DownRightPath translate(const DownRightPath& p, long long k = 1);

/// Area swept by a move: 1 cell for a bulk flip, 1/2 for a boundary move.
double move_area(const LocalMove& m);

/// Signed area between two paths (upper minus lower), in cells. Half-open
/// cells at the two boundaries count half. Equals N for a unit translation.
double area_between(const DownRightPath& lower, const DownRightPath& upper);

/// True if every height of `lower` is <= the matching height of `upper`.
bool weakly_below(const DownRightPath& lower, const DownRightPath& upper);

enum class VertexKind : std::uint8_t { Bulk, LeftBoundary, RightBoundary };

/// One vertex-sampling event in the slab sweep between a path and a target
/// above it: raising profile height `diag` from height-1 to height.
/// At diag 0 / N the vertex is a boundary vertex touching configuration
/// coordinate 1 / N; otherwise a bulk vertex reading coordinates
/// (diag, diag+1) of the intermediate configuration.
struct SlabVertex {
    int diag = 0;
    long long height = 0;
    VertexKind kind = VertexKind::Bulk;
    long long x() const { return height + diag; }
    long long y() const { return height; }
};

/// All vertices strictly above `from` and weakly below `to`, in raster
/// order (smaller y first, then smaller x) — the order in which the model
/// samples them. Throws if `to` does not sit weakly above `from`.
std::vector<SlabVertex> slab_vertices(const DownRightPath& from,
                                      const DownRightPath& to);

} // namespace sixv
