#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sixv/lattice.hpp"
#include "sixv/params.hpp"
#include "sixv/rng.hpp"

namespace sixv {

/// Occupation vector tau in {0,1}^N, index i <-> outgoing edge p_{i+1}
/// ordered from the up-left end of the path to the down-right end.
using Configuration = std::vector<std::uint8_t>;

/// Three-color occupation vector in {0,1,2}^N for the coupled model.
using ColoredConfiguration = std::vector<std::uint8_t>;

/// Incoming edge occupations of a vertex about to be sampled. Bulk vertices
/// read bottom and left; left-boundary vertices read bottom only;
/// right-boundary vertices read left only. Unused slots stay -1.
struct IncomingEdges {
    int bottom = -1;
    int left = -1;
};

struct OutgoingEdges {
    int top = -1;
    int right = -1;
};

/// Exact categorical law of one vertex, sampled with a single uniform draw.
/// Bulk vertices conserve the arrow count; boundary vertices may create or
/// destroy one arrow.
OutgoingEdges sample_vertex(VertexKind kind, IncomingEdges in,
                            const StripParams& params, double u);

/// P(top = 1) at a right-boundary vertex given the incoming left edge, and
/// P(right = 1) at a left-boundary vertex given the incoming bottom edge.
double right_boundary_occupy_prob(int left, const StripParams& params);
double left_boundary_occupy_prob(int bottom, const StripParams& params);

/// Outgoing (top, right) distribution of a bulk vertex: list of
/// ((top, right), probability) pairs with nonzero mass.
std::vector<std::pair<std::pair<int, int>, double>>
bulk_vertex_law(int bottom, int left, const StripParams& params);

/// One slab update: sample every vertex strictly between the path at offset
/// `step` and its unit translate, in raster order, and return the outgoing
/// configuration of the translated path.
Configuration step_configuration(const DownRightPath& base, long long step,
                                 const Configuration& tau, const StripParams& params,
                                 const CounterRng& rng, std::uint64_t replica);

/// Trajectory tau(0..steps) of the interacting particle system on `path`.
/// Pure given the rng seed; replicas are independent streams.
std::vector<Configuration> evolve(const DownRightPath& path, const Configuration& init,
                                  const StripParams& params, long long steps,
                                  const CounterRng& rng, std::uint64_t replica = 0);

/// Colored vertex laws of the two-species coupling. Color 2 marks arrows
/// present in both coupled models, color 1 arrows present only in the
/// looser model. Marginals: eta1 = 1{color >= 2} evolves with
/// (a,b,c,d), eta2 = 1{color >= 1} with (a2,b2,c2,d2).
std::array<double, 3> colored_left_row(int bottom, const StripParams& p1,
                                       const StripParams& p2);
std::array<double, 3> colored_right_row(int left, const StripParams& p1,
                                        const StripParams& p2);
std::vector<std::pair<std::pair<int, int>, double>>
colored_bulk_law(int bottom, int left, const StripParams& p1);

/// Coupling hypothesis: a <= a2, b >= b2, c >= c2, d <= d2, a2 + c < 1,
/// b + d2 < 1 and shared bulk parameters. Throws otherwise.
void require_coupling(const StripParams& p1, const StripParams& p2);

ColoredConfiguration colored_step(const DownRightPath& base, long long step,
                                  const ColoredConfiguration& eta,
                                  const StripParams& p1, const StripParams& p2,
                                  const CounterRng& rng, std::uint64_t replica);

/// Coupled trajectory with initial colors init1 + init2 (init1 <= init2
/// pointwise). Projecting colors >= 2 gives a trajectory of the (a,b,c,d)
/// model; colors >= 1 one of the (a2,b2,c2,d2) model.
std::vector<ColoredConfiguration>
evolve_coupled(const DownRightPath& path, const Configuration& init1,
               const Configuration& init2, const StripParams& p1,
               const StripParams& p2, long long steps, const CounterRng& rng,
               std::uint64_t replica = 0);

} // namespace sixv
