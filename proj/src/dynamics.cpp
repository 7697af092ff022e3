#include "sixv/dynamics.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace sixv {

namespace {

LocalMove move_for_diag(int j, int N) {
    if (j == 0) return {MoveKind::LeftBoundary, 0};
    if (j == N) return {MoveKind::RightBoundary, N};
    return {MoveKind::Bulk, j};
}

} // namespace

double left_boundary_occupy_prob(int bottom, const StripParams& params) {
    return bottom ? 1.0 - params.c : params.a;
}

double right_boundary_occupy_prob(int left, const StripParams& params) {
    return left ? 1.0 - params.b : params.d;
}

std::vector<std::pair<std::pair<int, int>, double>>
bulk_vertex_law(int bottom, int left, const StripParams& params) {
    if (bottom == left) return {{{bottom, left}, 1.0}};
    if (left == 1) // horizontal arrow keeps going with probability theta2
        return {{{0, 1}, params.theta2}, {{1, 0}, 1.0 - params.theta2}};
    // vertical arrow keeps going with probability theta1
    return {{{1, 0}, params.theta1}, {{0, 1}, 1.0 - params.theta1}};
}

OutgoingEdges sample_vertex(VertexKind kind, IncomingEdges in, const StripParams& params,
                            double u) {
    OutgoingEdges out;
    switch (kind) {
        case VertexKind::Bulk: {
            if (in.bottom < 0 || in.left < 0)
                throw std::invalid_argument("bulk vertex needs bottom and left occupations");
            for (const auto& [edges, p] : bulk_vertex_law(in.bottom, in.left, params)) {
                u -= p;
                if (u < 0) {
                    out.top = edges.first;
                    out.right = edges.second;
                    return out;
                }
            }
            const auto& last = bulk_vertex_law(in.bottom, in.left, params).back();
            out.top = last.first.first;
            out.right = last.first.second;
            return out;
        }
        case VertexKind::LeftBoundary:
            if (in.bottom < 0)
                throw std::invalid_argument("left-boundary vertex needs the bottom occupation");
            out.right = u < left_boundary_occupy_prob(in.bottom, params) ? 1 : 0;
            return out;
        case VertexKind::RightBoundary:
            if (in.left < 0)
                throw std::invalid_argument("right-boundary vertex needs the left occupation");
            out.top = u < right_boundary_occupy_prob(in.left, params) ? 1 : 0;
            return out;
    }
    throw std::logic_error("unreachable vertex kind");
}

Configuration step_configuration(const DownRightPath& base, long long step,
                                 const Configuration& tau, const StripParams& params,
                                 const CounterRng& rng, std::uint64_t replica) {
    DownRightPath cur = translate(base, step);
    const auto slab = slab_vertices(cur, translate(cur, 1));
    Configuration out = tau;
    for (const SlabVertex& v : slab) {
        const LocalMove m = move_for_diag(v.diag, base.N);
        assert(move_applicable(cur, m));
        const double u = rng.uniform(replica, static_cast<std::uint64_t>(step), v.x(), v.y());
        switch (v.kind) {
            case VertexKind::LeftBoundary:
                out[0] = sample_vertex(v.kind, {out[0], -1}, params, u).right;
                break;
            case VertexKind::RightBoundary:
                out[base.N - 1] = sample_vertex(v.kind, {-1, out[base.N - 1]}, params, u).top;
                break;
            case VertexKind::Bulk: {
                const int i = v.diag; // bulk corner between coordinates i and i+1
                const OutgoingEdges o =
                    sample_vertex(v.kind, {out[i], out[i - 1]}, params, u);
                out[i - 1] = o.top;
                out[i] = o.right;
                break;
            }
        }
        cur = apply_local_move(cur, m);
    }
    assert(cur == translate(base, step + 1));
    return out;
}

std::vector<Configuration> evolve(const DownRightPath& path, const Configuration& init,
                                  const StripParams& params, long long steps,
                                  const CounterRng& rng, std::uint64_t replica) {
    if (static_cast<int>(init.size()) != path.N)
        throw std::invalid_argument("initial configuration length must equal the path width");
    std::vector<Configuration> traj;
    traj.reserve(static_cast<size_t>(steps) + 1);
    traj.push_back(init);
    for (long long k = 0; k < steps; ++k)
        traj.push_back(step_configuration(path, k, traj.back(), params, rng, replica));
    return traj;
}

std::array<double, 3> colored_left_row(int bottom, const StripParams& p1,
                                       const StripParams& p2) {
    switch (bottom) {
        case 0: return {1.0 - p2.a, p2.a - p1.a, p1.a};
        case 1: return {p2.c, 1.0 - p2.c - p1.a, p1.a};
        case 2: return {p2.c, p1.c - p2.c, 1.0 - p1.c};
    }
    throw std::invalid_argument("color must be 0, 1 or 2");
}

std::array<double, 3> colored_right_row(int left, const StripParams& p1,
                                        const StripParams& p2) {
    switch (left) {
        case 0: return {1.0 - p2.d, p2.d - p1.d, p1.d};
        case 1: return {p2.b, 1.0 - p2.b - p1.d, p1.d};
        case 2: return {p2.b, p1.b - p2.b, 1.0 - p1.b};
    }
    throw std::invalid_argument("color must be 0, 1 or 2");
}

std::vector<std::pair<std::pair<int, int>, double>>
colored_bulk_law(int bottom, int left, const StripParams& p1) {
    if (bottom == left) return {{{bottom, left}, 1.0}};
    if (bottom < left) // the larger color arrived horizontally
        return {{{bottom, left}, p1.theta2}, {{left, bottom}, 1.0 - p1.theta2}};
    return {{{bottom, left}, p1.theta1}, {{left, bottom}, 1.0 - p1.theta1}};
}

void require_coupling(const StripParams& p1, const StripParams& p2) {
    require_ergodic(p1);
    require_ergodic(p2);
    if (p1.theta1 != p2.theta1 || p1.theta2 != p2.theta2)
        throw precondition_error("coupled models must share the bulk parameters theta1, theta2");
    std::ostringstream os;
    if (!(p1.a <= p2.a)) os << "requires a <= a'";
    else if (!(p1.b >= p2.b)) os << "requires b >= b'";
    else if (!(p1.c >= p2.c)) os << "requires c >= c'";
    else if (!(p1.d <= p2.d)) os << "requires d <= d'";
    else if (!(p2.a + p1.c < 1.0)) os << "requires a' + c < 1";
    else if (!(p1.b + p2.d < 1.0)) os << "requires b + d' < 1";
    else return;
    throw precondition_error("coupling hypothesis violated: " + os.str());
}

namespace {

int sample_row(const std::array<double, 3>& row, double u) {
    for (int k = 0; k < 3; ++k) {
        u -= row[k];
        if (u < 0) return k;
    }
    return 2;
}

} // namespace

ColoredConfiguration colored_step(const DownRightPath& base, long long step,
                                  const ColoredConfiguration& eta, const StripParams& p1,
                                  const StripParams& p2, const CounterRng& rng,
                                  std::uint64_t replica) {
    DownRightPath cur = translate(base, step);
    const auto slab = slab_vertices(cur, translate(cur, 1));
    ColoredConfiguration out = eta;
    for (const SlabVertex& v : slab) {
        const LocalMove m = move_for_diag(v.diag, base.N);
        const double u = rng.uniform(replica, static_cast<std::uint64_t>(step), v.x(), v.y());
        switch (v.kind) {
            case VertexKind::LeftBoundary:
                out[0] = static_cast<std::uint8_t>(
                    sample_row(colored_left_row(out[0], p1, p2), u));
                break;
            case VertexKind::RightBoundary:
                out[base.N - 1] = static_cast<std::uint8_t>(
                    sample_row(colored_right_row(out[base.N - 1], p1, p2), u));
                break;
            case VertexKind::Bulk: {
                const int i = v.diag;
                double uu = u;
                const auto law = colored_bulk_law(out[i], out[i - 1], p1);
                std::pair<int, int> pick = law.back().first;
                for (const auto& [edges, p] : law) {
                    uu -= p;
                    if (uu < 0) {
                        pick = edges;
                        break;
                    }
                }
                out[i - 1] = static_cast<std::uint8_t>(pick.first);
                out[i] = static_cast<std::uint8_t>(pick.second);
                break;
            }
        }
        cur = apply_local_move(cur, m);
    }
    return out;
}

std::vector<ColoredConfiguration>
evolve_coupled(const DownRightPath& path, const Configuration& init1,
               const Configuration& init2, const StripParams& p1, const StripParams& p2,
               long long steps, const CounterRng& rng, std::uint64_t replica) {
    require_coupling(p1, p2);
    if (static_cast<int>(init1.size()) != path.N || static_cast<int>(init2.size()) != path.N)
        throw std::invalid_argument("initial configuration length must equal the path width");
    ColoredConfiguration eta(init1.size());
    for (size_t i = 0; i < init1.size(); ++i) {
        if (init1[i] > init2[i])
            throw precondition_error("requires init1 <= init2 pointwise");
        eta[i] = static_cast<std::uint8_t>(init1[i] + init2[i]);
    }
    std::vector<ColoredConfiguration> traj;
    traj.reserve(static_cast<size_t>(steps) + 1);
    traj.push_back(eta);
    for (long long k = 0; k < steps; ++k)
        traj.push_back(colored_step(path, k, traj.back(), p1, p2, rng, replica));
    return traj;
}

} // namespace sixv
