#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sixv/dynamics.hpp"
#include "sixv/lattice.hpp"
#include "sixv/params.hpp"

namespace sixv {

/// Row-stochastic transition matrix over {0,1}^N, state index = little-endian
/// bit encoding of tau (tau_1 is bit 0).
using Kernel = Eigen::MatrixXd;
/// Conservative rate matrix: nonnegative off-diagonal, zero row sums.
using Generator = Eigen::MatrixXd;
using Distribution = Eigen::VectorXd;

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kWidthCap = 12;

class reducible_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Minimal dense row-major matrix so kernels can also be built over exact
/// rational scalars.
template <class S>
struct MatrixT {
    int n = 0;
    std::vector<S> a;
    explicit MatrixT(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, S(0)) {}
    S* row(int r) { return a.data() + static_cast<size_t>(r) * n; }
    const S* row(int r) const { return a.data() + static_cast<size_t>(r) * n; }
    S& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    const S& at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
    static MatrixT identity(int dim) {
        MatrixT m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = S(1);
        return m;
    }
};

template <class S>
struct StripT {
    S a, b, c, d, theta1, theta2;
};

inline StripT<double> to_strip_t(const StripParams& sp) {
    return {sp.a, sp.b, sp.c, sp.d, sp.theta1, sp.theta2};
}

namespace detail {

template <class S>
void check_unit_interval(const StripT<S>& sp) {
    for (S v : {sp.a, sp.b, sp.c, sp.d, sp.theta1, sp.theta2})
        if (v < S(0) || v > S(1))
            throw precondition_error("vertex weights require all parameters in [0,1]");
}

// One sampled vertex as a stochastic map on the intermediate configuration.
// Left boundary acts on coordinate 1, right boundary on coordinate N, a bulk
// vertex at diagonal i on coordinates (i, i+1).
template <class S>
void apply_left_gate(MatrixT<S>& K, int /*N*/, const StripT<S>& sp) {
    const int n = K.n;
    for (int r = 0; r < n; ++r) {
        S* row = K.row(r);
        for (int s = 0; s < n; ++s) {
            if (s & 1) continue;
            const S t0 = row[s], t1 = row[s | 1];
            row[s] = (S(1) - sp.a) * t0 + sp.c * t1;
            row[s | 1] = sp.a * t0 + (S(1) - sp.c) * t1;
        }
    }
}

template <class S>
void apply_right_gate(MatrixT<S>& K, int N, const StripT<S>& sp) {
    const int n = K.n;
    const int bit = 1 << (N - 1);
    for (int r = 0; r < n; ++r) {
        S* row = K.row(r);
        for (int s = 0; s < n; ++s) {
            if (s & bit) continue;
            const S t0 = row[s], t1 = row[s | bit];
            row[s] = (S(1) - sp.d) * t0 + sp.b * t1;
            row[s | bit] = sp.d * t0 + (S(1) - sp.b) * t1;
        }
    }
}

template <class S>
void apply_bulk_gate(MatrixT<S>& K, int i, const StripT<S>& sp) {
    const int n = K.n;
    const int lo = 1 << (i - 1); // coordinate i
    const int hi = 1 << i;       // coordinate i+1
    for (int r = 0; r < n; ++r) {
        S* row = K.row(r);
        for (int s = 0; s < n; ++s) {
            if ((s & lo) == 0 || (s & hi) != 0) continue;
            const int s10 = s;          // particle at i
            const int s01 = (s ^ lo) | hi; // particle at i+1
            const S t10 = row[s10], t01 = row[s01];
            row[s10] = (S(1) - sp.theta2) * t10 + sp.theta1 * t01;
            row[s01] = sp.theta2 * t10 + (S(1) - sp.theta1) * t01;
        }
    }
}

template <class S>
void apply_vertex_gate(MatrixT<S>& K, const SlabVertex& v, int N, const StripT<S>& sp) {
    switch (v.kind) {
        case VertexKind::LeftBoundary: apply_left_gate(K, N, sp); break;
        case VertexKind::RightBoundary: apply_right_gate(K, N, sp); break;
        case VertexKind::Bulk: apply_bulk_gate(K, v.diag, sp); break;
    }
}

} // namespace detail

/// Exact one-step kernel from `path` to `target`, obtained by marginalizing
/// the sampled vertices between them in raster order.
template <class S>
MatrixT<S> transition_matrix_t(const DownRightPath& path, const DownRightPath& target,
                               const StripT<S>& sp, int cap = kWidthCap) {
    detail::check_unit_interval(sp);
    if (path.N > cap)
        throw precondition_error("path width exceeds the exact-enumeration cap");
    const auto slab = slab_vertices(path, target); // validates target >= path
    auto K = MatrixT<S>::identity(1 << path.N);
    DownRightPath cur = path;
    for (const SlabVertex& v : slab) {
        const LocalMove m = v.diag == 0        ? LocalMove{MoveKind::LeftBoundary, 0}
                            : v.diag == path.N ? LocalMove{MoveKind::RightBoundary, path.N}
                                               : LocalMove{MoveKind::Bulk, v.diag};
        if (!move_applicable(cur, m))
            throw std::logic_error("slab sweep out of order");
        detail::apply_vertex_gate(K, v, path.N, sp);
        cur = apply_local_move(cur, m);
    }
    return K;
}

Kernel transition_matrix(const DownRightPath& path, const StripParams& sp,
                         int cap = kWidthCap);
Kernel transition_matrix(const DownRightPath& path, const std::vector<LocalMove>& moves,
                         const StripParams& sp, int cap = kWidthCap);
/// Elementary kernel of a single local move.
Kernel move_kernel(const DownRightPath& path, const LocalMove& move, const StripParams& sp);

/// Unique fixed probability vector of a row-stochastic matrix, or of a
/// conservative generator (detected by its zero row sums). Throws
/// reducible_error when the fixed space has dimension > 1.
Distribution stationary_exact(const Eigen::MatrixXd& kernel_or_generator);

/// Open ASEP generator on {1..N}: injection alpha/delta, ejection
/// gamma/beta, hops L left and R right, exclusion enforced.
Generator asep_generator(int N, const AsepRates& rates);

template <class S>
MatrixT<S> asep_generator_t(int N, const S& alpha, const S& beta, const S& gamma,
                            const S& delta, const S& L, const S& R) {
    const int dim = 1 << N;
    MatrixT<S> Q(dim);
    auto add = [&](int from, int to, const S& rate) {
        Q.at(from, to) += rate;
        Q.at(from, from) -= rate;
    };
    for (int s = 0; s < dim; ++s) {
        if (!(s & 1)) add(s, s | 1, alpha);
        else add(s, s & ~1, gamma);
        const int last = 1 << (N - 1);
        if (!(s & last)) add(s, s | last, delta);
        else add(s, s & ~last, beta);
        for (int i = 0; i + 1 < N; ++i) {
            const int lo = 1 << i, hi = 1 << (i + 1);
            if ((s & lo) && !(s & hi)) add(s, (s ^ lo) | hi, R);
            if (!(s & lo) && (s & hi)) add(s, (s ^ hi) | lo, L);
        }
    }
    return Q;
}

/// Exact stationary vector over rationals; throws reducible_error when the
/// fixed space is not one-dimensional. `generator` switches the fixed-point
/// equation from K^T x = x to Q^T x = 0.
std::vector<Rational> stationary_rational(const MatrixT<Rational>& M, bool generator);

struct ScalingPoint {
    double eps = 0;
    double err = 0; // max-norm of (A_eps - I)/eps - Q
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    std::vector<double> decade_ratios; // err(eps_k) / err(eps_{k+1})
};

/// First-order convergence check of the strip kernel to the ASEP generator
/// under the weight scaling (a,b,c,d,theta1,theta2) = eps*(alpha..delta,L,R).
ScalingReport scaling_limit_check(const AsepRates& rates, int N,
                                  const std::vector<double>& eps_list);

struct TiltingReport {
    int N = 0;
    double r = 0;
    double max_abs_error = 0;
    DerivedParams derived;
};

/// Compares the strip stationary measure on a horizontal path against the
/// r^{sum tau}-tilted ASEP stationary measure, both computed by brute force.
TiltingReport verify_tilting(const StripParams& sp, int N);

/// Colored kernel of the two-species coupling over {0,1,2}^N (little-endian
/// base-3 state index).
Eigen::MatrixXd colored_transition_matrix(const DownRightPath& path, const StripParams& p1,
                                          const StripParams& p2, int cap = 6);

/// Project a colored state to the tight (colors >= 2) or loose (>= 1)
/// marginal's bit encoding.
int project_colored_state(int colored_index, int N, int level);

} // namespace sixv
