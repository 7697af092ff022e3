#include "sixv/exact.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace sixv {

namespace {

Kernel to_eigen(const MatrixT<double>& M) {
    Kernel K(M.n, M.n);
    for (int r = 0; r < M.n; ++r)
        for (int c = 0; c < M.n; ++c) K(r, c) = M.at(r, c);
    return K;
}

} // namespace

Kernel transition_matrix(const DownRightPath& path, const StripParams& sp, int cap) {
    return to_eigen(transition_matrix_t(path, translate(path, 1), to_strip_t(sp), cap));
}

Kernel transition_matrix(const DownRightPath& path, const std::vector<LocalMove>& moves,
                         const StripParams& sp, int cap) {
    DownRightPath target = path;
    for (const LocalMove& m : moves) target = apply_local_move(target, m);
    return to_eigen(transition_matrix_t(path, target, to_strip_t(sp), cap));
}

Kernel move_kernel(const DownRightPath& path, const LocalMove& move, const StripParams& sp) {
    if (!move_applicable(path, move))
        throw std::invalid_argument("local move is not applicable to this path");
    auto K = MatrixT<double>::identity(1 << path.N);
    const StripT<double> st = to_strip_t(sp);
    detail::check_unit_interval(st);
    switch (move.kind) {
        case MoveKind::LeftBoundary: detail::apply_left_gate(K, path.N, st); break;
        case MoveKind::RightBoundary: detail::apply_right_gate(K, path.N, st); break;
        case MoveKind::Bulk: detail::apply_bulk_gate(K, move.position, st); break;
    }
    return to_eigen(K);
}

Distribution stationary_exact(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (M.cols() != n) throw std::invalid_argument("matrix must be square");
    double max_row_dev1 = 0, max_row_dev0 = 0;
    for (int r = 0; r < n; ++r) {
        const double rs = M.row(r).sum();
        max_row_dev1 = std::max(max_row_dev1, std::fabs(rs - 1.0));
        max_row_dev0 = std::max(max_row_dev0, std::fabs(rs));
    }
    const bool is_kernel = max_row_dev1 < 1e-9;
    if (!is_kernel && max_row_dev0 >= 1e-9)
        throw std::invalid_argument(
            "input is neither row-stochastic (rows sum to 1) nor conservative (rows sum to 0)");

    Eigen::MatrixXd A = M.transpose();
    if (is_kernel) A -= Eigen::MatrixXd::Identity(n, n);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-9);
    const int null_dim = n - static_cast<int>(lu.rank());
    if (null_dim > 1) {
        std::ostringstream os;
        os << "reducible input: fixed space has dimension " << null_dim
           << ", stationary measure is not unique";
        throw reducible_error(os.str());
    }

    Eigen::MatrixXd B = A;
    B.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd x = B.partialPivLu().solve(rhs);

    for (int i = 0; i < n; ++i) {
        if (x(i) < 0) {
            if (x(i) < -1e-9) throw std::runtime_error("stationary solve produced negative mass");
            x(i) = 0;
        }
    }
    x /= x.sum();
    const double residual = (A * x).lpNorm<Eigen::Infinity>();
    if (residual > 1e-12 * std::max(1.0, A.lpNorm<Eigen::Infinity>()))
        throw std::runtime_error("stationary solve residual exceeds 1e-12");
    return x;
}

Generator asep_generator(int N, const AsepRates& rates) {
    if (!(rates.alpha > 0) || !(rates.beta > 0) || rates.gamma < 0 || rates.delta < 0 ||
        rates.L < 0 || rates.R < 0)
        throw precondition_error("requires alpha, beta > 0 and gamma, delta, L, R >= 0");
    const auto Q = asep_generator_t<double>(N, rates.alpha, rates.beta, rates.gamma,
                                            rates.delta, rates.L, rates.R);
    return to_eigen(Q);
}

std::vector<Rational> stationary_rational(const MatrixT<Rational>& M, bool generator) {
    const int n = M.n;
    // A = transpose(K - I) or transpose(Q)
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i][j] = M.at(j, i);
            if (!generator && i == j) A[i][j] -= 1;
        }
    std::vector<int> pivot_col_of_row(n, -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int pr = -1;
        for (int r = row; r < n; ++r)
            if (A[r][col] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(A[row], A[pr]);
        const Rational piv = A[row][col];
        for (int j = 0; j < n; ++j) A[row][j] /= piv;
        for (int r = 0; r < n; ++r) {
            if (r == row || A[r][col] == 0) continue;
            const Rational factor = A[r][col];
            for (int j = 0; j < n; ++j) A[r][j] -= factor * A[row][j];
        }
        pivot_col_of_row[row] = col;
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (int r = 0; r < row; ++r) is_pivot[pivot_col_of_row[r]] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    if (free_cols.size() != 1) {
        std::ostringstream os;
        os << "reducible input: fixed space has dimension " << free_cols.size();
        throw reducible_error(os.str());
    }
    std::vector<Rational> x(n, Rational(0));
    x[free_cols[0]] = 1;
    for (int r = 0; r < row; ++r) x[pivot_col_of_row[r]] = -A[r][free_cols[0]];
    Rational sum = 0;
    for (const Rational& v : x) sum += v;
    if (sum == 0) throw std::runtime_error("stationary vector has zero total mass");
    for (Rational& v : x) v /= sum;
    return x;
}

ScalingReport scaling_limit_check(const AsepRates& rates, int N,
                                  const std::vector<double>& eps_list) {
    const Generator Q = asep_generator(N, rates);
    const DownRightPath path = horizontal_path(N);
    const int dim = 1 << N;
    ScalingReport rep;
    for (double eps : eps_list) {
        StripParams sp{rates.alpha * eps, rates.beta * eps,  rates.gamma * eps,
                       rates.delta * eps, rates.L * eps,     rates.R * eps};
        for (double w : {sp.a, sp.b, sp.c, sp.d, sp.theta1, sp.theta2})
            if (w >= 1.0) {
                std::ostringstream os;
                os << "infeasible eps = " << eps << ": scaled vertex weight " << w
                   << " must stay below 1";
                throw precondition_error(os.str());
            }
        const Kernel A = transition_matrix(path, sp);
        const Eigen::MatrixXd err =
            (A - Eigen::MatrixXd::Identity(dim, dim)) / eps - Q;
        rep.points.push_back({eps, err.cwiseAbs().maxCoeff()});
    }
    for (size_t i = 0; i + 1 < rep.points.size(); ++i)
        rep.decade_ratios.push_back(rep.points[i].err / rep.points[i + 1].err);
    return rep;
}

TiltingReport verify_tilting(const StripParams& sp, int N) {
    require_tilting_regime(sp);
    if (nonsingularity_margin(sp) < 1e-9)
        throw precondition_error(
            "singular case: a*b/(c*d) is within 1e-9 of a power q^l, the matrix-product "
            "normalizer may vanish");
    TiltingReport rep;
    rep.N = N;
    rep.derived = derive_params(sp);
    rep.r = rep.derived.r;

    const Distribution mu = stationary_exact(transition_matrix(horizontal_path(N), sp));
    const Generator Q = asep_generator(
        N, AsepRates{rep.derived.alpha, rep.derived.beta, rep.derived.gamma,
                     rep.derived.delta, rep.derived.q, 1.0});
    const Distribution pi = stationary_exact(Q);

    const int dim = 1 << N;
    double Z = 0;
    for (int s = 0; s < dim; ++s)
        Z += std::pow(rep.r, std::popcount(static_cast<unsigned>(s))) * pi(s);
    double err = 0;
    for (int s = 0; s < dim; ++s) {
        const double tilted =
            std::pow(rep.r, std::popcount(static_cast<unsigned>(s))) * pi(s) / Z;
        err = std::max(err, std::fabs(mu(s) - tilted));
    }
    rep.max_abs_error = err;
    return rep;
}

namespace {

int pow3(int k) {
    int p = 1;
    while (k-- > 0) p *= 3;
    return p;
}

} // namespace

Eigen::MatrixXd colored_transition_matrix(const DownRightPath& path, const StripParams& p1,
                                          const StripParams& p2, int cap) {
    require_coupling(p1, p2);
    if (path.N > cap)
        throw precondition_error("path width exceeds the colored enumeration cap");
    const int N = path.N;
    const int dim = pow3(N);
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(dim, dim);
    const auto slab = slab_vertices(path, translate(path, 1));
    Eigen::VectorXd tmp(dim);
    for (const SlabVertex& v : slab) {
        for (int r = 0; r < dim; ++r) {
            tmp.setZero();
            for (int s = 0; s < dim; ++s) {
                const double w = K(r, s);
                if (w == 0) continue;
                if (v.kind == VertexKind::LeftBoundary) {
                    const int c0 = s % 3;
                    const auto row = colored_left_row(c0, p1, p2);
                    for (int k = 0; k < 3; ++k)
                        if (row[k] != 0) tmp(s + (k - c0)) += w * row[k];
                } else if (v.kind == VertexKind::RightBoundary) {
                    const int place = pow3(N - 1);
                    const int cN = (s / place) % 3;
                    const auto row = colored_right_row(cN, p1, p2);
                    for (int k = 0; k < 3; ++k)
                        if (row[k] != 0) tmp(s + (k - cN) * place) += w * row[k];
                } else {
                    const int pl = pow3(v.diag - 1);  // coordinate i, the left edge
                    const int pb = pow3(v.diag);      // coordinate i+1, the bottom edge
                    const int ci = (s / pl) % 3;
                    const int cj = (s / pb) % 3;
                    for (const auto& [edges, p] : colored_bulk_law(cj, ci, p1)) {
                        const int s2 = s + (edges.first - ci) * pl + (edges.second - cj) * pb;
                        tmp(s2) += w * p;
                    }
                }
            }
            K.row(r) = tmp.transpose();
        }
    }
    return K;
}

int project_colored_state(int colored_index, int N, int level) {
    int bits = 0;
    for (int j = 0; j < N; ++j) {
        if (colored_index % 3 >= level) bits |= 1 << j;
        colored_index /= 3;
    }
    return bits;
}

} // namespace sixv
