#include "doctest.h"

#include <bit>
#include <cmath>
#include <random>

#include "sixv/dynamics.hpp"
#include "sixv/exact.hpp"

using namespace sixv;

namespace {

const StripParams kRun{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};

StripParams random_params(std::mt19937& gen) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    StripParams sp;
    sp.a = u(gen);
    sp.b = u(gen);
    sp.c = u(gen);
    sp.d = u(gen);
    sp.theta1 = u(gen);
    sp.theta2 = u(gen);
    return sp;
}

DownRightPath random_path(std::mt19937& gen, int N) {
    std::vector<EdgeKind> labels(N);
    for (auto& l : labels) l = (gen() & 1) ? EdgeKind::Up : EdgeKind::Right;
    return build_path(N, labels, 0);
}

} // namespace

TEST_CASE("translation kernels are row-stochastic") {
    std::mt19937 gen(7);
    for (int N = 1; N <= 4; ++N)
        for (int trial = 0; trial < 5; ++trial) {
            const Kernel K = transition_matrix(random_path(gen, N), random_params(gen));
            for (int r = 0; r < K.rows(); ++r) {
                CHECK(K.row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(K.row(r).minCoeff() >= 0.0);
            }
        }
}

TEST_CASE("N=1 kernel matches the two-boundary-vertex enumeration and Monte Carlo") {
    const DownRightPath p = horizontal_path(1);
    const Kernel K = transition_matrix(p, kRun);
    // independent oracle: left boundary fixes the intermediate edge, the
    // right boundary turns it into the new configuration
    double oracle[2][2];
    for (int tau = 0; tau <= 1; ++tau) {
        const double pe = left_boundary_occupy_prob(tau, kRun);
        for (int to = 0; to <= 1; ++to) {
            const double p1 = right_boundary_occupy_prob(1, kRun);
            const double p0 = right_boundary_occupy_prob(0, kRun);
            oracle[tau][to] = pe * (to ? p1 : 1 - p1) + (1 - pe) * (to ? p0 : 1 - p0);
        }
    }
    CHECK(oracle[0][1] == doctest::Approx(0.45).epsilon(1e-15)); // a(1-b) + (1-a)d
    CHECK(oracle[1][0] == doctest::Approx(0.50).epsilon(1e-15)); // c(1-d) + (1-c)b
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(K(i, j) == doctest::Approx(oracle[i][j]).epsilon(1e-13));

    const CounterRng rng(5150);
    const int n = 1000000;
    int hits = 0;
    for (int rep = 0; rep < n; ++rep)
        hits += step_configuration(p, 0, {0}, kRun, rng, static_cast<std::uint64_t>(rep))[0];
    const double freq = static_cast<double>(hits) / n;
    const double sigma = std::sqrt(K(0, 1) * (1 - K(0, 1)) / n);
    CHECK(std::fabs(freq - K(0, 1)) < 4 * sigma);
}

TEST_CASE("translation kernel equals the composition of its local-move kernels") {
    std::mt19937 gen(99);
    for (int N = 1; N <= 4; ++N)
        for (int trial = 0; trial < 4; ++trial) {
            const DownRightPath p = random_path(gen, N);
            const StripParams sp = random_params(gen);
            const Kernel direct = transition_matrix(p, sp);
            Kernel composed = Kernel::Identity(1 << N, 1 << N);
            DownRightPath cur = p;
            for (const LocalMove& m : decompose_translation(p)) {
                composed = composed * move_kernel(cur, m, sp);
                cur = apply_local_move(cur, m);
            }
            CHECK((direct - composed).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("two-state stationary distribution is (s,p)/(p+s)") {
    const double p = 0.37, s = 0.22;
    Kernel K(2, 2);
    K << 1 - p, p, s, 1 - s;
    const Distribution st = stationary_exact(K);
    CHECK(st(0) == doctest::Approx(s / (p + s)).epsilon(1e-13));
    CHECK(st(1) == doctest::Approx(p / (p + s)).epsilon(1e-13));
}

TEST_CASE("ASEP generator entries and stationary point at N=1,2") {
    const AsepRates rates{0.8, 0.6, 0.4, 0.64, 0.4, 1.0};
    const Generator Q2 = asep_generator(2, rates);
    CHECK(Q2(0, 1) == doctest::Approx(rates.alpha)); // 00 -> 10
    CHECK(Q2(0, 2) == doctest::Approx(rates.delta)); // 00 -> 01
    CHECK(Q2(1, 2) == doctest::Approx(rates.R));     // 10 -> 01
    CHECK(Q2(2, 1) == doctest::Approx(rates.L));     // 01 -> 10
    for (int r = 0; r < 4; ++r) CHECK(Q2.row(r).sum() == doctest::Approx(0.0).epsilon(1e-14));

    const Distribution pi = stationary_exact(asep_generator(1, rates));
    // two-state balance: pi(1) = (alpha+delta)/(alpha+beta+gamma+delta) = 1.44/2.44
    CHECK(pi(1) == doctest::Approx(1.44 / 2.44).epsilon(1e-13));
    CHECK(pi(1) == doctest::Approx(0.59016393442622950).epsilon(1e-12));
}

TEST_CASE("translated paths share the same transition kernel") {
    const DownRightPath p = build_path(3, parse_labels("URU"), 0);
    const Kernel K0 = transition_matrix(p, kRun);
    const Kernel K1 = transition_matrix(translate(p, 1), kRun);
    CHECK((K0 - K1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("width cap and descending targets are rejected") {
    CHECK_THROWS_AS(transition_matrix(horizontal_path(13), kRun), precondition_error);
    const DownRightPath p = build_path(2, parse_labels("UR"), 0);
    // the inverse of a right-boundary move would lower the path
    CHECK_THROWS_AS(
        transition_matrix_t<double>(translate(p, 1), p, to_strip_t(kRun)),
        std::invalid_argument);
}

TEST_CASE("tilting verification aborts near the singular parameter set") {
    // a*b/(c*d) = 1 = q^0 exactly
    const StripParams singular{0.3, 0.4, 0.3, 0.4, 0.2, 0.5};
    CHECK_THROWS_AS(verify_tilting(singular, 2), precondition_error);
}

TEST_CASE("conserved particle number makes the reflecting chain reducible") {
    StripParams sp = kRun;
    sp.a = sp.b = sp.c = sp.d = 0;
    const Kernel K = transition_matrix(horizontal_path(2), sp);
    CHECK_THROWS_AS(stationary_exact(K), reducible_error);
}

TEST_CASE("rational stationary solve matches the closed form exactly") {
    MatrixT<Rational> K(2);
    const Rational p(37, 100), s(22, 100);
    K.at(0, 0) = 1 - p;
    K.at(0, 1) = p;
    K.at(1, 0) = s;
    K.at(1, 1) = 1 - s;
    const auto st = stationary_rational(K, false);
    CHECK(st[0] == Rational(22, 59));
    CHECK(st[1] == Rational(37, 59));
}

TEST_CASE("scaling limit: (A_eps - I)/eps converges to the generator at first order") {
    const AsepRates rates{0.8, 0.6, 0.4, 0.64, 0.4, 1.0};
    for (int N : {2, 3}) {
        const auto rep = scaling_limit_check(rates, N, {1e-2, 1e-3, 1e-4});
        REQUIRE(rep.points.size() == 3);
        for (size_t i = 0; i + 1 < rep.points.size(); ++i)
            CHECK(rep.points[i].err > rep.points[i + 1].err);
        for (double ratio : rep.decade_ratios) {
            CHECK(ratio > 8.0);
            CHECK(ratio < 12.0);
        }
    }
    CHECK_THROWS_AS(scaling_limit_check(rates, 2, {2.0}), precondition_error);
}

TEST_CASE("tilting identity at N=1 gives mu(1) = 9/19") {
    const auto rep = verify_tilting(kRun, 1);
    CHECK(rep.r == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(rep.max_abs_error < 1e-12);
    const Distribution mu = stationary_exact(transition_matrix(horizontal_path(1), kRun));
    CHECK(mu(1) == doctest::Approx(9.0 / 19.0).epsilon(1e-13));
    CHECK(mu(1) == doctest::Approx(0.47368421052631579).epsilon(1e-12));
}

TEST_CASE("tilting identity holds for random tilting-regime parameters") {
    std::mt19937 gen(4242);
    std::uniform_real_distribution<double> u(0.08, 0.9);
    int done = 0;
    while (done < 8) {
        StripParams sp = random_params(gen);
        if (sp.theta1 >= sp.theta2) std::swap(sp.theta1, sp.theta2);
        if (sp.theta1 == sp.theta2 || sp.b + sp.d >= 1) continue;
        if (nonsingularity_margin(sp) < 1e-6) continue;
        const int N = 1 + done % 4;
        const auto rep = verify_tilting(sp, N);
        CHECK(rep.max_abs_error < 1e-10);
        ++done;
    }
}

TEST_CASE("particle-hole duality conjugates the kernel") {
    StripParams dual = kRun;
    std::swap(dual.theta1, dual.theta2);
    std::swap(dual.a, dual.c);
    std::swap(dual.b, dual.d);
    for (const char* labels : {"UUU", "URU"}) {
        const DownRightPath p = build_path(3, parse_labels(labels), 1);
        const Kernel K = transition_matrix(p, kRun);
        const Kernel Kd = transition_matrix(p, dual);
        const int mask = (1 << 3) - 1;
        for (int s = 0; s <= mask; ++s)
            for (int t = 0; t <= mask; ++t)
                CHECK(Kd(s, t) == doctest::Approx(K(~s & mask, ~t & mask)).epsilon(1e-13));
    }
}

TEST_CASE("empirical one-step law matches the kernel row within 4 sigma") {
    const DownRightPath p = horizontal_path(3);
    const Kernel K = transition_matrix(p, kRun);
    const Configuration start{1, 0, 1};
    const int s0 = 0b101;
    const CounterRng rng(808);
    const int n = 100000;
    std::vector<int> counts(8, 0);
    for (int rep = 0; rep < n; ++rep) {
        const Configuration out =
            step_configuration(p, 0, start, kRun, rng, static_cast<std::uint64_t>(rep));
        int idx = 0;
        for (int i = 0; i < 3; ++i) idx |= out[i] << i;
        ++counts[idx];
    }
    for (int t = 0; t < 8; ++t) {
        const double pr = K(s0, t);
        const double sigma = std::sqrt(std::max(pr * (1 - pr) / n, 1e-12));
        CHECK(std::fabs(static_cast<double>(counts[t]) / n - pr) < 4 * sigma);
    }
}

TEST_CASE("long-run occupation frequencies approach the exact stationary measure") {
    const DownRightPath p = horizontal_path(3);
    const Distribution mu = stationary_exact(transition_matrix(p, kRun));
    const CounterRng rng(1618);
    const long long steps = 10000;
    const int replicas = 1000;
    std::vector<double> freq(8, 0.0);
    long long samples = 0;
    for (int rep = 0; rep < replicas; ++rep) {
        Configuration tau(3, 0);
        for (long long k = 0; k < steps; ++k) {
            tau = step_configuration(p, k, tau, kRun, rng, static_cast<std::uint64_t>(rep));
            if (k >= steps / 2) {
                int idx = 0;
                for (int i = 0; i < 3; ++i) idx |= tau[i] << i;
                freq[idx] += 1.0;
                ++samples;
            }
        }
    }
    double tv = 0;
    for (int s = 0; s < 8; ++s) tv += std::fabs(freq[s] / samples - mu(s));
    CHECK(tv / 2 < 0.02);
}

TEST_CASE("colored kernel projects onto both single-species kernels") {
    const StripParams p1{0.3, 0.5, 0.45, 0.1, 0.2, 0.5};
    const StripParams p2{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
    for (int N = 1; N <= 3; ++N) {
        const DownRightPath path = horizontal_path(N);
        const Eigen::MatrixXd Kc = colored_transition_matrix(path, p1, p2);
        const Kernel K1 = transition_matrix(path, p1);
        const Kernel K2 = transition_matrix(path, p2);
        int pow3 = 1;
        for (int i = 0; i < N; ++i) pow3 *= 3;
        for (int s = 0; s < pow3; ++s) {
            CHECK(Kc.row(s).sum() == doctest::Approx(1.0).epsilon(1e-12));
            std::vector<double> proj1(1 << N, 0.0), proj2(1 << N, 0.0);
            for (int t = 0; t < pow3; ++t) {
                proj1[project_colored_state(t, N, 2)] += Kc(s, t);
                proj2[project_colored_state(t, N, 1)] += Kc(s, t);
            }
            const int s1 = project_colored_state(s, N, 2);
            const int s2 = project_colored_state(s, N, 1);
            for (int t = 0; t < (1 << N); ++t) {
                CHECK(std::fabs(proj1[t] - K1(s1, t)) < 1e-12);
                CHECK(std::fabs(proj2[t] - K2(s2, t)) < 1e-12);
            }
        }
    }
}
