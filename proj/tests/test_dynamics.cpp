#include "doctest.h"

#include <cmath>

#include "sixv/dynamics.hpp"

using namespace sixv;

namespace {
const StripParams kRun{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
}

TEST_CASE("bulk vertex law conserves arrows and is deterministic on equal inputs") {
    for (int b = 0; b <= 1; ++b)
        for (int l = 0; l <= 1; ++l) {
            double total = 0;
            for (const auto& [edges, p] : bulk_vertex_law(b, l, kRun)) {
                CHECK(edges.first + edges.second == b + l);
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
        }
    const auto both = bulk_vertex_law(1, 1, kRun);
    REQUIRE(both.size() == 1);
    CHECK(both[0].first == std::pair<int, int>{1, 1});
    CHECK(both[0].second == 1.0);
}

TEST_CASE("boundary vertex frequencies match their stated probabilities") {
    const CounterRng rng(2024);
    const int n = 100000;
    int left_created = 0, right_kept = 0;
    for (int i = 0; i < n; ++i) {
        const double u1 = rng.uniform(0, i, 0, 0, 0);
        const double u2 = rng.uniform(1, i, 0, 0, 0);
        left_created += sample_vertex(VertexKind::LeftBoundary, {0, -1}, kRun, u1).right;
        right_kept += sample_vertex(VertexKind::RightBoundary, {-1, 1}, kRun, u2).top;
    }
    // left boundary: empty bottom edge occupied with probability a
    const double fa = static_cast<double>(left_created) / n;
    const double sa = std::sqrt(kRun.a * (1 - kRun.a) / n);
    CHECK(std::fabs(fa - kRun.a) < 4 * sa);
    // right boundary: incoming arrow survives with probability 1-b
    const double fb = static_cast<double>(right_kept) / n;
    const double sb = std::sqrt(kRun.b * (1 - kRun.b) / n);
    CHECK(std::fabs(fb - (1 - kRun.b)) < 4 * sb);
}

TEST_CASE("no injection sources means the empty state is absorbing") {
    StripParams sp = kRun;
    sp.a = 0;
    sp.d = 0;
    const DownRightPath p = horizontal_path(4);
    const CounterRng rng(7);
    const auto traj = evolve(p, Configuration(4, 0), sp, 200, rng);
    for (const auto& tau : traj)
        for (auto v : tau) CHECK(v == 0);
}

TEST_CASE("evolve validates the initial configuration length") {
    CHECK_THROWS_AS(evolve(horizontal_path(3), Configuration(2, 0), kRun, 1, CounterRng(1)),
                    std::invalid_argument);
}

TEST_CASE("identical seeds give identical trajectories, different seeds differ") {
    const DownRightPath p = build_path(3, parse_labels("URU"), 1);
    const Configuration init{1, 0, 1};
    const auto t1 = evolve(p, init, kRun, 50, CounterRng(99));
    const auto t2 = evolve(p, init, kRun, 50, CounterRng(99));
    CHECK(t1 == t2);
    const auto t3 = evolve(p, init, kRun, 50, CounterRng(100));
    CHECK(t1 != t3);
    // distinct replicas of the same seed are independent streams
    const auto r1 = evolve(p, init, kRun, 50, CounterRng(99), 1);
    CHECK(t1 != r1);
}

TEST_CASE("colored boundary rows are normalized and nonnegative") {
    const StripParams p1{0.3, 0.5, 0.45, 0.1, 0.2, 0.5};
    const StripParams p2{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
    require_coupling(p1, p2);
    for (int c = 0; c <= 2; ++c) {
        double sl = 0, sr = 0;
        for (double v : colored_left_row(c, p1, p2)) {
            CHECK(v >= 0);
            sl += v;
        }
        for (double v : colored_right_row(c, p1, p2)) {
            CHECK(v >= 0);
            sr += v;
        }
        CHECK(sl == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(sr == doctest::Approx(1.0).epsilon(1e-15));
    }
    // the incoming-color-1 right row is (b', 1-b'-d, d)
    const auto row = colored_right_row(1, p1, p2);
    CHECK(row[0] == doctest::Approx(p2.b));
    CHECK(row[1] == doctest::Approx(1.0 - p2.b - p1.d));
    CHECK(row[2] == doctest::Approx(p1.d));
}

TEST_CASE("coupling hypothesis violations are rejected") {
    const StripParams p1{0.3, 0.5, 0.45, 0.1, 0.2, 0.5};
    StripParams p2 = p1;
    p2.a = 0.2; // a <= a' fails
    CHECK_THROWS_AS(require_coupling(p1, p2), precondition_error);
    p2 = p1;
    p2.theta1 = 0.3;
    CHECK_THROWS_AS(require_coupling(p1, p2), precondition_error);
}

TEST_CASE("coupled trajectories keep the marginal ordering on every edge") {
    const StripParams p1{0.3, 0.5, 0.45, 0.1, 0.2, 0.5};
    const StripParams p2{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
    const int N = 10;
    const DownRightPath p = horizontal_path(N);
    const CounterRng rng(31337);
    long long edges = 0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto traj =
            evolve_coupled(p, Configuration(N, 0), Configuration(N, 0), p1, p2, 1000, rng, rep);
        for (const auto& eta : traj)
            for (auto c : eta) {
                REQUIRE(c <= 2);
                const int eta1 = c >= 2, eta2 = c >= 1;
                CHECK(eta1 <= eta2);
                ++edges;
            }
    }
    CHECK(edges > 100000);
}

TEST_CASE("coupled evolution rejects unordered initial data") {
    const StripParams p1{0.3, 0.5, 0.45, 0.1, 0.2, 0.5};
    const StripParams p2{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
    CHECK_THROWS_AS(
        evolve_coupled(horizontal_path(2), Configuration{1, 0}, Configuration{0, 0}, p1, p2,
                       1, CounterRng(1)),
        precondition_error);
}
