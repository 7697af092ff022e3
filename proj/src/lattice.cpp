#include "sixv/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sixv {

std::vector<long long> DownRightPath::heights() const {
    std::vector<long long> g(static_cast<size_t>(N) + 1);
    g[static_cast<size_t>(N)] = anchor;
    for (int j = N; j >= 1; --j)
        g[j - 1] = g[j] + (labels[j - 1] == EdgeKind::Right ? 1 : 0);
    return g;
}

DownRightPath build_path(int N, std::vector<EdgeKind> labels, long long anchor) {
    if (N <= 0) throw std::invalid_argument("path width N must be positive");
    if (labels.empty()) labels.assign(static_cast<size_t>(N), EdgeKind::Up);
    if (static_cast<int>(labels.size()) != N) {
        std::ostringstream os;
        os << "label sequence has length " << labels.size() << ", expected N = " << N;
        throw std::invalid_argument(os.str());
    }
    if (anchor < 0) {
        std::ostringstream os;
        os << "path escapes the strip: down-right endpoint height " << anchor << " < 0";
        throw std::invalid_argument(os.str());
    }
    return DownRightPath{N, std::move(labels), anchor};
}

DownRightPath horizontal_path(int N, long long anchor) {
    return build_path(N, {}, anchor);
}

std::vector<EdgeKind> parse_labels(const std::string& s) {
    std::vector<EdgeKind> out;
    out.reserve(s.size());
    for (char ch : s) {
        if (ch == 'U' || ch == 'u')
            out.push_back(EdgeKind::Up);
        else if (ch == 'R' || ch == 'r')
            out.push_back(EdgeKind::Right);
        else
            throw std::invalid_argument(std::string("invalid path label '") + ch +
                                        "', expected 'U' or 'R'");
    }
    return out;
}

std::string format_labels(const DownRightPath& p) {
    std::string s;
    s.reserve(p.labels.size());
    for (EdgeKind k : p.labels) s += (k == EdgeKind::Up ? 'U' : 'R');
    return s;
}

bool move_applicable(const DownRightPath& p, const LocalMove& m) {
    switch (m.kind) {
        case MoveKind::Bulk:
            return m.position >= 1 && m.position <= p.N - 1 &&
                   p.labels[m.position - 1] == EdgeKind::Right &&
                   p.labels[m.position] == EdgeKind::Up;
        case MoveKind::LeftBoundary:
            return p.labels.front() == EdgeKind::Up;
        case MoveKind::RightBoundary:
            return p.labels.back() == EdgeKind::Right;
    }
    return false;
}

DownRightPath apply_local_move(const DownRightPath& p, const LocalMove& m) {
    if (!move_applicable(p, m)) {
        std::ostringstream os;
        switch (m.kind) {
            case MoveKind::Bulk:
                os << "bulk move needs a down-then-right corner (labels Right,Up) at position "
                   << m.position;
                break;
            case MoveKind::LeftBoundary:
                os << "left-boundary move needs the path to start with a right step (first label Up)";
                break;
            case MoveKind::RightBoundary:
                os << "right-boundary move needs the path to end with a down step (last label Right)";
                break;
        }
        throw std::invalid_argument(os.str());
    }
    DownRightPath out = p;
    switch (m.kind) {
        case MoveKind::Bulk:
            out.labels[m.position - 1] = EdgeKind::Up;
            out.labels[m.position] = EdgeKind::Right;
            break;
        case MoveKind::LeftBoundary:
            out.labels.front() = EdgeKind::Right;
            break;
        case MoveKind::RightBoundary:
            out.labels.back() = EdgeKind::Up;
            out.anchor += 1;
            break;
    }
    return out;
}

std::vector<LocalMove> decompose_translation(const DownRightPath& p) {
    const std::vector<long long> target = [&] {
        auto g = p.heights();
        for (auto& h : g) ++h;
        return g;
    }();
    DownRightPath cur = p;
    std::vector<LocalMove> moves;
    moves.reserve(static_cast<size_t>(p.N) + 1);
    bool progress = true;
    while (progress) {
        progress = false;
        auto g = cur.heights();
        for (int j = 0; j <= p.N; ++j) {
            if (g[j] >= target[j]) continue;
            LocalMove m;
            if (j == 0)
                m = {MoveKind::LeftBoundary, 0};
            else if (j == p.N)
                m = {MoveKind::RightBoundary, p.N};
            else
                m = {MoveKind::Bulk, j};
            if (!move_applicable(cur, m)) continue;
            cur = apply_local_move(cur, m);
            g = cur.heights();
            moves.push_back(m);
            progress = true;
        }
    }
    return moves;
}

DownRightPath translate(const DownRightPath& p, long long k) {
    DownRightPath out = p;
    out.anchor += k;
    return out;
}

double move_area(const LocalMove& m) {
    return m.kind == MoveKind::Bulk ? 1.0 : 0.5;
}

double area_between(const DownRightPath& lower, const DownRightPath& upper) {
    const auto gl = lower.heights();
    const auto gu = upper.heights();
    double area = 0.5 * static_cast<double>(gu[0] - gl[0]);
    for (int j = 1; j < lower.N; ++j) area += static_cast<double>(gu[j] - gl[j]);
    area += 0.5 * static_cast<double>(gu[lower.N] - gl[lower.N]);
    return area;
}

bool weakly_below(const DownRightPath& lower, const DownRightPath& upper) {
    if (lower.N != upper.N) return false;
    const auto gl = lower.heights();
    const auto gu = upper.heights();
    for (int j = 0; j <= lower.N; ++j)
        if (gl[j] > gu[j]) return false;
    return true;
}

std::vector<SlabVertex> slab_vertices(const DownRightPath& from, const DownRightPath& to) {
    if (from.N != to.N) throw std::invalid_argument("paths have different widths");
    if (!weakly_below(from, to))
        throw std::invalid_argument("target path must sit weakly above the source path");
    const auto gl = from.heights();
    const auto gu = to.heights();
    std::vector<SlabVertex> vs;
    for (int j = 0; j <= from.N; ++j) {
        VertexKind kind = j == 0 ? VertexKind::LeftBoundary
                        : j == from.N ? VertexKind::RightBoundary
                                      : VertexKind::Bulk;
        for (long long h = gl[j] + 1; h <= gu[j]; ++h) vs.push_back({j, h, kind});
    }
    std::sort(vs.begin(), vs.end(), [](const SlabVertex& a, const SlabVertex& b) {
        return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
    });
    return vs;
}

} // namespace sixv
