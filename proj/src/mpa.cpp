#include "sixv/mpa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sixv {

double log_partition_mpa(int N, double t, const StripParams& sp) {
    if (!(t > 0)) throw precondition_error("requires t > 0");
    const StripRates<double> rr = derive_rates_t(to_strip_t(sp));
    if (!(rr.gamma * rr.delta < rr.alpha * rr.beta))
        throw precondition_error(
            "requires gamma*delta < alpha*beta (holds throughout the fan region)");
    // Balance the evaluation so memoized values stay inside double range.
    const double det = rr.alpha * rr.beta - rr.gamma * rr.delta;
    const double x = (rr.alpha + rr.delta) / det;
    const double y = (rr.beta + rr.gamma) / det;
    const double rho = 1.0 / std::max({1.0, x, y});
    DehpEngine<double> eng = make_engine(rr, rho);
    NormalForm<double> nf = NormalForm<double>::one();
    double logfac = 0;
    for (int k = 0; k < N; ++k) {
        eng.mul_affine(nf, t * rr.sD, rr.sE, 0.0);
        double mx = 0;
        for (const auto& row : nf.c)
            for (double v : row) mx = std::max(mx, std::fabs(v));
        if (!(mx > 0) || !std::isfinite(mx))
            throw std::runtime_error("partition recursion left double range");
        nf.scale(1.0 / mx);
        logfac += std::log(mx);
    }
    const double v = eng.value(nf);
    if (!(v > 0) || !std::isfinite(v))
        throw std::runtime_error("partition value is not positive");
    return std::log(v) + logfac - N * std::log(rho);
}

BernoulliSpecial bernoulli_special(double a, double b, double c, double d, double theta2) {
    const double s1 = (a + d - a * b - a * d) * (b + c - b * c - a * b);
    const double s2 = (a + d - a * d - c * d) * (b + c - b * c - c * d);
    if (s1 == 0 || s2 == 0)
        throw precondition_error(
            "product-measure condition degenerates: both sides must be nonzero");
    BernoulliSpecial out;
    out.theta1 = 1.0 - (1.0 - theta2) * s2 / s1;
    if (!(out.theta1 > 0 && out.theta1 < 1))
        throw precondition_error("no valid theta1 in (0,1) solves the product-measure condition");
    if (!(out.theta1 < theta2))
        throw precondition_error("requires theta1 < theta2; the solved theta1 is not below theta2");
    const double denom = a + b + c + d - (a + c) * (b + d);
    out.p_up = (a + d - a * b - a * d) / denom;
    out.p_right = (a + d - a * d - c * d) / denom;
    return out;
}

ParityBernoulli parity_bernoulli(double theta1, double theta2, int N) {
    if (!(theta1 < 1 && theta2 < 1) || !(theta1 > 0 && theta2 > 0))
        throw precondition_error("requires theta1, theta2 in (0,1)");
    ParityBernoulli out;
    const double su = std::sqrt(1.0 - theta1);
    const double sv = std::sqrt(1.0 - theta2);
    out.p_up = sv / (su + sv);
    out.p_right = su / (su + sv);
    const size_t dim = size_t{1} << N;
    out.even.assign(dim, 0.0);
    out.odd.assign(dim, 0.0);
    double ze = 0, zo = 0;
    for (size_t s = 0; s < dim; ++s) {
        const int k = std::popcount(s);
        const double w = std::pow(out.p_up, k) * std::pow(1.0 - out.p_up, N - k);
        if (k % 2 == 0) {
            out.even[s] = w;
            ze += w;
        } else {
            out.odd[s] = w;
            zo += w;
        }
    }
    for (auto& v : out.even) v /= ze;
    for (auto& v : out.odd) v /= zo;
    return out;
}

std::vector<double> qvolume_measure(int N, int k, double q) {
    if (k < 0 || k > N) throw precondition_error("requires 0 <= k <= N particles");
    if (!(q > 0 && q < 1)) throw precondition_error("requires q in (0,1)");
    const size_t dim = size_t{1} << N;
    std::vector<double> w(dim, 0.0);
    double z = 0;
    for (size_t s = 0; s < dim; ++s) {
        if (std::popcount(s) != k) continue;
        double sum_sites = 0; // occupied sites are 1-based
        for (int i = 0; i < N; ++i)
            if ((s >> i) & 1) sum_sites += i + 1;
        w[s] = std::pow(q, -sum_sites);
        z += w[s];
    }
    for (auto& v : w) v /= z;
    return w;
}

namespace {

template <class S>
std::vector<double> measure_via(const DownRightPath& path, const StripParams& sp) {
    StripT<S> st{S(sp.a), S(sp.b), S(sp.c), S(sp.d), S(sp.theta1), S(sp.theta2)};
    const auto w = mpa_measure_t<S>(path, st);
    std::vector<double> out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = detail::to_double(w[i]);
    return out;
}

} // namespace

std::vector<double> mpa_measure(const DownRightPath& path, const StripParams& sp,
                                int precision_digits) {
    int digits = precision_digits;
    if (digits <= 0) digits = path.N <= 8 ? 17 : 50;
    if (digits <= 17) return measure_via<double>(path, sp);
    if (digits <= 50) return measure_via<Decimal50>(path, sp);
    return measure_via<Decimal100>(path, sp);
}

} // namespace sixv
