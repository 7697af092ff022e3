#include "sixv/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sixv {

namespace {

void require_prob(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) {
        std::ostringstream os;
        os << "parameter " << name << " = " << x
           << " must lie in (0,1) for an irreducible strip chain";
        throw precondition_error(os.str());
    }
}

} // namespace

double kappa_plus(double u, double v, double q) {
    const double s = 1.0 - q - u + v;
    return (s + std::sqrt(s * s + 4.0 * u * v)) / (2.0 * u);
}

double kappa_minus(double u, double v, double q) {
    const double s = 1.0 - q - u + v;
    return (s - std::sqrt(s * s + 4.0 * u * v)) / (2.0 * u);
}

void require_ergodic(const StripParams& sp) {
    require_prob(sp.a, "a");
    require_prob(sp.b, "b");
    require_prob(sp.c, "c");
    require_prob(sp.d, "d");
    require_prob(sp.theta1, "theta1");
    require_prob(sp.theta2, "theta2");
}

void require_tilting_regime(const StripParams& sp) {
    require_ergodic(sp);
    if (!(sp.theta1 < sp.theta2)) {
        std::ostringstream os;
        os << "requires theta1 < theta2, got theta1 = " << sp.theta1
           << ", theta2 = " << sp.theta2;
        throw precondition_error(os.str());
    }
    if (!(sp.b + sp.d < 1.0)) {
        std::ostringstream os;
        os << "requires b + d < 1, got b + d = " << sp.b + sp.d;
        throw precondition_error(os.str());
    }
}

double nonsingularity_margin(const StripParams& sp, int lmax) {
    const double q = sp.theta1 / sp.theta2;
    const double ratio = sp.a * sp.b / (sp.c * sp.d);
    double margin = std::numeric_limits<double>::infinity();
    double ql = 1.0;
    for (int l = 0; l <= lmax; ++l) {
        margin = std::min(margin, std::fabs(ratio - ql));
        ql *= q;
        if (ql < 1e-18 && ratio > 1e-9) break;
    }
    return margin;
}

DerivedParams derive_params(const StripParams& sp) {
    require_tilting_regime(sp);
    DerivedParams dp;
    dp.q = sp.theta1 / sp.theta2;
    dp.r = (1.0 - sp.theta2) / (1.0 - sp.theta1);
    const double denom = sp.theta2 * (1.0 - sp.b - sp.d);
    dp.alpha = (1.0 - sp.theta1) * sp.a / sp.theta2;
    dp.beta = (1.0 - sp.theta2) * sp.b / denom;
    dp.gamma = (1.0 - sp.theta2) * sp.c / sp.theta2;
    dp.delta = (1.0 - sp.theta1) * sp.d / denom;
    dp.A = kappa_plus(dp.beta, dp.delta, dp.q);
    dp.B = kappa_minus(dp.beta, dp.delta, dp.q);
    dp.C = kappa_plus(dp.alpha, dp.gamma, dp.q);
    dp.D = kappa_minus(dp.alpha, dp.gamma, dp.q);
    const double sr = std::sqrt(dp.r);
    dp.tA = dp.A * sr;
    dp.tB = dp.B * sr;
    dp.tC = dp.C / sr;
    dp.tD = dp.D / sr;
    return dp;
}

AsepRates asep_rates_from_strip(const StripParams& sp) {
    const DerivedParams dp = derive_params(sp);
    return AsepRates{dp.alpha, dp.beta, dp.gamma, dp.delta, dp.q, 1.0};
}

StripParams strip_from_rates(double q, double r, double alpha, double beta,
                             double gamma, double delta) {
    StripParams sp;
    sp.theta2 = (1.0 - r) / (1.0 - q * r);
    sp.theta1 = q * sp.theta2;
    sp.a = alpha * sp.theta2 / (1.0 - sp.theta1);
    sp.c = gamma * sp.theta2 / (1.0 - sp.theta2);
    const double u = beta * sp.theta2 / (1.0 - sp.theta2);
    const double v = delta * sp.theta2 / (1.0 - sp.theta1);
    sp.b = u / (1.0 + u + v);
    sp.d = v / (1.0 + u + v);
    require_tilting_regime(sp);
    return sp;
}

double technical_margin_one(double x, double q) {
    const double ax = std::fabs(x);
    double margin = std::numeric_limits<double>::infinity();
    double ql = 1.0; // q^{-l}, grows
    for (int l = 0; l <= 400; ++l) {
        margin = std::min(margin, std::fabs(ax - ql));
        if (ql > 4.0 * ax + 4.0) break;
        ql /= q;
    }
    return margin;
}

double technical_margin(const DerivedParams& dp) {
    double m = technical_margin_one(dp.tA, dp.q);
    m = std::min(m, technical_margin_one(dp.tB, dp.q));
    m = std::min(m, technical_margin_one(dp.tC, dp.q));
    m = std::min(m, technical_margin_one(dp.tD, dp.q));
    return m;
}

} // namespace sixv
