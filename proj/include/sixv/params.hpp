#pragma once

#include <stdexcept>
#include <string>

namespace sixv {

/// Bulk and boundary parameters of the six-vertex model on a strip.
///
/// Bulk vertices keep a horizontal arrow going with probability theta2 and a
/// vertical arrow going with probability theta1. At the left boundary an
/// arrow is created with probability a and destroyed with probability c; at
/// the right boundary destroyed with probability b and created with
/// probability d.
struct StripParams {
    double a = 0;
    double b = 0;
    double c = 0;
    double d = 0;
    double theta1 = 0;
    double theta2 = 0;
};

/// Derived parameter family of the tilted stationary measure.
///
/// q = theta1/theta2 and r = (1-theta2)/(1-theta1) are the bulk ratios;
/// (alpha, beta, gamma, delta) are the boundary rates of the open exclusion
/// process the strip measure tilts to; (A, B, C, D) the kappa-parameters of
/// its Askey-Wilson description, and (tA, tB, tC, tD) their tilted versions
/// (A*sqrt(r), B*sqrt(r), C/sqrt(r), D/sqrt(r)).
struct DerivedParams {
    double q = 0, r = 0;
    double alpha = 0, beta = 0, gamma = 0, delta = 0;
    double A = 0, B = 0, C = 0, D = 0;
    double tA = 0, tB = 0, tC = 0, tD = 0;
};

/// Rates of the open asymmetric simple exclusion process on {1..N}.
/// alpha/gamma inject/eject at site 1, delta/beta inject/eject at site N,
/// L and R are the left/right hop rates (L=q, R=1 in the standard gauge).
struct AsepRates {
    double alpha = 0, beta = 0, gamma = 0, delta = 0;
    double L = 0, R = 1;
};

class precondition_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// kappa_pm(u, v; q) = (1-q-u+v +- sqrt((1-q-u+v)^2 + 4uv)) / (2u).
/// The two roots satisfy kappa_+ + kappa_- = (1-q-u+v)/u and
/// kappa_+ * kappa_- = -v/u.
double kappa_plus(double u, double v, double q);
double kappa_minus(double u, double v, double q);

/// All six parameters must be valid probabilities in (0,1); this is the
/// irreducibility requirement of the strip chain.
void require_ergodic(const StripParams& sp);

/// Ergodic plus theta1 < theta2 and b + d < 1.
void require_tilting_regime(const StripParams& sp);

/// min over l = 0..lmax of |ab/(cd) - q^l|. Values near zero are the
/// singular cases where the matrix-product normalizer can vanish.
double nonsingularity_margin(const StripParams& sp, int lmax = 200);

/// Derive (q, r, alpha..delta, A..D, tilde family) from tilting-regime strip
/// parameters.
DerivedParams derive_params(const StripParams& sp);

/// ASEP rates induced by tilting-regime strip parameters (L=q, R=1).
AsepRates asep_rates_from_strip(const StripParams& sp);

/// Inverse of the rate map: strip parameters realizing given (q, r,
/// alpha..delta). Throws if the result leaves (0,1)^6.
StripParams strip_from_rates(double q, double r, double alpha, double beta,
                             double gamma, double delta);

/// min over l >= 0 of | |x| - q^{-l} |, the distance of x from the
/// degenerate set where atom masses blow up.
double technical_margin_one(double x, double q);

/// Smallest technical margin over the four tilted parameters.
double technical_margin(const DerivedParams& dp);

} // namespace sixv
