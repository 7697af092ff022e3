#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "sixv/params.hpp"

namespace sixv {

/// (z; q)_n = prod_{j<n} (1 - z q^j). n < 0 means the infinite product,
/// truncated once the tail bound |z| q^j / (1-q) falls below working
/// precision.
double qpochhammer(double z, double q, int n = -1);
std::complex<double> qpochhammer(std::complex<double> z, double q, int n = -1);

struct AWAtom {
    double y = 0;    // atom position (chi q^j + 1/(chi q^j)) / 2
    double mass = 0;
    double chi = 0;  // generating parameter
    int j = 0;
};

/// Askey-Wilson orthogonality measure: an absolutely continuous part on
/// [-1,1] plus finitely many atoms generated by parameters of modulus > 1.
struct AWMeasure {
    double pa = 0, pb = 0, pc = 0, pd = 0, q = 0;
    double pref = 0; // prefactor of the continuous density
    std::vector<AWAtom> atoms;
    bool near_degenerate = false; // some |chi q^j| within 1e-9 of 1

    /// Continuous density f(y) on (-1,1).
    double density(double y) const;
    /// f(cos theta) * sin theta — the form without endpoint singularities.
    double weight_theta(double theta) const;
    double atom_mass_total() const;
};

/// Build the measure; throws when a pairwise product or abcd lies in
/// [1, infinity), or when a mass formula degenerates (a parameter ratio
/// sitting on a negative q-power).
AWMeasure aw_measure(double pa, double pb, double pc, double pd, double q);

/// Deterministic adaptive quadrature (15-point Gauss panels, bisection).
double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double reltol = 1e-10);

/// Quadrature of the continuous part plus the atom masses; equals 1 for any
/// admissible parameter set.
double total_mass(const AWMeasure& m, double reltol = 1e-10);

/// integral of (1 + rt + 2 sqrt(rt) y)^N against the measure.
double aw_expectation(const AWMeasure& m, int N, double r, double t,
                      double reltol = 1e-10);

/// Log-scaled decomposition of E[(1 + rt + 2 sqrt(rt) Y_rt)^N] into the
/// continuous contribution and the individual atoms, for asymptotics at
/// large N without overflow.
struct PartitionParts {
    double log_continuous = 0;
    std::vector<double> log_atom;
    double log_total = 0;
    bool near_degenerate = false; // an atom parameter sits near a negative q-power
    double continuous_share() const;
    double largest_atom_share() const;
};

PartitionParts partition_parts(const DerivedParams& dp, int N, double t,
                               double reltol = 1e-12);

/// Z_N(t) = ((1-theta1)/(theta2(1-q)))^N E[(1+rt+2 sqrt(rt) Y_rt)^N], the
/// normalizing constant of the tilted measure. Fan region only.
double partition_Z(int N, double t, const StripParams& sp, double reltol = 1e-10);
double log_partition_aw(int N, double t, const StripParams& sp, double reltol = 1e-12);

/// Mean particle density d_t Z_N(t)|_{t=1} / (N Z_N(1)). In the fan region
/// this is computed from the measure by central differences with one
/// Richardson step; in the shock region it falls back to the exact
/// stationary measure and requires N within the enumeration cap.
double mean_density(int N, const StripParams& sp);

/// Exact small-N mean density from the brute-force stationary measure.
double mean_density_exact(int N, const StripParams& sp);

enum class Region { Fan, Shock };
enum class Phase { MaximalCurrent, HighDensity, LowDensity, Boundary, Undefined };

struct PhaseReport {
    Region region = Region::Fan;
    Phase phase = Phase::Undefined;
    std::optional<double> limit_density;   // absent in the shock region
    std::optional<double> alt_limit;       // second candidate on a phase boundary
    double A = 0, C = 0, r = 0;
    double technical_margin = 0;
    bool technical_warning = false;
};

/// Classify (A, C, r): fan if AC < 1, else shock. Inside the fan the phase
/// boundaries sit at A = 1/sqrt(r) and C = sqrt(r); the limiting densities
/// are sqrt(r)/(1+sqrt(r)), Ar/(1+Ar) and r/(r+C).
PhaseReport phase_limit_from(double A, double C, double r);
PhaseReport phase_limit(const StripParams& sp);

const char* to_string(Region r);
const char* to_string(Phase p);

} // namespace sixv
