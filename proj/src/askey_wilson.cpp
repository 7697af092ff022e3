#include "sixv/askey_wilson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sixv/exact.hpp"

namespace sixv {

namespace {

constexpr double kPi = std::numbers::pi;

// 15-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGx[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGw[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    double s = 0;
    for (int i = 0; i < 15; ++i) s += kGw[i] * f(m + h * kGx[i]);
    return s * h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, double floor, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss15(f, a, m);
    const double right = gauss15(f, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= std::max(tol, floor)) return left + right;
    return adapt(f, a, m, left, 0.5 * tol, floor, depth - 1) +
           adapt(f, m, b, right, 0.5 * tol, floor, depth - 1);
}

double logsumexp(const std::vector<double>& xs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : xs) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0;
    for (double x : xs) s += std::exp(x - mx);
    return mx + std::log(s);
}

} // namespace

double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double reltol) {
    // Composite pre-pass: integrands here can be sharply peaked (the
    // integrand power grows with N), so establish the scale on a fixed
    // partition before refining adaptively.
    constexpr int kPanels = 32;
    const double h = (b - a) / kPanels;
    double panel[kPanels];
    double scale = 0;
    for (int k = 0; k < kPanels; ++k) {
        panel[k] = gauss15(f, a + k * h, a + (k + 1) * h);
        scale += std::fabs(panel[k]);
    }
    scale = std::max(scale, 1e-300);
    const double floor = 4e-16 * scale;
    double sum = 0;
    for (int k = 0; k < kPanels; ++k)
        sum += adapt(f, a + k * h, a + (k + 1) * h, panel[k], reltol * scale / kPanels,
                     floor, 30);
    return sum;
}

double qpochhammer(double z, double q, int n) {
    if (n >= 0) {
        double p = 1, zq = z;
        for (int j = 0; j < n; ++j) {
            p *= 1.0 - zq;
            zq *= q;
        }
        return p;
    }
    if (std::fabs(q) >= 1) throw precondition_error("infinite product requires |q| < 1");
    double p = 1, zq = z;
    const double stop = 1e-18 * (1.0 - std::fabs(q));
    for (int j = 0; j < 100000 && std::fabs(zq) > stop; ++j) {
        p *= 1.0 - zq;
        zq *= q;
    }
    return p;
}

std::complex<double> qpochhammer(std::complex<double> z, double q, int n) {
    if (n >= 0) {
        std::complex<double> p = 1, zq = z;
        for (int j = 0; j < n; ++j) {
            p *= 1.0 - zq;
            zq *= q;
        }
        return p;
    }
    if (std::fabs(q) >= 1) throw precondition_error("infinite product requires |q| < 1");
    std::complex<double> p = 1, zq = z;
    const double stop = 1e-18 * (1.0 - std::fabs(q));
    for (int j = 0; j < 100000 && std::abs(zq) > stop; ++j) {
        p *= 1.0 - zq;
        zq *= q;
    }
    return p;
}

double AWMeasure::weight_theta(double theta) const {
    const std::complex<double> z(std::cos(theta), std::sin(theta));
    const std::complex<double> num = qpochhammer(z * z, q);
    double den = std::norm(qpochhammer(pa * z, q));
    den *= std::norm(qpochhammer(pb * z, q));
    den *= std::norm(qpochhammer(pc * z, q));
    den *= std::norm(qpochhammer(pd * z, q));
    return pref / (2.0 * kPi) * std::norm(num) / den;
}

double AWMeasure::density(double y) const {
    if (!(y > -1 && y < 1)) return 0;
    return weight_theta(std::acos(y)) / std::sqrt(1.0 - y * y);
}

double AWMeasure::atom_mass_total() const {
    double s = 0;
    for (const AWAtom& a : atoms) s += a.mass;
    return s;
}

AWMeasure aw_measure(double pa, double pb, double pc, double pd, double q) {
    if (!(q > -1 && q < 1)) throw precondition_error("requires q in (-1,1)");
    const double abcd = pa * pb * pc * pd;
    const std::pair<const char*, double> products[] = {
        {"a*c", pa * pc},   {"a*d", pa * pd},   {"b*c", pb * pc},
        {"b*d", pb * pd},   {"q*a*c", q * pa * pc}, {"q*a*d", q * pa * pd},
        {"q*b*c", q * pb * pc}, {"q*b*d", q * pb * pd}, {"a*b*c*d", abcd},
        {"q*a*b*c*d", q * abcd}};
    for (const auto& [name, v] : products)
        if (v >= 1.0) {
            std::ostringstream os;
            os << "inadmissible parameters: " << name << " = " << v
               << " must stay below 1";
            throw precondition_error(os.str());
        }

    AWMeasure m;
    m.pa = pa;
    m.pb = pb;
    m.pc = pc;
    m.pd = pd;
    m.q = q;
    m.pref = qpochhammer(q, q) * qpochhammer(pa * pb, q) * qpochhammer(pa * pc, q) *
             qpochhammer(pa * pd, q) * qpochhammer(pb * pc, q) * qpochhammer(pb * pd, q) *
             qpochhammer(pc * pd, q) / qpochhammer(abcd, q);

    const double params[4] = {pa, pb, pc, pd};
    for (int t = 0; t < 4; ++t) {
        const double chi = params[t];
        if (std::fabs(chi) <= 1.0) continue;
        double others[3];
        for (int i = 0, k = 0; i < 4; ++i)
            if (i != t) others[k++] = params[i];
        const double o1 = others[0], o2 = others[1], o3 = others[2];
        const double p0 = qpochhammer(1.0 / (chi * chi), q) * qpochhammer(o1 * o2, q) *
                          qpochhammer(o1 * o3, q) * qpochhammer(o2 * o3, q) /
                          (qpochhammer(o1 / chi, q) * qpochhammer(o2 / chi, q) *
                           qpochhammer(o3 / chi, q) * qpochhammer(abcd, q));
        double chiqj = chi;
        for (int j = 0; std::fabs(chiqj) > 1.0; ++j, chiqj *= q) {
            if (std::fabs(std::fabs(chiqj) - 1.0) < 1e-9) m.near_degenerate = true;
            AWAtom atom;
            atom.chi = chi;
            atom.j = j;
            atom.y = 0.5 * (chiqj + 1.0 / chiqj);
            if (j == 0) {
                atom.mass = p0;
            } else {
                // mass ratio in a product form that stays finite when other
                // parameters vanish
                double ratio = (1.0 - chi * chi * std::pow(q, 2 * j)) / (1.0 - chi * chi);
                for (int i = 0; i < j; ++i) {
                    ratio *= 1.0 - chi * chi * std::pow(q, i);
                    ratio /= 1.0 - std::pow(q, i + 1);
                    ratio *= q * chi * chi; // from (q/(abcd))^j after regrouping
                    for (double o : others) {
                        const double den = chi * (o - chi * std::pow(q, 1 + i));
                        if (std::fabs(den) < 1e-14)
                            throw precondition_error(
                                "degenerate atom masses: a parameter ratio sits on a "
                                "negative q-power");
                        ratio *= (1.0 - chi * o * std::pow(q, i)) / den;
                    }
                }
                atom.mass = p0 * ratio;
            }
            m.atoms.push_back(atom);
        }
    }
    return m;
}

double total_mass(const AWMeasure& m, double reltol) {
    const double cont =
        adaptive_gauss([&](double th) { return m.weight_theta(th); }, 0.0, kPi, reltol);
    return cont + m.atom_mass_total();
}

double aw_expectation(const AWMeasure& m, int N, double r, double t, double reltol) {
    if (!(r * t > 0)) throw precondition_error("requires r*t > 0");
    const double rt = r * t;
    const double root = 2.0 * std::sqrt(rt);
    auto g = [&](double y) { return std::pow(1.0 + rt + root * y, N); };
    const double cont = adaptive_gauss(
        [&](double th) { return g(std::cos(th)) * m.weight_theta(th); }, 0.0, kPi, reltol);
    double s = cont;
    for (const AWAtom& a : m.atoms) s += g(a.y) * a.mass;
    return s;
}

double PartitionParts::continuous_share() const {
    return std::exp(log_continuous - log_total);
}

double PartitionParts::largest_atom_share() const {
    if (log_atom.empty()) return 0;
    return std::exp(*std::max_element(log_atom.begin(), log_atom.end()) - log_total);
}

PartitionParts partition_parts(const DerivedParams& dp, int N, double t, double reltol) {
    if (!(dp.A * dp.C < 1.0))
        throw precondition_error(
            "shock region A*C >= 1: the measure representation only covers the fan region");
    if (!(t > 0)) throw precondition_error("requires t > 0");
    const double st = std::sqrt(t);
    const AWMeasure m = aw_measure(dp.tA * st, dp.tB * st, dp.tC / st, dp.tD / st, dp.q);
    const double rt = dp.r * t;
    const double root = 2.0 * std::sqrt(rt);
    auto logg = [&](double y) {
        const double v = 1.0 + rt + root * y;
        if (!(v > 0))
            throw std::runtime_error("integrand is not positive on the support");
        return std::log(v);
    };
    PartitionParts parts;
    parts.near_degenerate = m.near_degenerate;
    const double ref = logg(1.0); // max of log g over the continuous support
    const double cont = adaptive_gauss(
        [&](double th) {
            return std::exp(static_cast<double>(N) * (logg(std::cos(th)) - ref)) *
                   m.weight_theta(th);
        },
        0.0, kPi, reltol);
    parts.log_continuous = static_cast<double>(N) * ref + std::log(std::max(cont, 1e-300));
    std::vector<double> all{parts.log_continuous};
    for (const AWAtom& a : m.atoms) {
        const double la = static_cast<double>(N) * logg(a.y) + std::log(a.mass);
        parts.log_atom.push_back(la);
        all.push_back(la);
    }
    parts.log_total = logsumexp(all);
    return parts;
}

double log_partition_aw(int N, double t, const StripParams& sp, double reltol) {
    const DerivedParams dp = derive_params(sp);
    const PartitionParts parts = partition_parts(dp, N, t, reltol);
    const double pref = (1.0 - sp.theta1) / (sp.theta2 * (1.0 - dp.q));
    return static_cast<double>(N) * std::log(pref) + parts.log_total;
}

double partition_Z(int N, double t, const StripParams& sp, double reltol) {
    return std::exp(log_partition_aw(N, t, sp, reltol));
}

double mean_density_exact(int N, const StripParams& sp) {
    const Distribution mu = stationary_exact(transition_matrix(horizontal_path(N), sp));
    double s = 0;
    for (int state = 0; state < (1 << N); ++state)
        for (int i = 0; i < N; ++i)
            if ((state >> i) & 1) s += mu(state);
    return s / N;
}

double mean_density(int N, const StripParams& sp) {
    const DerivedParams dp = derive_params(sp);
    if (!(dp.A * dp.C < 1.0)) {
        if (N > kWidthCap)
            throw precondition_error(
                "shock region A*C >= 1: only exact small-N evaluation is available");
        return mean_density_exact(N, sp);
    }
    const double h = 1e-5;
    auto dlog = [&](double hh) {
        const double up = partition_parts(dp, N, 1.0 + hh, 1e-13).log_total;
        const double dn = partition_parts(dp, N, 1.0 - hh, 1e-13).log_total;
        return (up - dn) / (2.0 * hh);
    };
    const double d1 = dlog(h);
    const double d2 = dlog(0.5 * h);
    const double deriv = (4.0 * d2 - d1) / 3.0;
    return deriv / static_cast<double>(N);
}

PhaseReport phase_limit_from(double A, double C, double r) {
    PhaseReport rep;
    rep.A = A;
    rep.C = C;
    rep.r = r;
    const double srt = std::sqrt(r);
    if (!(A * C < 1.0)) {
        rep.region = Region::Shock;
        rep.phase = Phase::Undefined;
        return rep;
    }
    rep.region = Region::Fan;
    const double mc = srt / (1.0 + srt);
    const double hd = A * r / (1.0 + A * r);
    const double ld = r / (r + C);
    const double eps = 1e-12;
    if (std::fabs(A - 1.0 / srt) < eps) {
        rep.phase = Phase::Boundary;
        rep.limit_density = mc;
        rep.alt_limit = hd;
    } else if (std::fabs(C - srt) < eps) {
        rep.phase = Phase::Boundary;
        rep.limit_density = mc;
        rep.alt_limit = ld;
    } else if (A > 1.0 / srt) {
        rep.phase = Phase::HighDensity;
        rep.limit_density = hd;
    } else if (C > srt) {
        rep.phase = Phase::LowDensity;
        rep.limit_density = ld;
    } else {
        rep.phase = Phase::MaximalCurrent;
        rep.limit_density = mc;
    }
    return rep;
}

PhaseReport phase_limit(const StripParams& sp) {
    const DerivedParams dp = derive_params(sp);
    PhaseReport rep = phase_limit_from(dp.A, dp.C, dp.r);
    rep.technical_margin = technical_margin(dp);
    rep.technical_warning = rep.technical_margin < 1e-9;
    return rep;
}

const char* to_string(Region r) { return r == Region::Fan ? "fan" : "shock"; }

const char* to_string(Phase p) {
    switch (p) {
        case Phase::MaximalCurrent: return "maximal-current";
        case Phase::HighDensity: return "high-density";
        case Phase::LowDensity: return "low-density";
        case Phase::Boundary: return "boundary";
        case Phase::Undefined: return "undefined";
    }
    return "undefined";
}

} // namespace sixv
