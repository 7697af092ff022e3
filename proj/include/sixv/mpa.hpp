#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sixv/exact.hpp" // StripT, Rational
#include "sixv/lattice.hpp"
#include "sixv/params.hpp"

namespace sixv {

using Decimal50 = boost::multiprecision::cpp_dec_float_50;
using Decimal100 = boost::multiprecision::cpp_dec_float_100;

enum class Letter : std::uint8_t { D, E };

class singular_case_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A word in the two generators written as sum_{n,m} c[n][m] E^n D^m.
template <class S>
struct NormalForm {
    std::vector<std::vector<S>> c; // c[n][m]

    static NormalForm one() {
        NormalForm nf;
        nf.c = {{S(1)}};
        return nf;
    }

    S& coef(size_t n, size_t m) {
        if (c.size() <= n) c.resize(n + 1);
        if (c[n].size() <= m) c[n].resize(m + 1, S(0));
        return c[n][m];
    }

    void add_scaled(const NormalForm& o, const S& w) {
        for (size_t n = 0; n < o.c.size(); ++n)
            for (size_t m = 0; m < o.c[n].size(); ++m)
                if (o.c[n][m] != S(0)) coef(n, m) += w * o.c[n][m];
    }

    void scale(const S& w) {
        for (auto& row : c)
            for (auto& v : row) v *= w;
    }
};

namespace detail {

template <class S>
bool exact_scalar() {
    return std::numeric_limits<S>::is_exact;
}

template <class S>
double to_double(const S& x) {
    return static_cast<double>(x);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Decimal50& x) { return x.convert_to<double>(); }
inline double to_double(const Decimal100& x) { return x.convert_to<double>(); }

} // namespace detail

/// Evaluates boundary-contracted words of the quadratic algebra
///   D E = q E D + D + E,
///   <W| (alpha E - gamma D) = <W|,   (beta D - delta E) |V> = |V>,
/// normalized by <W|V> = 1. Values are obtained by normal ordering and then
/// eliminating trailing D-powers against |V> and leading E-powers against
/// <W|; the left elimination closes after solving for the single
/// self-referential term, which is where the non-singularity requirement
/// alpha*beta != q^l*gamma*delta enters as a nonzero denominator.
///
/// `scale` evaluates with generators (scale*D, scale*E) instead; this keeps
/// coefficient growth in range for long words. Values in the scaled basis
/// relate to unscaled ones by a factor scale^(word length).
///
/// Engines memoize internally and are meant to be used by one task at a
/// time; create one engine per thread.
template <class S>
class DehpEngine {
  public:
    DehpEngine(S q, S alpha, S beta, S gamma, S delta, S scale = S(1))
        : q_(q), alpha_(alpha), beta_(beta), gamma_(gamma), delta_(delta), rho_(scale) {
        if (alpha_ <= S(0) || beta_ <= S(0) || gamma_ < S(0) || delta_ < S(0))
            throw precondition_error("requires alpha, beta > 0 and gamma, delta >= 0");
        check_nonsingular();
        fphi_ = {{}};
        fpsi_ = {{S(1)}};
        gphi_ = {{}};
        gpsi_ = {{S(1)}};
    }

    const S& q() const { return q_; }
    const S& scale() const { return rho_; }

    /// <W| E^n D^m |V> in the scaled basis.
    S T(int n, int m) {
        if (n < 0 || m < 0) throw std::invalid_argument("negative degree");
        if (memo_.size() <= static_cast<size_t>(n)) memo_.resize(n + 1);
        auto& row = memo_[static_cast<size_t>(n)];
        if (row.size() <= static_cast<size_t>(m)) row.resize(m + 1);
        auto& cell = row[static_cast<size_t>(m)];
        if (cell) return *cell;
        S v;
        if (n == 0 && m == 0)
            v = S(1);
        else if (m >= 1)
            v = trailing_d(n, m);
        else
            v = leading_e(n);
        cell = v;
        return *cell;
    }

    S value(const NormalForm<S>& nf) {
        S acc(0);
        for (size_t n = 0; n < nf.c.size(); ++n)
            for (size_t m = 0; m < nf.c[n].size(); ++m)
                if (nf.c[n][m] != S(0)) acc += nf.c[n][m] * T(static_cast<int>(n), static_cast<int>(m));
        return acc;
    }

    /// nf := nf * D (scaled letter).
    void mul_D(NormalForm<S>& nf) const {
        for (auto& row : nf.c) row.insert(row.begin(), S(0));
    }

    /// nf := nf * E (scaled letter), using E^n D^m E = E^n f_m.
    void mul_E(NormalForm<S>& nf) {
        size_t maxm = 0;
        for (const auto& row : nf.c) maxm = std::max(maxm, row.size());
        grow_f(maxm); // needs f_0 .. f_{maxm-1}
        NormalForm<S> out;
        for (size_t n = 0; n < nf.c.size(); ++n)
            for (size_t m = 0; m < nf.c[n].size(); ++m) {
                const S& w = nf.c[n][m];
                if (w == S(0)) continue;
                for (size_t j = 0; j < fphi_[m].size(); ++j)
                    if (fphi_[m][j] != S(0)) out.coef(n, j) += w * fphi_[m][j];
                for (size_t j = 0; j < fpsi_[m].size(); ++j)
                    if (fpsi_[m][j] != S(0)) out.coef(n + 1, j) += w * fpsi_[m][j];
            }
        nf = std::move(out);
    }

    /// nf := nf * (dCoef * D + eCoef * E + idCoef * I).
    void mul_affine(NormalForm<S>& nf, const S& dCoef, const S& eCoef, const S& idCoef) {
        NormalForm<S> acc;
        if (dCoef != S(0)) {
            NormalForm<S> tmp = nf;
            mul_D(tmp);
            acc.add_scaled(tmp, dCoef);
        }
        if (eCoef != S(0)) {
            NormalForm<S> tmp = nf;
            mul_E(tmp);
            acc.add_scaled(tmp, eCoef);
        }
        if (idCoef != S(0)) acc.add_scaled(nf, idCoef);
        nf = std::move(acc);
    }

    NormalForm<S> normal_order(const std::vector<Letter>& word) {
        NormalForm<S> nf = NormalForm<S>::one();
        for (Letter l : word) {
            if (l == Letter::D)
                mul_D(nf);
            else
                mul_E(nf);
        }
        return nf;
    }

    /// <W| word |V> for unscaled generators.
    S word_value(const std::vector<Letter>& word) {
        S v = value(normal_order(word));
        if (rho_ != S(1)) {
            S corr(1);
            for (size_t i = 0; i < word.size(); ++i) corr *= rho_;
            v /= corr;
        }
        return v;
    }

  private:
    void check_nonsingular() {
        const S ab = alpha_ * beta_;
        S ql(1);
        for (int l = 0; l <= 200; ++l) {
            const S diff = ab - ql * gamma_ * delta_;
            if constexpr (std::numeric_limits<S>::is_exact) {
                if (diff == S(0))
                    throw singular_case_error(
                        "singular case: alpha*beta equals q^l*gamma*delta");
            } else {
                using std::abs;
                if (abs(diff) < S(1e-12) * ab)
                    throw singular_case_error(
                        "singular case: alpha*beta is within 1e-12 of q^l*gamma*delta");
            }
            ql *= q_;
        }
    }

    // f_m = D^m E in normal form: sum_j fphi[m][j] D^j + E * sum_j fpsi[m][j] D^j
    // (coefficients in the scaled basis). Recurrence from f_m = f_{m-1}(qD + rho) + rho D^m.
    void grow_f(size_t upto) {
        while (fphi_.size() < upto + 1) {
            const size_t m = fphi_.size();
            const auto& pp = fphi_[m - 1];
            const auto& ps = fpsi_[m - 1];
            std::vector<S> np(m + 1, S(0)), ns(m + 1, S(0));
            for (size_t j = 0; j < pp.size(); ++j) {
                np[j + 1] += q_ * pp[j];
                np[j] += rho_ * pp[j];
            }
            np[m] += rho_;
            for (size_t j = 0; j < ps.size(); ++j) {
                ns[j + 1] += q_ * ps[j];
                ns[j] += rho_ * ps[j];
            }
            fphi_.push_back(std::move(np));
            fpsi_.push_back(std::move(ns));
        }
    }

    // g_n = D E^n: sum_j gphi[n][j] E^j + (sum_j gpsi[n][j] E^j) D.
    void grow_g(size_t upto) {
        while (gphi_.size() < upto + 1) {
            const size_t n = gphi_.size();
            const auto& pp = gphi_[n - 1];
            const auto& ps = gpsi_[n - 1];
            std::vector<S> np(n + 1, S(0)), ns(n + 1, S(0));
            for (size_t j = 0; j < pp.size(); ++j) {
                np[j + 1] += q_ * pp[j];
                np[j] += rho_ * pp[j];
            }
            np[n] += rho_;
            for (size_t j = 0; j < ps.size(); ++j) {
                ns[j + 1] += q_ * ps[j];
                ns[j] += rho_ * ps[j];
            }
            gphi_.push_back(std::move(np));
            gpsi_.push_back(std::move(ns));
        }
    }

    // T(n,m) = (rho/beta) T(n,m-1) + (delta/beta) <W|E^n f_{m-1}|V>.
    S trailing_d(int n, int m) {
        grow_f(static_cast<size_t>(m));
        S acc = rho_ / beta_ * T(n, m - 1);
        if (delta_ != S(0)) {
            S inner(0);
            const auto& pp = fphi_[static_cast<size_t>(m - 1)];
            const auto& ps = fpsi_[static_cast<size_t>(m - 1)];
            for (size_t j = 0; j < pp.size(); ++j)
                if (pp[j] != S(0)) inner += pp[j] * T(n, static_cast<int>(j));
            for (size_t j = 0; j < ps.size(); ++j)
                if (ps[j] != S(0)) inner += ps[j] * T(n + 1, static_cast<int>(j));
            acc += delta_ / beta_ * inner;
        }
        return acc;
    }

    // T(n,0) from <W|E = (rho <W| + gamma <W|D)/alpha. The g_{n-1} expansion
    // feeds back one T(n,0) term through T(n-1,1); solving for it divides by
    // 1 - q^{n-1} gamma delta/(alpha beta).
    S leading_e(int n) {
        grow_g(static_cast<size_t>(n));
        S acc = rho_ / alpha_ * T(n - 1, 0);
        if (gamma_ != S(0)) {
            S inner(0);
            const auto& pp = gphi_[static_cast<size_t>(n - 1)];
            const auto& ps = gpsi_[static_cast<size_t>(n - 1)];
            for (size_t j = 0; j < pp.size(); ++j)
                if (pp[j] != S(0)) inner += pp[j] * T(static_cast<int>(j), 0);
            for (size_t j = 0; j + 1 < ps.size(); ++j) // j <= n-2: full T(j,1)
                if (ps[j] != S(0)) inner += ps[j] * T(static_cast<int>(j), 1);
            // j = n-1 term: gpsi = q^{n-1}; only its T(n-1,0) part goes right.
            inner += ps[static_cast<size_t>(n - 1)] * (rho_ / beta_) * T(n - 1, 0);
            acc += gamma_ / alpha_ * inner;
        }
        S lam = gamma_ * delta_ / (alpha_ * beta_);
        S qp(1);
        for (int l = 0; l < n - 1; ++l) qp *= q_;
        lam *= qp;
        const S denom = S(1) - lam;
        if constexpr (std::numeric_limits<S>::is_exact) {
            if (denom == S(0)) throw singular_case_error("singular case hit in evaluation");
        } else {
            using std::abs;
            if (abs(denom) < S(1e-13))
                throw singular_case_error("singular case hit in evaluation");
        }
        return acc / denom;
    }

    S q_, alpha_, beta_, gamma_, delta_, rho_;
    std::vector<std::vector<S>> fphi_, fpsi_, gphi_, gpsi_;
    std::vector<std::vector<std::optional<S>>> memo_;
};

/// Rates and letter scales of the strip measure in an arbitrary scalar type.
/// sD and sE are the prefactors of the vertical-edge letters:
/// D-up = sD * D, E-up = sE * E, D-right = D-up + I, E-right = E-up - I.
template <class S>
struct StripRates {
    S q, r, sD, sE, alpha, beta, gamma, delta;
};

template <class S>
StripRates<S> derive_rates_t(const StripT<S>& sp) {
    for (S v : {sp.a, sp.b, sp.c, sp.d, sp.theta1, sp.theta2})
        if (v <= S(0) || v >= S(1))
            throw precondition_error("requires all six parameters in (0,1)");
    if (!(sp.theta1 < sp.theta2)) throw precondition_error("requires theta1 < theta2");
    if (!(sp.b + sp.d < S(1))) throw precondition_error("requires b + d < 1");
    StripRates<S> rr;
    rr.q = sp.theta1 / sp.theta2;
    rr.r = (S(1) - sp.theta2) / (S(1) - sp.theta1);
    rr.sD = (S(1) - sp.theta2) / sp.theta2;
    rr.sE = (S(1) - sp.theta1) / sp.theta2;
    const S denom = sp.theta2 * (S(1) - sp.b - sp.d);
    rr.alpha = (S(1) - sp.theta1) * sp.a / sp.theta2;
    rr.beta = (S(1) - sp.theta2) * sp.b / denom;
    rr.gamma = (S(1) - sp.theta2) * sp.c / sp.theta2;
    rr.delta = (S(1) - sp.theta1) * sp.d / denom;
    return rr;
}

template <class S>
DehpEngine<S> make_engine(const StripRates<S>& rr, S scale = S(1)) {
    return DehpEngine<S>(rr.q, rr.alpha, rr.beta, rr.gamma, rr.delta, scale);
}

/// Divide the weight vector by its (possibly negative) total and validate
/// that the result is a probability vector. Throws when the total is
/// negligible against the weight magnitudes or signs are inconsistent.
template <class S>
void normalize_signed(std::vector<S>& w, const S& total) {
    using std::abs;
    if constexpr (std::numeric_limits<S>::is_exact) {
        if (total == S(0)) throw singular_case_error("matrix-product normalizer vanishes");
    } else {
        S scale(0);
        for (const S& v : w) scale += abs(v);
        if (scale == S(0) || abs(total) * S(1e9) < scale)
            throw singular_case_error("matrix-product normalizer vanishes");
    }
    for (S& v : w) {
        v /= total;
        if (v < S(0)) {
            if constexpr (std::numeric_limits<S>::is_exact) {
                throw singular_case_error("matrix-product weights have inconsistent signs");
            } else {
                if (v < S(-1e-12))
                    throw singular_case_error(
                        "matrix-product weights have inconsistent signs");
                v = S(0);
            }
        }
    }
}

/// Stationary measure of the strip model on `path` by the matrix-product
/// construction: weight(tau) = <W| prod_i ((1-tau_i) E^{p_i} + tau_i D^{p_i}) |V>,
/// normalized. Throws singular_case_error or on a non-positive normalizer.
template <class S>
std::vector<S> mpa_measure_t(const DownRightPath& path, const StripT<S>& sp,
                             int cap = kWidthCap) {
    if (path.N > cap) throw precondition_error("path width exceeds the enumeration cap");
    const StripRates<S> rr = derive_rates_t(sp);
    DehpEngine<S> eng = make_engine(rr);
    const int N = path.N;
    const size_t dim = size_t{1} << N;
    std::vector<S> w(dim, S(0));
    S total(0);
    for (size_t s = 0; s < dim; ++s) {
        NormalForm<S> nf = NormalForm<S>::one();
        for (int i = 0; i < N; ++i) {
            const bool occupied = (s >> i) & 1;
            const bool up = path.labels[static_cast<size_t>(i)] == EdgeKind::Up;
            if (occupied)
                eng.mul_affine(nf, rr.sD, S(0), up ? S(0) : S(1));
            else
                eng.mul_affine(nf, S(0), rr.sE, up ? S(0) : S(-1));
        }
        w[s] = eng.value(nf);
        total += w[s];
    }
    // All weights share the sign of the normalizer (the normalized vector is
    // the stationary probability measure); only a vanishing normalizer is
    // fatal. Genuine positivity of the weights themselves holds when
    // gamma*delta < alpha*beta.
    normalize_signed(w, total);
    return w;
}

/// Open-ASEP stationary measure from the same word values (pi(tau)
/// proportional to the word with D at occupied sites).
template <class S>
std::vector<S> asep_measure_t(int N, DehpEngine<S>& eng) {
    const size_t dim = size_t{1} << N;
    std::vector<S> w(dim, S(0));
    S total(0);
    for (size_t s = 0; s < dim; ++s) {
        std::vector<Letter> word(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) word[i] = ((s >> i) & 1) ? Letter::D : Letter::E;
        w[s] = eng.word_value(word);
        total += w[s];
    }
    normalize_signed(w, total);
    return w;
}

/// <W|(E-up + t D-up)^N|V> for the strip rates (the unnormalized partition
/// value whose tau-derivative carries the mean density).
template <class S>
S partition_value_t(int N, const S& t, const StripRates<S>& rr) {
    DehpEngine<S> eng = make_engine(rr);
    NormalForm<S> nf = NormalForm<S>::one();
    for (int k = 0; k < N; ++k) eng.mul_affine(nf, t * rr.sD, rr.sE, S(0));
    return eng.value(nf);
}

/// <W|(E + t D)^N|V> for bare DEHP rates.
template <class S>
S dehp_grand_value(int N, const S& t, DehpEngine<S>& eng) {
    NormalForm<S> nf = NormalForm<S>::one();
    for (int k = 0; k < N; ++k) eng.mul_affine(nf, t, S(1), S(0));
    return eng.value(nf);
}

/// log <W|(E-up + t D-up)^N|V> with per-step rescaling; usable to N of a few
/// hundred. Double precision is enough here because every coefficient in
/// this expansion is positive.
double log_partition_mpa(int N, double t, const StripParams& sp);

struct BernoulliSpecial {
    double theta1 = 0;
    double p_up = 0;
    double p_right = 0;
};

/// Solve the product-measure condition for theta1 given (a,b,c,d,theta2) and
/// return the Bernoulli densities on up and right edges.
BernoulliSpecial bernoulli_special(double a, double b, double c, double d, double theta2);

struct ParityBernoulli {
    double p_up = 0;
    double p_right = 0;
    std::vector<double> even; // product measure restricted to even particle number
    std::vector<double> odd;
};

/// Stationary data of the anti-reflecting boundary a=b=c=d=1 on a horizontal
/// path of width N.
ParityBernoulli parity_bernoulli(double theta1, double theta2, int N);

/// Stationary measure of the reflecting boundary a=b=c=d=0 in the k-particle
/// sector: probability proportional to q^{-(m_1+...+m_k)} over occupied
/// sites m_1 < ... < m_k (1-based).
std::vector<double> qvolume_measure(int N, int k, double q);

/// Auto-precision stationary measure: doubles through N=8, 50-digit decimals
/// beyond (the right-edge letters mix signs, so long words cancel).
std::vector<double> mpa_measure(const DownRightPath& path, const StripParams& sp,
                                int precision_digits = 0);

/// One-off boundary-contracted word value <W|word|V>. Builds a fresh engine;
/// reuse a DehpEngine directly when evaluating many words.
inline double dehp_value(const std::vector<Letter>& word, const DerivedParams& dp) {
    DehpEngine<double> eng(dp.q, dp.alpha, dp.beta, dp.gamma, dp.delta);
    return eng.word_value(word);
}

inline StripT<Rational> rational_strip(long an, long ad, long bn, long bd, long cn,
                                       long cd, long dn, long dd, long t1n, long t1d,
                                       long t2n, long t2d) {
    return {Rational(an, ad), Rational(bn, bd), Rational(cn, cd),
            Rational(dn, dd), Rational(t1n, t1d), Rational(t2n, t2d)};
}

} // namespace sixv
