#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cellcov/rng.hpp"
#include "cellcov/specfun.hpp"

namespace cellcov {

// Shadowing law for the per-link gain S. Only two kinds are supported:
// degenerate S = 1 and lognormal in dB (S = 10^(X/10), X ~ N(0, sigma_dB^2),
// median 1). The PLPS law depends on it only through E[S^delta].
struct ShadowingSpec {
    enum class Kind { degenerate, lognormal };
    Kind kind = Kind::degenerate;
    double sigma_db = 0.0;

    static ShadowingSpec none() { return {Kind::degenerate, 0.0}; }
    static ShadowingSpec lognormal_db(double sigma_db);

    // E[S^delta]; closed form exp((delta*sigma*ln10/10)^2 / 2) for lognormal.
    double delta_moment(Delta delta) const;

    double sample(CounterRng& rng) const;
    // Random-access draw keyed by (seed, tag, i, j, lane); used for per
    // user-BS pair shadowing in the deployment simulator.
    double sample_at(std::uint64_t seed, std::uint32_t tag,
                     std::uint32_t i, std::uint32_t j, std::uint32_t lane = 0) const;
};

struct NetworkModel {
    double alpha;          // path loss exponent, > 2
    double lambda;         // BS density, > 0
    ShadowingSpec shadowing;

    NetworkModel(double alpha_, double lambda_, ShadowingSpec shadowing_ = ShadowingSpec::none());

    Delta delta() const { return Delta::from_alpha(alpha); }
    double s_delta_moment() const { return shadowing.delta_moment(delta()); }
    // lambda * pi * E[S^delta]: the coefficient of the PLPS intensity
    // measure Lambda((0,r]) = lambda*pi*E[S^delta]*r^delta.
    double plps_intensity_coeff() const;
};

// Coordination/diversity scheme. kappa > K is unusual (it can only arise from
// empty cells) and is flagged rather than rejected.
struct Scheme {
    int K;          // coordination size,  >= 1
    int M;          // RBs per user,       >= 1
    double kappa;   // effective load,     >= 1

    Scheme(int K_, int M_, double kappa_);
    bool kappa_exceeds_k() const { return kappa > static_cast<double>(K); }
};

// One realization of the marked path loss process with shadowing: the n
// smallest points xi_1 < xi_2 < ... with per-RB fading and activity marks.
struct PlpsSample {
    std::vector<double> xi;        // ascending, positive
    std::vector<double> fading;    // n x M, row-major, unit-mean exponential
    std::vector<bool> active;      // chi marks
    int rb_count = 0;

    double fade(std::size_t i, int m) const { return fading[i * rb_count + m]; }
    std::string to_json() const;
};

// Samples the PLPS directly in 1-D through the inverse-measure transform
// xi_k = (E_k / (lambda*pi*E[S^delta]))^(1/delta) where E_k are the arrivals
// of a unit-rate Poisson process. The serving point is always active, points
// 2..K are muted, and points beyond K transmit independently w.p. 1/kappa.
PlpsSample sample_plps(const NetworkModel& model, const Scheme& scheme,
                       int n_points, std::uint64_t rng_seed, std::uint64_t realization = 0);

// In-place variant for hot loops; draws from the supplied stream.
void sample_plps_into(PlpsSample& out, const NetworkModel& model, const Scheme& scheme,
                      int n_points, CounterRng& rng);

// ccdf of xi_1/xi_k for k >= 2: (1 - x^delta)^(k-1) on [0,1].
double xi_ratio_ccdf(int k, double x, Delta delta);

// Closed-form fraction of the expected interference lost by truncating the
// PLPS at its n-th point, using the deterministic radii r_k with
// Lambda((0,r_k]) = k. Documents the default n_points choice.
double plps_truncation_tail_fraction(const NetworkModel& model, double kappa, int n_points);

} // namespace cellcov
