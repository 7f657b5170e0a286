#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "bunkbed/bunkbed_graph.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/parallel.hpp"
#include "bunkbed/rng.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed {

// Floating values render with 12 significant digits everywhere.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Upper quantile of the standard normal distribution (Acklam's rational
// approximation, sharpened by one Halley step on erfc).
inline double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw Error(errc::invalid_parameters, "normal quantile needs prob in (0,1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;

    double x;
    if (prob < low) {
        double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - low) {
        double q = prob - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
    double u = err * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

// Wilson score half-width for a binomial proportion.
inline double wilson_half_width(std::uint64_t successes, std::uint64_t samples, double z) {
    const double n = static_cast<double>(samples);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    return z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
}

// Paired Monte Carlo estimate of the two bunkbed probabilities and of their
// difference, all read off the same sampled configurations.
struct McEstimate {
    std::uint64_t samples = 0;
    double p = 0.0;
    double confidence = 0.0;
    std::uint64_t seed = 0;
    double mean_same = 0.0;
    double mean_cross = 0.0;
    double mean_diff = 0.0;
    double ci_same = 0.0;   // Wilson half-width
    double ci_cross = 0.0;  // Wilson half-width
    double ci_diff = 0.0;   // normal half-width from the paired sample sd
    std::uint64_t count_same = 0;
    std::uint64_t count_cross = 0;
    std::uint64_t count_both = 0;
};

struct McOptions {
    double confidence = 0.95;
    int threads = 0;
};

// Draws `samples` independent configurations (each layer edge open with
// probability p) and evaluates both connection indicators per configuration
// on one union-find build. The randomness of sample i depends only on
// (seed, i), with layer edges drawn in index order, so the estimate is
// bit-identical for any worker count.
inline McEstimate estimate(const Graph& g, const TransversalSet& h, int u, int v, double p,
                           std::uint64_t samples, std::uint64_t seed, const McOptions& opt = {}) {
    g.require_label(u);
    g.require_label(v);
    if (!(p > 0.0 && p < 1.0))
        throw Error(errc::invalid_parameters, "p must lie in (0,1)");
    if (samples < 1) throw Error(errc::invalid_parameters, "samples must be >= 1");
    if (!(opt.confidence > 0.0 && opt.confidence < 1.0))
        throw Error(errc::invalid_parameters, "confidence must lie in (0,1)");

    BunkbedGraph bb(g, h);
    const int M = bb.layer_edge_count();
    const int target_same = bb.upper(v);
    const int target_cross = bb.lower(v);

    const int workers = resolve_threads(opt.threads);
    std::vector<std::uint64_t> same_tally(workers, 0), cross_tally(workers, 0),
        both_tally(workers, 0);

    parallel_chunks(samples, workers, [&](int worker, std::uint64_t lo, std::uint64_t hi) {
        UnionFind base(bb.layered_vertex_count() + 1);
        bb.apply_transversals(base);
        UnionFind uf;
        const auto& edges = bb.layer_edges();
        for (std::uint64_t i = lo; i < hi; ++i) {
            SplitMix64 rng(seed, i);
            uf.reset_from(base);
            for (int e = 0; e < M; ++e) {
                const bool open = rng.next_unit() < p;
                if (open) uf.unite(edges[e].first, edges[e].second);
            }
            const bool hit_same = uf.same(u, target_same);
            const bool hit_cross = uf.same(u, target_cross);
            same_tally[worker] += hit_same;
            cross_tally[worker] += hit_cross;
            both_tally[worker] += hit_same && hit_cross;
        }
    });

    McEstimate est;
    est.samples = samples;
    est.p = p;
    est.confidence = opt.confidence;
    est.seed = seed;
    for (int w = 0; w < workers; ++w) {
        est.count_same += same_tally[w];
        est.count_cross += cross_tally[w];
        est.count_both += both_tally[w];
    }

    const double n = static_cast<double>(samples);
    est.mean_same = static_cast<double>(est.count_same) / n;
    est.mean_cross = static_cast<double>(est.count_cross) / n;
    est.mean_diff = est.mean_same - est.mean_cross;

    const double z = normal_quantile((1.0 + opt.confidence) / 2.0);
    est.ci_same = wilson_half_width(est.count_same, samples, z);
    est.ci_cross = wilson_half_width(est.count_cross, samples, z);

    if (samples >= 2) {
        // diff_i in {-1, 0, 1}: sum = count_same - count_cross,
        // sum of squares = count_same + count_cross - 2 * count_both.
        const double sum = static_cast<double>(est.count_same) - static_cast<double>(est.count_cross);
        const double sum_sq = static_cast<double>(est.count_same + est.count_cross - 2 * est.count_both);
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        est.ci_diff = z * std::sqrt(var / n);
    }
    return est;
}

}  // namespace bunkbed
