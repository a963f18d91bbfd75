#include "invdiff/kde.hpp"

#include <algorithm>
#include <cmath>

#include "invdiff/errors.hpp"

namespace invdiff {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::kDice: return "dice";
        case Metric::kJaccard: return "jaccard";
        case Metric::kOverlap: return "overlap";
        case Metric::kHammingNorm: return "hamming_norm";
    }
    return "dice";
}

double metric_value(const DistanceVector& d, Metric m) {
    switch (m) {
        case Metric::kDice: return d.dice;
        case Metric::kJaccard: return d.jaccard;
        case Metric::kOverlap: return d.overlap;
        case Metric::kHammingNorm: return d.hamming_norm;
    }
    return d.dice;
}

std::string to_string(ReportStatus s) {
    switch (s) {
        case ReportStatus::kOk: return "ok";
        case ReportStatus::kInsufficientData: return "insufficient_data";
        case ReportStatus::kUnreached: return "unreached";
    }
    return "ok";
}

double DensityEstimate::trapezoid_integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < positions.size(); ++i) {
        acc += 0.5 * (density[i] + density[i - 1]) * (positions[i] - positions[i - 1]);
    }
    return acc;
}

namespace {

// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::vector<double> sorted, double p) {
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double spread = 0.0;
    if (n >= 2) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
        spread = std::min(sigma, iqr / 1.34);
    }
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    return std::max(h, 0.01);
}

constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

DensityEstimate estimate_density(const std::vector<double>& values,
                                 double bandwidth, Metric metric) {
    if (values.empty()) throw UsageError("estimate_density requires values");
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw UsageError("distance samples must lie in [0, 1]");
        }
    }

    DensityEstimate est;
    est.metric = metric;
    est.bandwidth = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(values);

    const double step = 1.0 / static_cast<double>(kGridPoints - 1);
    est.pad = static_cast<std::size_t>(std::ceil(3.0 * est.bandwidth / step));
    const std::size_t total = kGridPoints + 2 * est.pad;
    est.positions.resize(total);
    est.density.resize(total);

    const double n = static_cast<double>(values.size());
    const double h = est.bandwidth;
    for (std::size_t k = 0; k < total; ++k) {
        const double x =
            (static_cast<double>(k) - static_cast<double>(est.pad)) * step;
        est.positions[k] = x;
        double sum = 0.0;
        for (double v : values) {
            const double t = (x - v) / h;
            sum += std::exp(-0.5 * t * t);
        }
        est.density[k] = sum * kInvSqrt2Pi / (n * h);
    }

    // Renormalize over the padded range so the curve is a proper density
    // on the domain we actually report.
    const double z = est.trapezoid_integral();
    if (z > 0.0) {
        for (double& d : est.density) d /= z;
    }
    return est;
}

std::vector<LocalPeak> local_maxima(const DensityEstimate& d,
                                    double zero_tolerance) {
    std::vector<LocalPeak> peaks;
    const std::size_t n = d.density.size();
    // Scan runs of equal density so an exact tie straddling a sample that
    // falls between two grid points (e.g. all distances 0.5 on the 256
    // grid) still counts as one peak, at the run's center. Single-point
    // runs reduce to the plain strict-neighbor rule; a run spanning the
    // whole curve (flat density) has no lower neighbor and never counts.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && d.density[j + 1] == d.density[i]) ++j;
        const bool has_left = i > 0;
        const bool has_right = j + 1 < n;
        const bool left_ok = !has_left || d.density[i] > d.density[i - 1];
        const bool right_ok = !has_right || d.density[j] > d.density[j + 1];
        if ((has_left || has_right) && left_ok && right_ok) {
            LocalPeak p;
            p.position =
                std::clamp(0.5 * (d.positions[i] + d.positions[j]), 0.0, 1.0);
            p.density = d.density[i];
            p.nonzero = p.position > zero_tolerance;
            peaks.push_back(p);
        }
        i = j + 1;
    }
    return peaks;
}

BreakpointReport flag_breakpoint(const std::vector<DistanceVector>& vectors,
                                 const FlagConfig& config) {
    if (config.flag_threshold < 1 || config.flag_threshold > 4) {
        throw UsageError("flag_threshold must be in 1..4");
    }
    BreakpointReport report;
    if (vectors.empty()) {
        report.status = ReportStatus::kUnreached;
        return report;
    }
    report.breakpoint_id = vectors.front().breakpoint_id;
    for (const auto& v : vectors) {
        if (v.breakpoint_id != report.breakpoint_id) {
            throw UsageError("flag_breakpoint: vectors span breakpoints " +
                             report.breakpoint_id + " and " + v.breakpoint_id);
        }
    }
    report.n_inputs = vectors.size();
    if (vectors.size() < config.min_inputs) {
        report.status = ReportStatus::kInsufficientData;
        return report;
    }

    report.status = ReportStatus::kOk;
    for (Metric m : kAllMetrics) {
        std::vector<double> samples;
        samples.reserve(vectors.size());
        for (const auto& v : vectors) samples.push_back(metric_value(v, m));

        DensityEstimate est = estimate_density(samples, config.bandwidth, m);
        MetricReport mr;
        mr.bandwidth = est.bandwidth;
        mr.peaks = local_maxima(est, config.zero_tolerance);
        for (const auto& p : mr.peaks) {
            mr.largest_peak_distance = std::max(mr.largest_peak_distance, p.position);
            mr.has_nonzero_peak = mr.has_nonzero_peak || p.nonzero;
        }
        if (mr.has_nonzero_peak) ++report.nonzero_peak_metrics;
        report.metrics[m] = std::move(mr);
        report.densities[m] = std::move(est);
    }
    report.flagged = report.nonzero_peak_metrics >= config.flag_threshold;
    return report;
}

}  // namespace invdiff
