#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "invdiff/distance.hpp"

namespace invdiff {

enum class Metric { kDice, kJaccard, kOverlap, kHammingNorm };

constexpr Metric kAllMetrics[] = {Metric::kDice, Metric::kJaccard,
                                  Metric::kOverlap, Metric::kHammingNorm};

std::string to_string(Metric m);
double metric_value(const DistanceVector& d, Metric m);

constexpr std::size_t kGridPoints = 256;  // evenly spaced over [0, 1]

// Gaussian-kernel density estimate of a distance sample. The kernel sum is
// evaluated on the canonical 256-point [0,1] grid extended by three
// bandwidths of padding on each side (same spacing), then renormalized so
// the trapezoidal integral over the padded range is 1. positions[pad()]
// through positions[pad()+255] are the canonical grid.
struct DensityEstimate {
    Metric metric = Metric::kDice;
    double bandwidth = 0.0;
    std::size_t pad = 0;
    std::vector<double> positions;
    std::vector<double> density;

    double trapezoid_integral() const;
};

// bandwidth <= 0 selects Silverman's rule of thumb,
// 0.9 * min(sigma, IQR/1.34) * n^(-1/5), floored at 0.01 (degenerate
// all-equal samples get the floor). values must be non-empty and in [0,1].
DensityEstimate estimate_density(const std::vector<double>& values,
                                 double bandwidth = 0.0,
                                 Metric metric = Metric::kDice);

struct LocalPeak {
    double position = 0.0;  // clamped to [0, 1]
    double density = 0.0;
    bool nonzero = false;   // position > zero_tolerance
};

// Strict local maxima of the estimate: interior points greater than both
// neighbors, endpoints greater than their single neighbor. A run of exactly
// equal values above both its neighbors counts as one maximum at the run's
// center; an everywhere-flat curve has none.
std::vector<LocalPeak> local_maxima(const DensityEstimate& d,
                                    double zero_tolerance = 0.01);

struct FlagConfig {
    double bandwidth = 0.0;       // <= 0: Silverman
    double zero_tolerance = 0.01;
    int flag_threshold = 2;       // metrics with non-zero peaks needed to flag
    std::size_t min_inputs = 5;   // fewer vectors -> insufficient_data
};

enum class ReportStatus { kOk, kInsufficientData, kUnreached };

std::string to_string(ReportStatus s);

struct MetricReport {
    double bandwidth = 0.0;
    std::vector<LocalPeak> peaks;
    double largest_peak_distance = 0.0;  // greatest position with a local peak
    bool has_nonzero_peak = false;
};

struct BreakpointReport {
    std::string breakpoint_id;
    std::size_t n_inputs = 0;
    std::map<Metric, MetricReport> metrics;
    int nonzero_peak_metrics = 0;
    bool flagged = false;
    ReportStatus status = ReportStatus::kOk;

    // Density estimates retained for the per-metric curve CSVs.
    std::map<Metric, DensityEstimate> densities;
};

// All vectors must share one breakpoint id (UsageError otherwise). No
// vectors -> unreached; fewer than min_inputs -> insufficient_data; both
// leave flagged=false. Otherwise runs estimate_density + local_maxima per
// metric and flags iff at least flag_threshold of the four metrics show a
// non-zero local maximum.
BreakpointReport flag_breakpoint(const std::vector<DistanceVector>& vectors,
                                 const FlagConfig& config = {});

}  // namespace invdiff
