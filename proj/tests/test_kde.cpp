#include "doctest.h"

#include <cmath>

#include "invdiff/errors.hpp"
#include "invdiff/kde.hpp"
#include "invdiff/numeric.hpp"

using namespace invdiff;

namespace {

// Brute-force Gaussian-sum oracle, evaluated with its own accumulation
// order and its own trapezoid, independent of kde.cpp.
std::vector<double> oracle_density(const std::vector<double>& values, double h,
                                   const std::vector<double>& positions) {
    const double norm = 1.0 / (std::sqrt(2.0 * 3.14159265358979323846) * h *
                               static_cast<double>(values.size()));
    std::vector<double> raw(positions.size(), 0.0);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        long double acc = 0.0L;
        for (double v : values) {
            const long double t = (positions[k] - v) / h;
            acc += std::exp(static_cast<double>(-0.5L * t * t));
        }
        raw[k] = static_cast<double>(acc) * norm;
    }
    long double z = 0.0L;
    for (std::size_t k = 1; k < positions.size(); ++k) {
        z += 0.5L * (raw[k] + raw[k - 1]) * (positions[k] - positions[k - 1]);
    }
    std::vector<double> out(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out[k] = raw[k] / static_cast<double>(z);
    }
    return out;
}

std::vector<DistanceVector> vectors_from(const std::vector<double>& dice,
                                         const std::vector<double>& jaccard,
                                         const std::vector<double>& overlap,
                                         const std::vector<double>& hamming) {
    std::vector<DistanceVector> out;
    for (std::size_t i = 0; i < dice.size(); ++i) {
        DistanceVector d;
        d.breakpoint_id = "bp";
        d.input_id = "in" + std::to_string(i);
        d.dice = dice[i];
        d.jaccard = jaccard[i];
        d.overlap = overlap[i];
        d.hamming_norm = hamming[i];
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<double> constant(std::size_t n, double v) {
    return std::vector<double>(n, v);
}

std::vector<double> bimodal(std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = n / 2; i < n; ++i) v[i] = 0.8;
    return v;
}

}  // namespace

TEST_CASE("density matches the brute-force oracle on random samples") {
    Rng rng(1234);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> values;
        const std::size_t n = 1 + rng.below(40);
        for (std::size_t i = 0; i < n; ++i) values.push_back(rng.unit());
        const double bw = iter % 2 ? 0.0 : 0.02 + 0.2 * rng.unit();

        const DensityEstimate est = estimate_density(values, bw);
        const auto expected = oracle_density(values, est.bandwidth, est.positions);
        REQUIRE(expected.size() == est.density.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(est.density[k] == doctest::Approx(expected[k]).epsilon(1e-9));
        }
        // Proper density over the padded evaluation range.
        CHECK(est.trapezoid_integral() == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("degenerate all-zero sample peaks exactly at position zero") {
    const DensityEstimate est = estimate_density(constant(20, 0.0));
    CHECK(est.bandwidth == 0.01);  // Silverman floor
    const auto peaks = local_maxima(est);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == 0.0);
    CHECK(!peaks[0].nonzero);
}

TEST_CASE("single value 0.5 is unimodal at 0.5") {
    const DensityEstimate est = estimate_density({0.5});
    const auto peaks = local_maxima(est);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(peaks[0].nonzero);
}

TEST_CASE("bimodal sample yields two maxima, one non-zero") {
    SUBCASE("fixed bandwidth 0.05") {
        const DensityEstimate est = estimate_density(bimodal(40), 0.05);
        const auto peaks = local_maxima(est);
        REQUIRE(peaks.size() == 2);
        CHECK(peaks[0].position == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(peaks[1].position == doctest::Approx(0.8).epsilon(5e-3));
        CHECK(!peaks[0].nonzero);
        CHECK(peaks[1].nonzero);
    }
    SUBCASE("auto bandwidth, n=200") {
        const DensityEstimate est = estimate_density(bimodal(200));
        const auto peaks = local_maxima(est);
        REQUIRE(peaks.size() == 2);
        int nonzero = 0;
        for (const auto& p : peaks) nonzero += p.nonzero ? 1 : 0;
        CHECK(nonzero == 1);
    }
}

TEST_CASE("flat density has no strict maxima") {
    DensityEstimate flat;
    flat.bandwidth = 0.1;
    flat.pad = 0;
    for (std::size_t k = 0; k < kGridPoints; ++k) {
        flat.positions.push_back(static_cast<double>(k) / (kGridPoints - 1));
        flat.density.push_back(1.0);
    }
    CHECK(local_maxima(flat).empty());
}

TEST_CASE("empty sample is a usage error") {
    CHECK_THROWS_AS(estimate_density({}), UsageError);
}

TEST_CASE("flag_breakpoint statuses and thresholds") {
    FlagConfig fc;

    SUBCASE("all-zero vectors: peak at zero, not flagged") {
        auto vectors = vectors_from(constant(20, 0.0), constant(20, 0.0),
                                    constant(20, 0.0), constant(20, 0.0));
        const auto report = flag_breakpoint(vectors, fc);
        CHECK(report.status == ReportStatus::kOk);
        CHECK(!report.flagged);
        CHECK(report.nonzero_peak_metrics == 0);
        for (Metric m : kAllMetrics) {
            CHECK(report.metrics.at(m).largest_peak_distance == 0.0);
        }
    }

    SUBCASE("exactly two shifted metrics flag the breakpoint") {
        auto vectors = vectors_from(bimodal(20), bimodal(20), constant(20, 0.0),
                                    constant(20, 0.0));
        const auto report = flag_breakpoint(vectors, fc);
        CHECK(report.flagged);
        CHECK(report.nonzero_peak_metrics == 2);
    }

    SUBCASE("one shifted metric stays below the threshold") {
        auto vectors = vectors_from(bimodal(20), constant(20, 0.0),
                                    constant(20, 0.0), constant(20, 0.0));
        const auto report = flag_breakpoint(vectors, fc);
        CHECK(!report.flagged);
        CHECK(report.nonzero_peak_metrics == 1);
    }

    SUBCASE("fewer than min_inputs vectors is insufficient data") {
        auto vectors = vectors_from(constant(4, 0.5), constant(4, 0.5),
                                    constant(4, 0.5), constant(4, 0.5));
        const auto report = flag_breakpoint(vectors, fc);
        CHECK(report.status == ReportStatus::kInsufficientData);
        CHECK(!report.flagged);
    }

    SUBCASE("no vectors is unreached") {
        const auto report = flag_breakpoint({}, fc);
        CHECK(report.status == ReportStatus::kUnreached);
        CHECK(!report.flagged);
    }

    SUBCASE("mixed breakpoint ids are a usage error") {
        auto vectors = vectors_from(constant(6, 0.0), constant(6, 0.0),
                                    constant(6, 0.0), constant(6, 0.0));
        vectors[3].breakpoint_id = "other";
        CHECK_THROWS_AS(flag_breakpoint(vectors, fc), UsageError);
    }
}

TEST_CASE("flag monotonicity: raising the threshold never adds flags") {
    Rng rng(555);
    for (int iter = 0; iter < 25; ++iter) {
        std::vector<double> cols[4];
        for (auto& col : cols) {
            const int mode = static_cast<int>(rng.below(3));
            for (int i = 0; i < 16; ++i) {
                if (mode == 0) {
                    col.push_back(0.0);
                } else if (mode == 1) {
                    col.push_back(i % 2 ? 0.0 : 0.6);
                } else {
                    col.push_back(rng.unit());
                }
            }
        }
        auto vectors = vectors_from(cols[0], cols[1], cols[2], cols[3]);
        bool prev = true;
        for (int threshold = 1; threshold <= 4; ++threshold) {
            FlagConfig fc;
            fc.flag_threshold = threshold;
            const bool flagged = flag_breakpoint(vectors, fc).flagged;
            if (!prev) CHECK(!flagged);
            prev = flagged;
        }
    }
}

TEST_CASE("shift property: moving mass up moves the largest peak up") {
    std::vector<double> base;
    Rng rng(9);
    for (int i = 0; i < 30; ++i) base.push_back(0.1 + 0.05 * rng.unit());
    std::vector<double> shifted;
    for (double v : base) shifted.push_back(std::min(1.0, v + 0.5));

    const auto peaks_base = local_maxima(estimate_density(base, 0.05));
    const auto peaks_shifted = local_maxima(estimate_density(shifted, 0.05));
    REQUIRE(!peaks_base.empty());
    REQUIRE(!peaks_shifted.empty());
    double largest_base = 0.0, largest_shifted = 0.0;
    for (const auto& p : peaks_base) largest_base = std::max(largest_base, p.position);
    for (const auto& p : peaks_shifted) {
        largest_shifted = std::max(largest_shifted, p.position);
    }
    CHECK(largest_shifted > largest_base);
}

TEST_CASE("determinism: identical inputs give identical reports") {
    auto vectors = vectors_from(bimodal(20), bimodal(20), constant(20, 0.3),
                                constant(20, 0.0));
    const auto a = flag_breakpoint(vectors, {});
    const auto b = flag_breakpoint(vectors, {});
    CHECK(a.flagged == b.flagged);
    CHECK(a.nonzero_peak_metrics == b.nonzero_peak_metrics);
    for (Metric m : kAllMetrics) {
        CHECK(a.metrics.at(m).largest_peak_distance ==
              b.metrics.at(m).largest_peak_distance);
        REQUIRE(a.densities.at(m).density.size() == b.densities.at(m).density.size());
        for (std::size_t k = 0; k < a.densities.at(m).density.size(); ++k) {
            CHECK(a.densities.at(m).density[k] == b.densities.at(m).density[k]);
        }
    }
}
