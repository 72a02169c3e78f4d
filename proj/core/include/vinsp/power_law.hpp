#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace vinsp {

struct PowerLawOptions {
    std::size_t bootstraps = 1000;
    std::size_t min_observations = 50;  // strictly positive values required
    std::size_t min_tail = 10;          // smallest tail scanned / accepted
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

/// One scanned lower cutoff with its maximum-likelihood exponent and KS distance.
struct ScanPoint {
    std::uint64_t x_min = 0;
    double alpha = 0.0;
    double ks = 0.0;
    std::size_t n_tail = 0;
};

struct PowerLawFit {
    double alpha = 0.0;
    std::uint64_t x_min = 1;
    double ks_statistic = 0.0;
    double p_value = 0.0;
    std::size_t n_tail = 0;
    std::size_t bootstraps = 0;
    std::vector<ScanPoint> scan;
};

/// Discrete power-law fit: for every candidate x_min the exponent maximizing
/// the discrete likelihood; the x_min with the smallest KS distance is kept.
/// The p-value is the fraction of semi-parametric bootstrap resamples whose
/// own best-fit KS distance is at least the observed one. Zeros are ignored.
PowerLawFit fit_power_law(std::span<const std::uint64_t> values, const PowerLawOptions& options = {});

/// Discrete MLE exponent for a tail (all values >= x_min).
double discrete_alpha_mle(std::span<const std::uint64_t> tail, std::uint64_t x_min);

/// Hurwitz zeta function sum_{k>=0} (k + q)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Exact inverse-CDF sampler for P(x) = x^-alpha / zeta(alpha, x_min); the
/// far tail beyond a survival of 1e-10 uses the continuous approximation.
class DiscretePowerLawSampler {
public:
    DiscretePowerLawSampler(double alpha, std::uint64_t x_min);
    std::uint64_t operator()(std::mt19937_64& rng) const;

private:
    double alpha_;
    std::uint64_t x_min_;
    std::vector<double> cdf_;  // cdf_[i] = P(X <= x_min + i)
};

nlohmann::json to_json(const PowerLawFit& fit);

/// CSV trace `x_min,alpha,ks,n_tail` of the x_min scan.
void write_scan_csv(const PowerLawFit& fit, const std::filesystem::path& path);

}  // namespace vinsp
