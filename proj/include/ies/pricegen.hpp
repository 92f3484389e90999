#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ies::pricegen {

/// Hourly electricity prices in $/MWh. Timestamps are Unix seconds (UTC).
struct PriceSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> prices;

    std::size_t size() const noexcept { return prices.size(); }
    bool empty() const noexcept { return prices.empty(); }

    /// Throws ContractError unless values are finite and timestamps strictly increase.
    void validate() const;
};

/// Builds a series with hourly timestamps starting at `start` (Unix seconds).
PriceSeries make_hourly_series(std::vector<double> prices, std::int64_t start = 0);

/// Sum of sine/cosine harmonics of a set of characteristic periods plus a constant.
///
/// Harmonic `i` (1-based) of period `c` contributes
/// `a * sin(2*pi*i*t/c) + b * cos(2*pi*i*t/c)`; coefficients are stored
/// period-major, i.e. index `p * harmonics + (i - 1)`.
struct FourierModel {
    std::vector<double> periods;
    int harmonics = 0;
    double offset = 0.0;
    std::vector<double> sin_coeffs;
    std::vector<double> cos_coeffs;

    double evaluate(double t) const;
    std::vector<double> evaluate(std::size_t n, double t0 = 0.0) const;
};

/// Least-squares fit of a FourierModel to `values` sampled at t = 0, 1, 2, ...
///
/// Throws FitError when the design matrix is rank deficient (duplicate or
/// aliased periods, harmonics at or above Nyquist).
FourierModel fit_fourier(std::span<const double> values, std::span<const double> periods, int harmonics);

/// Monotone map between residual space and standard-normal space.
///
/// The empirical variant interpolates linearly between the sorted distinct
/// training values, each placed at its mid-rank plotting position. Outside
/// the training range the CDF decays exponentially with a scale estimated
/// from the mean excess of the outermost training points.
class Gaussianizer {
public:
    Gaussianizer() = default;

    static Gaussianizer identity();
    static Gaussianizer fit(std::span<const double> sample);

    /// Knot-level constructor, used when deserializing.
    Gaussianizer(std::vector<double> values, std::vector<double> probabilities, double lower_tail_scale,
                 double upper_tail_scale);

    bool is_identity() const noexcept { return identity_; }

    double cdf(double x) const;
    /// Inverse of cdf; `p` must lie in (0, 1).
    double quantile(double p) const;

    double to_normal(double x) const;
    double from_normal(double z) const;

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& probabilities() const noexcept { return probs_; }
    double lower_tail_scale() const noexcept { return lower_scale_; }
    double upper_tail_scale() const noexcept { return upper_scale_; }

private:
    bool identity_ = true;
    std::vector<double> values_;
    std::vector<double> probs_;
    std::vector<double> survival_;  // 1 - probs_, precomputed
    double lower_scale_ = 1.0;
    double upper_scale_ = 1.0;
};

/// ARMA(P, Q) process on the gaussianized residual:
/// y_t = sum_i ar[i] y_{t-1-i} + e_t + sum_j ma[j] e_{t-1-j}, e_t ~ N(0, noise_std^2).
struct ArmaModel {
    std::vector<double> ar;
    std::vector<double> ma;
    double noise_std = 1.0;
    Gaussianizer gaussianizer;

    int p() const noexcept { return static_cast<int>(ar.size()); }
    int q() const noexcept { return static_cast<int>(ma.size()); }
};

struct ArmaFitOptions {
    int max_iterations = 1000;
    double tolerance = 1e-10;
};

/// Coefficients from conditional-sum-of-squares estimation in normal space.
struct ArmaEstimate {
    std::vector<double> ar;
    std::vector<double> ma;
    double noise_std = 0.0;
    int iterations = 0;
};

/// Hannan-Rissanen start followed by Levenberg-Marquardt on the conditional
/// sum of squares. Input is assumed already standardized.
ArmaEstimate estimate_arma(std::span<const double> series, int p, int q, const ArmaFitOptions& options = {});

/// Gaussianizes `residual`, then estimates ARMA coefficients on the result.
/// Rejects non-stationary fits with FitError.
ArmaModel fit_arma(std::span<const double> residual, int p, int q, const ArmaFitOptions& options = {});

/// Smallest modulus among the roots of 1 - ar[0] z - ... - ar[P-1] z^P.
/// Infinity when the polynomial has no roots.
double ar_root_min_modulus(std::span<const double> ar);

/// True when every AR root lies outside the unit circle by at least 1e-9.
bool is_stationary(std::span<const double> ar);

struct SyntheticPriceModel {
    FourierModel fourier;
    ArmaModel arma;
    /// Rank-match each generated trace onto the training prices.
    bool preserve_cdf = true;
    /// Sorted training prices, kept when preserve_cdf is set.
    std::vector<double> training_quantiles;

    std::string site_id;
    int first_year = 0;
    int last_year = 0;
    std::size_t training_hours = 0;
};

struct TrainOptions {
    std::vector<double> periods{8760.0, 168.0, 24.0};
    int harmonics = 3;
    int p = 3;
    int q = 1;
    bool preserve_cdf = true;
    ArmaFitOptions arma;
};

SyntheticPriceModel train(const PriceSeries& history, const TrainOptions& options = {}, std::string site_id = {});

/// Deterministic for identical (model, hours, seed).
std::vector<double> generate(const SyntheticPriceModel& model, std::size_t hours, std::uint64_t seed);

PriceSeries generate_series(const SyntheticPriceModel& model, std::size_t hours, std::uint64_t seed,
                            std::int64_t start_timestamp = 0);

struct Moments {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    double kurtosis = 0.0;  // excess, bias-corrected
    double skewness = 0.0;  // bias-corrected
};

Moments compute_moments(std::span<const double> values);

struct MomentTolerances {
    double location_rel = 0.05;
    double location_abs = 0.5;
    double shape_rel = 0.05;
    double shape_abs = 0.0;
};

struct MomentCheck {
    std::string name;
    double historical = 0.0;
    double synthetic = 0.0;
    double delta = 0.0;
    bool pass = false;
};

struct MomentReport {
    Moments historical;
    Moments synthetic;
    std::vector<MomentCheck> checks;

    bool all_pass() const;
};

MomentReport validate_moments(std::span<const double> historical, std::span<const double> synthetic,
                              const MomentTolerances& tol = {});

// Persistence --------------------------------------------------------------

PriceSeries read_price_csv(const std::filesystem::path& path);
void write_price_csv(const std::filesystem::path& path, const PriceSeries& series,
                     const std::vector<std::string>& metadata = {});

std::string to_json(const SyntheticPriceModel& model);
SyntheticPriceModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const SyntheticPriceModel& model);
SyntheticPriceModel load_model(const std::filesystem::path& path);

/// ISO-8601 "YYYY-MM-DDTHH:MM[:SS][Z]" <-> Unix seconds (UTC).
std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t unix_seconds);

}  // namespace ies::pricegen
