#include "ies/pricegen.hpp"

#include "ies/error.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace ies::pricegen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTinyProbability = 1e-300;
constexpr int kBurnIn = 1000;

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    static const boost::math::normal standard;
    p = std::clamp(p, kTinyProbability, 1.0 - 1e-16);
    return boost::math::quantile(standard, p);
}

// Linear interpolation of ys over xs (both strictly increasing) at x in [xs.front(), xs.back()].
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) {
        return ys.front();
    }
    if (it == xs.end()) {
        return ys.back();
    }
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const auto lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

// Same, interpolating over a strictly decreasing abscissa.
double interpolate_decreasing(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x, std::greater<>());
    if (it == xs.begin()) {
        return ys.front();
    }
    if (it == xs.end()) {
        return ys.back();
    }
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const auto lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

double mean_excess(std::span<const double> sorted, bool upper) {
    const std::size_t n = sorted.size();
    const std::size_t k = std::clamp<std::size_t>(n / 100, 5, std::max<std::size_t>(n - 1, 1));
    if (n < 2) {
        return 1.0;
    }
    double sum = 0.0;
    if (upper) {
        const double threshold = sorted[n - 1 - k];
        for (std::size_t i = n - k; i < n; ++i) {
            sum += sorted[i] - threshold;
        }
    } else {
        const double threshold = sorted[k];
        for (std::size_t i = 0; i < k; ++i) {
            sum += threshold - sorted[i];
        }
    }
    double scale = sum / static_cast<double>(k);
    if (!(scale > 0.0)) {
        scale = std::max(1e-6, (sorted.back() - sorted.front()) / static_cast<double>(n));
    }
    return scale;
}

}  // namespace

// PriceSeries ----------------------------------------------------------------

void PriceSeries::validate() const {
    if (timestamps.size() != prices.size()) {
        throw ContractError("price series: timestamp and price columns differ in length");
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!std::isfinite(prices[i])) {
            throw ContractError("price series: non-finite price at row " + std::to_string(i));
        }
        if (i > 0 && timestamps[i] <= timestamps[i - 1]) {
            throw ContractError("price series: timestamps not strictly increasing at row " + std::to_string(i));
        }
    }
}

PriceSeries make_hourly_series(std::vector<double> prices, std::int64_t start) {
    PriceSeries s;
    s.timestamps.resize(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) {
        s.timestamps[i] = start + static_cast<std::int64_t>(i) * 3600;
    }
    s.prices = std::move(prices);
    return s;
}

// Fourier ---------------------------------------------------------------------

double FourierModel::evaluate(double t) const {
    double value = offset;
    for (std::size_t p = 0; p < periods.size(); ++p) {
        for (int i = 1; i <= harmonics; ++i) {
            const double arg = kTwoPi * i * t / periods[p];
            const std::size_t idx = p * static_cast<std::size_t>(harmonics) + static_cast<std::size_t>(i - 1);
            value += sin_coeffs[idx] * std::sin(arg) + cos_coeffs[idx] * std::cos(arg);
        }
    }
    return value;
}

std::vector<double> FourierModel::evaluate(std::size_t n, double t0) const {
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = evaluate(t0 + static_cast<double>(t));
    }
    return out;
}

FourierModel fit_fourier(std::span<const double> values, std::span<const double> periods, int harmonics) {
    if (harmonics < 0) {
        throw ContractError("fit_fourier: harmonics must be non-negative");
    }
    for (double c : periods) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ContractError("fit_fourier: periods must be positive");
        }
    }
    const std::size_t n = values.size();
    const std::size_t terms = 2 * periods.size() * static_cast<std::size_t>(harmonics);
    if (n < std::max<std::size_t>(terms, 1) || n < terms + 1) {
        throw ContractError("fit_fourier: series too short for " + std::to_string(terms) + " harmonic terms");
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(terms + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        design(row, 0) = 1.0;
        Eigen::Index col = 1;
        for (double c : periods) {
            for (int i = 1; i <= harmonics; ++i) {
                const double arg = kTwoPi * i * static_cast<double>(t) / c;
                design(row, col++) = std::sin(arg);
                design(row, col++) = std::cos(arg);
            }
        }
        y(row) = values[t];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) {
        throw FitError("fit_fourier: rank-deficient design (" + std::to_string(qr.rank()) + " of " +
                       std::to_string(design.cols()) + " columns independent); check for duplicate or aliased periods");
    }
    const Eigen::VectorXd coef = qr.solve(y);
    if (!coef.allFinite()) {
        throw FitError("fit_fourier: non-finite coefficients");
    }

    FourierModel model;
    model.periods.assign(periods.begin(), periods.end());
    model.harmonics = harmonics;
    model.offset = coef(0);
    model.sin_coeffs.resize(terms / 2);
    model.cos_coeffs.resize(terms / 2);
    for (std::size_t j = 0; j < terms / 2; ++j) {
        model.sin_coeffs[j] = coef(static_cast<Eigen::Index>(1 + 2 * j));
        model.cos_coeffs[j] = coef(static_cast<Eigen::Index>(2 + 2 * j));
    }
    return model;
}

// Gaussianizer ------------------------------------------------------------------

Gaussianizer Gaussianizer::identity() {
    return Gaussianizer{};
}

Gaussianizer::Gaussianizer(std::vector<double> values, std::vector<double> probabilities, double lower_tail_scale,
                           double upper_tail_scale)
    : identity_(false),
      values_(std::move(values)),
      probs_(std::move(probabilities)),
      lower_scale_(lower_tail_scale),
      upper_scale_(upper_tail_scale) {
    if (values_.empty() || values_.size() != probs_.size()) {
        throw ContractError("gaussianizer: knot arrays must be non-empty and equal length");
    }
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i] > values_[i - 1]) || !(probs_[i] > probs_[i - 1])) {
            throw ContractError("gaussianizer: knots must be strictly increasing");
        }
    }
    if (!(probs_.front() > 0.0) || !(probs_.back() < 1.0)) {
        throw ContractError("gaussianizer: knot probabilities must lie in (0, 1)");
    }
    if (!(lower_scale_ > 0.0) || !(upper_scale_ > 0.0)) {
        throw ContractError("gaussianizer: tail scales must be positive");
    }
    survival_.resize(probs_.size());
    std::transform(probs_.begin(), probs_.end(), survival_.begin(), [](double q) { return 1.0 - q; });
}

Gaussianizer Gaussianizer::fit(std::span<const double> sample) {
    if (sample.empty()) {
        throw ContractError("gaussianizer: empty sample");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());

    std::vector<double> values;
    std::vector<double> probs;
    std::size_t start = 0;
    while (start < sorted.size()) {
        std::size_t end = start;
        while (end + 1 < sorted.size() && sorted[end + 1] == sorted[start]) {
            ++end;
        }
        values.push_back(sorted[start]);
        probs.push_back((0.5 * static_cast<double>(start + end) + 0.5) / n);
        start = end + 1;
    }
    return Gaussianizer(std::move(values), std::move(probs), mean_excess(sorted, false), mean_excess(sorted, true));
}

double Gaussianizer::cdf(double x) const {
    if (identity_) {
        return normal_cdf(x);
    }
    if (values_.size() == 1) {
        return 0.5;
    }
    if (x < values_.front()) {
        return probs_.front() * std::exp((x - values_.front()) / lower_scale_);
    }
    if (x > values_.back()) {
        return 1.0 - (1.0 - probs_.back()) * std::exp(-(x - values_.back()) / upper_scale_);
    }
    return interpolate(values_, probs_, x);
}

double Gaussianizer::quantile(double p) const {
    if (identity_) {
        return normal_quantile(p);
    }
    if (values_.size() == 1) {
        return values_.front();
    }
    p = std::clamp(p, kTinyProbability, 1.0 - 1e-16);
    if (p < probs_.front()) {
        return values_.front() + lower_scale_ * std::log(p / probs_.front());
    }
    if (p > probs_.back()) {
        return values_.back() - upper_scale_ * std::log((1.0 - p) / (1.0 - probs_.back()));
    }
    return interpolate(probs_, values_, p);
}

double Gaussianizer::to_normal(double x) const {
    if (identity_) {
        return x;
    }
    if (values_.size() == 1) {
        return 0.0;
    }
    // Upper half works on survival probabilities so the tail keeps full relative precision.
    const double p = cdf(x);
    if (p <= 0.5) {
        return normal_quantile(p);
    }
    double survival = 0.0;
    if (x > values_.back()) {
        survival = (1.0 - probs_.back()) * std::exp(-(x - values_.back()) / upper_scale_);
    } else {
        survival = interpolate(values_, survival_, x);
    }
    return -normal_quantile(std::max(survival, kTinyProbability));
}

double Gaussianizer::from_normal(double z) const {
    if (identity_) {
        return z;
    }
    if (values_.size() == 1) {
        return values_.front();
    }
    if (z <= 0.0) {
        return quantile(normal_cdf(z));
    }
    const double survival = std::max(normal_cdf(-z), kTinyProbability);
    const double top = 1.0 - probs_.back();
    if (survival < top) {
        return values_.back() - upper_scale_ * std::log(survival / top);
    }
    return interpolate_decreasing(survival_, values_, survival);
}

// ARMA --------------------------------------------------------------------------

double ar_root_min_modulus(std::span<const double> ar) {
    const auto p = static_cast<Eigen::Index>(ar.size());
    if (p == 0) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        companion(0, i) = ar[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 1; i < p; ++i) {
        companion(i, i - 1) = 1.0;
    }
    const Eigen::VectorXcd eig = companion.eigenvalues();
    double largest = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        largest = std::max(largest, std::abs(eig(i)));
    }
    if (largest == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / largest;
}

bool is_stationary(std::span<const double> ar) {
    return ar_root_min_modulus(ar) > 1.0 + 1e-9;
}

namespace {

struct CssState {
    double sse = 0.0;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
};

// Conditional residuals e_t for t >= p (earlier residuals are taken as zero) and,
// when requested, their derivatives with respect to (ar, ma).
CssState css(std::span<const double> y, const Eigen::VectorXd& beta, int p, int q, bool with_jacobian) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const Eigen::Index k = p + q;
    CssState s;
    s.residuals = Eigen::VectorXd::Zero(n);
    if (with_jacobian) {
        s.jacobian = Eigen::MatrixXd::Zero(n, k);
    }
    Eigen::VectorXd& e = s.residuals;
    for (Eigen::Index t = p; t < n; ++t) {
        double v = y[static_cast<std::size_t>(t)];
        for (int i = 0; i < p; ++i) {
            v -= beta(i) * y[static_cast<std::size_t>(t - 1 - i)];
        }
        for (int j = 0; j < q; ++j) {
            if (t - 1 - j >= p) {
                v -= beta(p + j) * e(t - 1 - j);
            }
        }
        e(t) = v;
        if (with_jacobian) {
            for (Eigen::Index c = 0; c < k; ++c) {
                double d = 0.0;
                if (c < p) {
                    d = -y[static_cast<std::size_t>(t - 1 - c)];
                } else if (t - 1 - (c - p) >= p) {
                    d = -e(t - 1 - (c - p));
                }
                for (int j = 0; j < q; ++j) {
                    if (t - 1 - j >= p) {
                        d -= beta(p + j) * s.jacobian(t - 1 - j, c);
                    }
                }
                s.jacobian(t, c) = d;
            }
        }
    }
    s.sse = e.squaredNorm();
    if (!std::isfinite(s.sse)) {
        s.sse = std::numeric_limits<double>::infinity();
    }
    return s;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    return x.colPivHouseholderQr().solve(y);
}

bool ma_invertible(const Eigen::VectorXd& beta, int p, int q) {
    std::vector<double> neg(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        neg[static_cast<std::size_t>(j)] = -beta(p + j);
    }
    return ar_root_min_modulus(neg) > 1.0 + 1e-9;
}

bool admissible(const Eigen::VectorXd& beta, int p, int q) {
    std::vector<double> ar(beta.data(), beta.data() + p);
    return is_stationary(ar) && ma_invertible(beta, p, q);
}

Eigen::VectorXd hannan_rissanen(std::span<const double> y, int p, int q) {
    const auto n = static_cast<Eigen::Index>(y.size());
    std::vector<double> innovations(y.size(), 0.0);
    Eigen::Index start = p;
    if (q > 0) {
        const Eigen::Index m = std::min<Eigen::Index>(n / 20, std::max<Eigen::Index>(20, 2 * (p + q)));
        Eigen::MatrixXd x(n - m, m);
        Eigen::VectorXd target(n - m);
        for (Eigen::Index t = m; t < n; ++t) {
            for (Eigen::Index i = 0; i < m; ++i) {
                x(t - m, i) = y[static_cast<std::size_t>(t - 1 - i)];
            }
            target(t - m) = y[static_cast<std::size_t>(t)];
        }
        const Eigen::VectorXd long_ar = least_squares(x, target);
        const Eigen::VectorXd fitted = x * long_ar;
        for (Eigen::Index t = m; t < n; ++t) {
            innovations[static_cast<std::size_t>(t)] = target(t - m) - fitted(t - m);
        }
        start = m + std::max(p, q);
    }
    const Eigen::Index rows = n - start;
    Eigen::MatrixXd x(rows, p + q);
    Eigen::VectorXd target(rows);
    for (Eigen::Index t = start; t < n; ++t) {
        for (int i = 0; i < p; ++i) {
            x(t - start, i) = y[static_cast<std::size_t>(t - 1 - i)];
        }
        for (int j = 0; j < q; ++j) {
            x(t - start, p + j) = innovations[static_cast<std::size_t>(t - 1 - j)];
        }
        target(t - start) = y[static_cast<std::size_t>(t)];
    }
    Eigen::VectorXd beta = least_squares(x, target);
    for (int shrink = 0; shrink < 60 && !admissible(beta, p, q); ++shrink) {
        beta *= 0.9;
    }
    if (!admissible(beta, p, q)) {
        beta.setZero();
    }
    return beta;
}

}  // namespace

ArmaEstimate estimate_arma(std::span<const double> series, int p, int q, const ArmaFitOptions& options) {
    if (p < 0 || q < 0 || p + q < 1) {
        throw ContractError("estimate_arma: need P, Q >= 0 and P + Q >= 1");
    }
    if (series.size() < static_cast<std::size_t>(50 * (p + q))) {
        throw ContractError("estimate_arma: series shorter than 50 * (P + Q)");
    }
    for (double v : series) {
        if (!std::isfinite(v)) {
            throw ContractError("estimate_arma: non-finite input");
        }
    }

    Eigen::VectorXd beta = hannan_rissanen(series, p, q);
    CssState state = css(series, beta, p, q, true);
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    double grad_norm = 0.0;
    for (; iter < options.max_iterations; ++iter) {
        const Eigen::MatrixXd& j = state.jacobian;
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd grad = j.transpose() * state.residuals;
        grad_norm = grad.norm();
        if (grad_norm <= options.tolerance * (1.0 + state.sse)) {
            converged = true;
            break;
        }
        bool improved = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
            const Eigen::VectorXd step = a.ldlt().solve(-grad);
            const Eigen::VectorXd trial = beta + step;
            if (admissible(trial, p, q)) {
                CssState next = css(series, trial, p, q, false);
                if (next.sse < state.sse) {
                    const double rel_change = (state.sse - next.sse) / std::max(state.sse, 1e-300);
                    beta = trial;
                    state = css(series, beta, p, q, true);
                    lambda = std::max(lambda / 10.0, 1e-12);
                    improved = true;
                    if (rel_change <= options.tolerance && step.norm() <= 1e-7 * (1.0 + beta.norm())) {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (converged) {
            ++iter;
            break;
        }
        if (!improved) {
            // No admissible descent step: accept only if we are at a stationary point.
            const double scale = std::sqrt(state.sse / static_cast<double>(series.size())) + 1e-12;
            if (grad_norm <= 1e-6 * scale * static_cast<double>(series.size())) {
                converged = true;
            }
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("estimate_arma: likelihood maximization did not converge after " +
                                   std::to_string(iter) + " iterations (gradient norm " +
                                   std::to_string(grad_norm) + ")",
                               iter, grad_norm);
    }

    ArmaEstimate est;
    est.ar.assign(beta.data(), beta.data() + p);
    est.ma.assign(beta.data() + p, beta.data() + p + q);
    est.noise_std = std::sqrt(state.sse / static_cast<double>(series.size() - static_cast<std::size_t>(p)));
    est.iterations = iter;
    return est;
}

ArmaModel fit_arma(std::span<const double> residual, int p, int q, const ArmaFitOptions& options) {
    if (p < 0 || q < 0 || p + q < 1) {
        throw ContractError("fit_arma: need P, Q >= 0 and P + Q >= 1");
    }
    if (residual.size() < static_cast<std::size_t>(50 * (p + q))) {
        throw ContractError("fit_arma: residual shorter than 50 * (P + Q)");
    }
    ArmaModel model;
    model.gaussianizer = Gaussianizer::fit(residual);
    std::vector<double> z(residual.size());
    std::transform(residual.begin(), residual.end(), z.begin(),
                   [&](double x) { return model.gaussianizer.to_normal(x); });
    ArmaEstimate est = estimate_arma(z, p, q, options);
    if (!is_stationary(est.ar)) {
        throw FitError("fit_arma: non-stationary AR polynomial rejected");
    }
    model.ar = std::move(est.ar);
    model.ma = std::move(est.ma);
    model.noise_std = est.noise_std;
    return model;
}

// Training and generation ---------------------------------------------------------

namespace {

int utc_year(std::int64_t unix_seconds) {
    using namespace std::chrono;
    const sys_days day = floor<days>(sys_seconds{seconds{unix_seconds}});
    return static_cast<int>(year_month_day{day}.year());
}

}  // namespace

SyntheticPriceModel train(const PriceSeries& history, const TrainOptions& options, std::string site_id) {
    history.validate();
    if (history.empty()) {
        throw ContractError("train: empty price history");
    }
    SyntheticPriceModel model;
    model.fourier = fit_fourier(history.prices, options.periods, options.harmonics);
    std::vector<double> residual(history.size());
    for (std::size_t t = 0; t < history.size(); ++t) {
        residual[t] = history.prices[t] - model.fourier.evaluate(static_cast<double>(t));
    }
    model.arma = fit_arma(residual, options.p, options.q, options.arma);
    model.preserve_cdf = options.preserve_cdf;
    if (options.preserve_cdf) {
        model.training_quantiles = history.prices;
        std::sort(model.training_quantiles.begin(), model.training_quantiles.end());
    }
    model.site_id = std::move(site_id);
    model.first_year = utc_year(history.timestamps.front());
    model.last_year = utc_year(history.timestamps.back());
    model.training_hours = history.size();
    return model;
}

std::vector<double> generate(const SyntheticPriceModel& model, std::size_t hours, std::uint64_t seed) {
    if (hours < 1) {
        throw ContractError("generate: hours must be >= 1");
    }
    const ArmaModel& arma = model.arma;
    const std::size_t p = arma.ar.size();
    const std::size_t q = arma.ma.size();
    const std::size_t burn = (p + q) > 0 ? kBurnIn : 0;
    const std::size_t total = hours + burn;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, arma.noise_std);
    std::vector<double> y(total, 0.0);
    std::vector<double> e(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = noise(rng);
        double v = e[t];
        for (std::size_t i = 0; i < p && i < t; ++i) {
            v += arma.ar[i] * y[t - 1 - i];
        }
        for (std::size_t j = 0; j < q && j < t; ++j) {
            v += arma.ma[j] * e[t - 1 - j];
        }
        y[t] = v;
    }

    std::vector<double> out(hours);
    for (std::size_t t = 0; t < hours; ++t) {
        out[t] = model.fourier.evaluate(static_cast<double>(t)) + arma.gaussianizer.from_normal(y[burn + t]);
        if (!std::isfinite(out[t])) {
            throw Error("overflow", "generate: non-finite synthetic price at hour " + std::to_string(t));
        }
    }

    const std::vector<double>& quantiles = model.training_quantiles;
    if (model.preserve_cdf && quantiles.size() > 1) {
        // Empirical inverse CDF applied to the ranks of the trace: a trace whose
        // length is a multiple of the history repeats every training value
        // equally often, so the marginal distribution is reproduced exactly.
        std::vector<std::size_t> order(hours);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out[a] < out[b]; });
        std::vector<double> matched(hours);
        const double scale = static_cast<double>(quantiles.size()) / static_cast<double>(hours);
        for (std::size_t r = 0; r < hours; ++r) {
            std::size_t idx = static_cast<std::size_t>((static_cast<double>(r) + 0.5) * scale);
            if (hours > 1 && r + 1 == hours) {
                idx = quantiles.size() - 1;
            }
            matched[order[r]] = quantiles[std::min(idx, quantiles.size() - 1)];
        }
        out.swap(matched);
    }
    return out;
}

PriceSeries generate_series(const SyntheticPriceModel& model, std::size_t hours, std::uint64_t seed,
                            std::int64_t start_timestamp) {
    return make_hourly_series(generate(model, hours, seed), start_timestamp);
}

// Moments ---------------------------------------------------------------------------

Moments compute_moments(std::span<const double> values) {
    if (values.empty()) {
        throw ContractError("compute_moments: empty series");
    }
    const auto n = static_cast<double>(values.size());
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };

    Moments m;
    m.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.std = n > 1 ? std::sqrt(m2 * n / (n - 1.0)) : 0.0;
    m.min = sorted.front();
    m.max = sorted.back();
    m.q25 = quantile(0.25);
    m.q50 = quantile(0.5);
    m.q75 = quantile(0.75);
    if (n > 3 && m2 > 0.0) {
        const double g1 = m3 / std::pow(m2, 1.5);
        const double g2 = m4 / (m2 * m2) - 3.0;
        m.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
        m.kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
    }
    return m;
}

bool MomentReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const MomentCheck& c) { return c.pass; });
}

MomentReport validate_moments(std::span<const double> historical, std::span<const double> synthetic,
                              const MomentTolerances& tol) {
    if (historical.empty() || synthetic.empty()) {
        throw ContractError("validate_moments: both series must be non-empty");
    }
    MomentReport report;
    report.historical = compute_moments(historical);
    report.synthetic = compute_moments(synthetic);
    const Moments& h = report.historical;
    const Moments& s = report.synthetic;

    auto add = [&](const char* name, double hv, double sv, bool shape) {
        MomentCheck c;
        c.name = name;
        c.historical = hv;
        c.synthetic = sv;
        c.delta = sv - hv;
        const double rel = shape ? tol.shape_rel : tol.location_rel;
        const double abs = shape ? tol.shape_abs : tol.location_abs;
        c.pass = std::abs(c.delta) <= std::max(rel * std::abs(hv), abs);
        report.checks.push_back(std::move(c));
    };
    add("mean", h.mean, s.mean, false);
    add("std", h.std, s.std, false);
    add("min", h.min, s.min, false);
    add("25%", h.q25, s.q25, false);
    add("50%", h.q50, s.q50, false);
    add("75%", h.q75, s.q75, false);
    add("max", h.max, s.max, false);
    add("kurtosis", h.kurtosis, s.kurtosis, true);
    add("skewness", h.skewness, s.skewness, true);
    return report;
}

}  // namespace ies::pricegen
