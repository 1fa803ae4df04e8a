#pragma once

#include <vector>

namespace ising {

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
    int n_batches = 0;
    double autocorr_estimate = 0.0;  // integrated autocorrelation time, sweeps
    long long samples = 0;
};

// Batch-means estimate over a time series recorded every `thin` sweeps.
SampleStats batch_means(const std::vector<double>& series, int n_batches = 32, int thin = 1);

// Batch averages of a series (the last partial batch is dropped).
std::vector<double> batch_averages(const std::vector<double>& series, int n_batches);

// Mean and standard error of independent values.
SampleStats mean_and_error(const std::vector<double>& values);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_error = 0.0;
};

// Least squares y = a + b x, optionally weighted by 1/sigma^2.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma = {});

// Linear least squares: coefficients c minimising |A c - y|, A given by rows.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y);

}  // namespace ising
