#include "ising/stats.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ising/errors.hpp"

namespace ising {

std::vector<double> batch_averages(const std::vector<double>& series, int n_batches) {
    const std::size_t len = series.size() / n_batches;
    std::vector<double> out;
    if (len == 0) return out;
    for (int b = 0; b < n_batches; ++b) {
        double s = 0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += series[i];
        out.push_back(s / static_cast<double>(len));
    }
    return out;
}

SampleStats batch_means(const std::vector<double>& series, int n_batches, int thin) {
    SampleStats st;
    st.samples = static_cast<long long>(series.size());
    if (series.empty()) return st;
    if (static_cast<int>(series.size()) < n_batches) n_batches = static_cast<int>(series.size());
    const auto avg = batch_averages(series, n_batches);
    const std::size_t len = series.size() / n_batches;
    double m = 0;
    for (double a : avg) m += a;
    m /= n_batches;
    double vb = 0;
    for (double a : avg) vb += (a - m) * (a - m);
    vb = n_batches > 1 ? vb / (n_batches - 1) : 0.0;
    // Mean over the full series so the estimate uses every sample.
    double full = 0, var = 0;
    for (double v : series) full += v;
    full /= static_cast<double>(series.size());
    for (double v : series) var += (v - full) * (v - full);
    var /= static_cast<double>(series.size());
    st.mean = full;
    st.std_error = std::sqrt(vb / n_batches);
    st.n_batches = n_batches;
    st.autocorr_estimate = var > 0 ? 0.5 * static_cast<double>(len) * vb / var * thin : 0.0;
    return st;
}

SampleStats mean_and_error(const std::vector<double>& values) {
    SampleStats st;
    const auto n = static_cast<double>(values.size());
    st.samples = static_cast<long long>(values.size());
    st.n_batches = static_cast<int>(values.size());
    if (values.empty()) return st;
    for (double v : values) st.mean += v;
    st.mean /= n;
    double var = 0;
    for (double v : values) var += (v - st.mean) * (v - st.mean);
    st.std_error = values.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    return st;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs at least two points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double d = sw * sxx - sx * sx;
    LineFit f;
    f.slope = (sw * sxy - sx * sy) / d;
    f.intercept = (sxx * sy - sx * sxy) / d;
    if (!sigma.empty()) {
        f.slope_error = std::sqrt(sw / d);
    } else if (x.size() > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_error = std::sqrt(rss / static_cast<double>(x.size() - 2) * sw / d);
    }
    return f;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    if (rows.empty()) return {};
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd A(m, k);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) A(i, j) = rows[i][j];
        b(i) = y[i];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace ising
