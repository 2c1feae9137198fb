#include "generec/error.hpp"
#include "generec/evaluation.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace generec {

Vector FvdEncoder::features(const Item& item) const
{
    const std::size_t d = encoder_.output_dim();
    Vector out(2 * d, 0.0);
    Vector prev;
    for (std::size_t t = 0; t < item.frames.size(); ++t) {
        Vector e = encoder_.encode(item.frames[t]);
        for (std::size_t i = 0; i < d; ++i) out[i] += e[i];
        if (t > 0)
            for (std::size_t i = 0; i < d; ++i) out[d + i] += e[i] - prev[i];
        prev = std::move(e);
    }
    const double n = double(item.frames.size());
    for (std::size_t i = 0; i < d; ++i) out[i] /= n;
    if (item.frames.size() > 1)
        for (std::size_t i = 0; i < d; ++i) out[d + i] /= n - 1.0;
    return out;
}

GaussianStats gaussian_stats(std::span<const Vector> samples)
{
    if (samples.size() < 2) throw Error(ErrorCode::too_few_samples, "FVD needs at least two samples per set");
    GaussianStats st;
    st.count = samples.size();
    st.mean = mean_of(samples);
    const std::size_t d = st.mean.size();
    st.covariance.assign(d * d, 0.0);
    Vector centred(d);
    for (const auto& x : samples) {
        for (std::size_t i = 0; i < d; ++i) centred[i] = x[i] - st.mean[i];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) st.covariance[i * d + j] += centred[i] * centred[j];
    }
    const double inv = 1.0 / double(samples.size() - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = st.covariance[i * d + j] * inv;
            st.covariance[i * d + j] = v;
            st.covariance[j * d + i] = v;
        }
    return st;
}

namespace {

using Matrix = Eigen::MatrixXd;

Matrix as_matrix(const GaussianStats& s)
{
    const auto d = Eigen::Index(s.dim());
    if (s.covariance.size() != s.dim() * s.dim())
        throw Error(ErrorCode::dimension_mismatch, "covariance size does not match mean");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        s.covariance.data(), d, d);
}

Matrix symmetric_sqrt(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const GaussianStats& a, const GaussianStats& b)
{
    if (a.dim() != b.dim() || a.dim() == 0) throw Error(ErrorCode::dimension_mismatch, "FVD feature dimensions differ");

    double mean_term = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) mean_term += (a.mean[i] - b.mean[i]) * (a.mean[i] - b.mean[i]);

    const Matrix sa = as_matrix(a);
    const Matrix sb = as_matrix(b);
    const Matrix root_a = symmetric_sqrt(sa);
    Matrix inner = root_a * sb * root_a;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(inner, Eigen::EigenvaluesOnly);
    const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

    const double value = mean_term + sa.trace() + sb.trace() - 2.0 * cross;
    return std::max(value, 0.0);
}

double fvd(std::span<const Item> real, std::span<const Item> generated, const FvdEncoder& encoder)
{
    std::vector<Vector> fr, fg;
    fr.reserve(real.size());
    fg.reserve(generated.size());
    for (const auto& item : real) fr.push_back(encoder.features(item));
    for (const auto& item : generated) fg.push_back(encoder.features(item));
    return frechet_distance(gaussian_stats(fr), gaussian_stats(fg));
}

bool fvd_low_sample_warning(std::size_t samples, std::size_t feature_dim)
{
    return 4 * samples < feature_dim;
}

}  // namespace generec
