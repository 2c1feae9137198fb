#pragma once
// Plain dense linear algebra used as an independent oracle for the Frechet distance.

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Vector = std::vector<double>;

inline Vector normal_vector(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix identity(std::size_t n)
{
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b)
{
    const std::size_t n = a.size();
    Matrix c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Matrix inverse(Matrix a)
{
    const std::size_t n = a.size();
    Matrix inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
        std::swap(a[c], a[pivot]);
        std::swap(inv[c], inv[pivot]);
        const double p = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= p;
            inv[c][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

/// Denman-Beavers iteration for the principal square root.
inline Matrix sqrtm(const Matrix& a)
{
    Matrix y = a, z = identity(a.size());
    for (int it = 0; it < 100; ++it) {
        const Matrix yi = inverse(y), zi = inverse(z);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                y[i][j] = 0.5 * (y[i][j] + zi[i][j]);
                z[i][j] = 0.5 * (z[i][j] + yi[i][j]);
            }
    }
    return y;
}

inline double trace(const Matrix& m)
{
    double t = 0;
    for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

inline double closed_form(const Vector& ma, const Matrix& sa, const Vector& mb, const Matrix& sb)
{
    double d = 0;
    for (std::size_t i = 0; i < ma.size(); ++i) d += (ma[i] - mb[i]) * (ma[i] - mb[i]);
    const Matrix ra = sqrtm(sa);
    return d + trace(sa) + trace(sb) - 2.0 * trace(sqrtm(multiply(multiply(ra, sb), ra)));
}

inline Matrix random_spd(std::mt19937_64& rng, std::size_t n)
{
    Matrix l(n, std::vector<double>(n, 0.0));
    std::normal_distribution<double> g(0.0, 0.5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) l[i][j] = i == j ? 0.5 + std::abs(g(rng)) : g(rng);
    Matrix s(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) s[i][j] += l[i][k] * l[j][k];
    return s;
}

inline Matrix cholesky(const Matrix& s)
{
    const std::size_t n = s.size();
    Matrix l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = s[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            l[i][j] = i == j ? std::sqrt(sum) : sum / l[j][j];
        }
    return l;
}

inline std::vector<Vector> sample(std::mt19937_64& rng, const Vector& mean, const Matrix& cov, std::size_t n)
{
    const Matrix l = cholesky(cov);
    std::vector<Vector> out;
    for (std::size_t s = 0; s < n; ++s) {
        const Vector z = normal_vector(rng, mean.size());
        Vector x = mean;
        for (std::size_t i = 0; i < mean.size(); ++i)
            for (std::size_t k = 0; k <= i; ++k) x[i] += l[i][k] * z[k];
        out.push_back(std::move(x));
    }
    return out;
}
}  // namespace oracle
