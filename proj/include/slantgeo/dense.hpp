#pragma once
// Small dense matrices over double or Jet. Vectors are single columns.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slantgeo/jet.hpp"

namespace slantgeo {

template <class S>
struct Mat {
    int r = 0, c = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows) * cols) {}

    S& operator()(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
    S& operator[](int i) { return a[i]; }
    const S& operator[](int i) const { return a[i]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
        return m;
    }

    Mat col(int j) const {
        Mat v(r, 1);
        for (int i = 0; i < r; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const Mat& v) {
        for (int i = 0; i < r; ++i) (*this)(i, j) = v[i];
    }
    Mat t() const {
        Mat m(c, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
};

using MatD = Mat<double>;
using MatJ = Mat<Jet>;

template <class S>
Mat<S> operator*(const Mat<S>& x, const Mat<S>& y) {
    if (x.c != y.r) throw std::invalid_argument("matrix product: shape mismatch");
    Mat<S> m(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
        for (int k = 0; k < x.c; ++k) {
            const S& xik = x(i, k);
            for (int j = 0; j < y.c; ++j) m(i, j) += xik * y(k, j);
        }
    return m;
}

template <class S>
Mat<S> operator+(Mat<S> x, const Mat<S>& y) {
    for (size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
    return x;
}

template <class S>
Mat<S> operator-(Mat<S> x, const Mat<S>& y) {
    for (size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
    return x;
}

template <class S>
Mat<S> operator*(const S& s, Mat<S> x) {
    for (auto& v : x.a) v = s * v;
    return x;
}

inline MatJ operator*(double s, MatJ x) {
    for (auto& v : x.a) v *= Jet(s);
    return x;
}

template <class S>
Mat<S> operator-(Mat<S> x) {
    for (auto& v : x.a) v = -v;
    return x;
}

// Gauss-Jordan with partial pivoting on values.
template <class S>
Mat<S> inverse(const Mat<S>& m) {
    int n = m.r;
    Mat<S> a = m, inv = Mat<S>::identity(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(value(a(i, k))) > std::fabs(value(a(p, k)))) p = i;
        if (value(a(p, k)) == 0.0) throw std::runtime_error("singular matrix");
        if (p != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        S piv = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            S f = a(i, k);
            if (value(f) == 0.0 && std::is_same_v<S, double>) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

// x^T G y for column vectors.
template <class S>
S inner(const Mat<S>& x, const Mat<S>& G, const Mat<S>& y) {
    S s(0.0);
    for (int i = 0; i < G.r; ++i) {
        S row(0.0);
        for (int j = 0; j < G.c; ++j) row += G(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

template <class S>
S dot(const Mat<S>& x, const Mat<S>& y) {
    S s(0.0);
    for (size_t i = 0; i < x.a.size(); ++i) s += x.a[i] * y.a[i];
    return s;
}

template <class S>
S trace(const Mat<S>& m) {
    S s(0.0);
    for (int i = 0; i < m.r; ++i) s += m(i, i);
    return s;
}

inline double max_abs(const MatD& m) {
    double r = 0;
    for (double v : m.a) r = std::fmax(r, std::fabs(v));
    return r;
}

inline double norm(const MatD& v) {
    double s = 0;
    for (double x : v.a) s += x * x;
    return std::sqrt(s);
}

inline MatD values(const MatJ& m) {
    MatD r(m.r, m.c);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].v;
    return r;
}

inline MatJ lift(const MatD& m) {
    MatJ r(m.r, m.c);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Jet(m.a[i]);
    return r;
}

// Partial derivative of a jet matrix along parameter direction k.
inline MatD partial(const MatJ& m, int k) {
    MatD r(m.r, m.c);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].d[k];
    return r;
}

inline MatD column(std::initializer_list<double> xs) {
    MatD v(static_cast<int>(xs.size()), 1);
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Eigen decomposition of a symmetric matrix; eigenvalues ascending,
// eigenvectors as columns.
void sym_eigen(const MatD& m, std::vector<double>& evals, MatD& evecs);
std::vector<double> singular_values(const MatD& m);

}  // namespace slantgeo
