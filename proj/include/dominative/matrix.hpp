#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace dominative {

// Dense square matrix, row-major.  Dimensions here are tiny (spatial
// Hessians), so no effort is spent on anything beyond clarity.
struct SquareMatrix {
    int n = 0;
    std::vector<double> a;

    SquareMatrix() = default;
    explicit SquareMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static SquareMatrix identity(int dim) {
        SquareMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static SquareMatrix diagonal(std::span<const double> d) {
        SquareMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += at(i, i);
        return t;
    }

    // (A + A^T)/2
    SquareMatrix symmetrized() const {
        SquareMatrix s(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s.at(i, j) = 0.5 * (at(i, j) + at(j, i));
        return s;
    }

    bool finite() const {
        for (double v : a)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

} // namespace dominative
