#include "igac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "igac/errors.hpp"

namespace igac {

namespace {

// Recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1}. Nodes are eigenvalues of
// the symmetric tridiagonal Jacobi matrix with diag a_k and offdiag sqrt(b_k);
// weight_i = mu0 * (first eigenvector component)^2.
QuadRule golub_welsch(int n, double mu0,
                      double (*a)(int), double (*b)(int)) {
    if (n < 1) throw ValidationError("quadrature order must be positive");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = a(k);
        if (k + 1 < n) {
            double off = std::sqrt(b(k + 1));
            J(k, k + 1) = off;
            J(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double v0 = es.eigenvectors()(0, i);
        rule.weights(i) = mu0 * v0 * v0;
    }
    return rule;
}

double hermite_a(int) { return 0.0; }
double hermite_b(int k) { return 0.5 * k; }

double laguerre_a(int k) { return 2.0 * k + 1.0; }
double laguerre_b(int k) { return static_cast<double>(k) * k; }

double legendre_a(int) { return 0.0; }
double legendre_b(int k) {
    double kk = static_cast<double>(k) * k;
    return kk / (4.0 * kk - 1.0);
}

const QuadRule& cached(std::map<int, QuadRule>& cache, std::mutex& mtx, int n,
                       double mu0, double (*a)(int), double (*b)(int)) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, golub_welsch(n, mu0, a, b)).first;
    return it->second;
}

}  // namespace

const QuadRule& gauss_hermite(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, std::sqrt(M_PI), hermite_a, hermite_b);
}

const QuadRule& gauss_laguerre(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, 1.0, laguerre_a, laguerre_b);
}

const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, 2.0, legendre_a, legendre_b);
}

}  // namespace igac
