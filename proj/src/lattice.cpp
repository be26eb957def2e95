#include "cla/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cla {

Lattice::Lattice(int ambient_dim, std::vector<std::vector<double>> generators)
    : ambient_dim_(ambient_dim), generators_(std::move(generators)) {
    if (ambient_dim_ < 1) throw std::invalid_argument("ambient dimension must be positive");
    const int r = rank();
    if (r > ambient_dim_) throw std::invalid_argument("rank exceeds ambient dimension");
    covering_bound_ = 0.0;
    for (const auto& g : generators_) {
        if (static_cast<int>(g.size()) != ambient_dim_)
            throw std::invalid_argument("generator dimension mismatch");
        double nsq = 0.0;
        for (double c : g) nsq += c * c;
        covering_bound_ += 0.5 * std::sqrt(nsq);
    }
    if (r == 0) {
        covolume_ = 1.0;
        return;
    }
    Eigen::MatrixXd B(r, ambient_dim_);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ambient_dim_; ++j) B(i, j) = generators_[i][j];
    Eigen::MatrixXd G = B * B.transpose();
    const double det = G.determinant();
    if (det <= 1e-12) throw std::invalid_argument("generators are linearly dependent");
    covolume_ = std::sqrt(det);
    Eigen::MatrixXd Gi = G.inverse();
    gram_inverse_.assign(r, std::vector<double>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) gram_inverse_[i][j] = Gi(i, j);
}

std::vector<double> Lattice::project_to_span(const std::vector<double>& x) const {
    const int r = rank();
    std::vector<double> out(ambient_dim_, 0.0);
    if (r == 0) return out;
    // coefficients c = G^{-1} B x, projection = B^T c
    std::vector<double> bx(r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ambient_dim_; ++j) bx[i] += generators_[i][j] * x[j];
    std::vector<double> c(r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) c[i] += gram_inverse_[i][j] * bx[j];
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ambient_dim_; ++j) out[j] += c[i] * generators_[i][j];
    return out;
}

std::vector<double> Lattice::point(const std::vector<long>& k) const {
    if (static_cast<int>(k.size()) != rank())
        throw std::invalid_argument("coordinate tuple length mismatch");
    std::vector<double> out(ambient_dim_, 0.0);
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < ambient_dim_; ++j)
            out[j] += static_cast<double>(k[i]) * generators_[i][j];
    return out;
}

std::vector<LatticePoint> lattice_points_in_ball(const Lattice& lat, double R) {
    if (R < 0) throw std::invalid_argument("radius must be non-negative");
    const int r = lat.rank();
    std::vector<LatticePoint> out;
    if (r == 0) {
        out.push_back({{}, std::vector<double>(lat.ambient_dim(), 0.0), 0.0});
        return out;
    }
    // |k_i| = |<x, dual_i>| <= R * |dual_i| = R * sqrt((G^{-1})_ii)
    Eigen::MatrixXd B(r, lat.ambient_dim());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < lat.ambient_dim(); ++j) B(i, j) = lat.generators()[i][j];
    Eigen::MatrixXd Gi = (B * B.transpose()).inverse();
    std::vector<long> bound(r);
    for (int i = 0; i < r; ++i)
        bound[i] = static_cast<long>(std::floor(R * std::sqrt(Gi(i, i)) + 1e-9));

    std::vector<long> k(r, 0);
    const double rsq = R * R * (1.0 + 1e-12) + 1e-12;
    // nested loop over the integer box via odometer increments
    for (int i = 0; i < r; ++i) k[i] = -bound[i];
    while (true) {
        std::vector<double> p = lat.point(k);
        double nsq = 0.0;
        for (double c : p) nsq += c * c;
        if (nsq <= rsq) out.push_back({k, std::move(p), std::sqrt(nsq)});
        int axis = r - 1;
        while (axis >= 0 && k[axis] == bound[axis]) {
            k[axis] = -bound[axis];
            --axis;
        }
        if (axis < 0) break;
        ++k[axis];
    }
    std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return a.coords < b.coords;
    });
    return out;
}

}  // namespace cla
