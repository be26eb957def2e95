#pragma once

#include <utility>
#include <vector>

namespace cla {

// Rank-r lattice spanned by linearly independent generators in R^(ambient).
// Rank 0 (no generators) is the trivial lattice {0}.
class Lattice {
public:
    Lattice(int ambient_dim, std::vector<std::vector<double>> generators);

    int ambient_dim() const { return ambient_dim_; }
    int rank() const { return static_cast<int>(generators_.size()); }
    const std::vector<std::vector<double>>& generators() const { return generators_; }

    // sqrt(det Gram); 1 for the trivial lattice.
    double covolume() const { return covolume_; }

    // Upper bound on the covering radius: half the sum of generator lengths.
    double covering_radius_bound() const { return covering_bound_; }

    // Orthogonal projection of x onto the generator span.
    std::vector<double> project_to_span(const std::vector<double>& x) const;

    // The lattice point sum_i k_i omega_i.
    std::vector<double> point(const std::vector<long>& k) const;

private:
    int ambient_dim_;
    std::vector<std::vector<double>> generators_;
    std::vector<std::vector<double>> gram_inverse_;
    double covolume_;
    double covering_bound_;
};

struct LatticePoint {
    std::vector<long> coords;
    std::vector<double> point;
    double norm;
};

// All lattice points with |point| <= R (inclusive within 1e-12), enumerated
// over the integer box |k_i| <= R * sqrt((G^{-1})_ii) and filtered. Sorted by
// norm ascending, ties broken by the integer tuple, so the order is
// reproducible.
std::vector<LatticePoint> lattice_points_in_ball(const Lattice& lat, double R);

}  // namespace cla
