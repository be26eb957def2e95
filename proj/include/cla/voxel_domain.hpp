#pragma once

#include <functional>
#include <vector>

#include "cla/fd.hpp"
#include "cla/multivector.hpp"

namespace cla {

// Inside/outside predicate for the voxelizer; primitive shapes only, matching
// the JSON config surface.
struct Shape {
    enum class Kind { Ball, Box, Annulus };
    Kind kind = Kind::Box;
    std::vector<double> center;
    double radius = 0.0, inner = 0.0, outer = 0.0;
    std::vector<double> lo, hi;

    static Shape ball(std::vector<double> center, double radius);
    static Shape box(std::vector<double> lo, std::vector<double> hi);
    static Shape annulus(std::vector<double> center, double inner, double outer);

    bool contains(const std::vector<double>& x) const;
};

// Regular grid over [0,1]^d, h = 1/grid, cells selected by their centers.
// Boundary facets sit between an inside and an outside (or off-grid) cell;
// the outward normal is the unit paravector of the crossing direction
// (axis 0 is the scalar slot) and every facet has area h^(d-1).
class VoxelDomain {
public:
    struct Facet {
        long cell;        // adjacent inside cell
        int axis;         // 0..d-1
        int orientation;  // +1 or -1, outward along axis
        std::vector<double> center;
        Multivector normal;
        double area;
    };

    VoxelDomain(int ambient_dim, int grid, const Shape& shape);

    int ambient_dim() const { return ambient_dim_; }
    int clifford_dim() const { return ambient_dim_ - 1; }
    int grid() const { return grid_; }
    double h() const { return 1.0 / grid_; }

    long cell_count() const { return static_cast<long>(cells_.size()); }
    const std::vector<std::vector<long>>& cells() const { return cells_; }
    std::vector<double> cell_center(long idx) const;
    // -1 when the coordinate tuple is outside the domain (or the grid)
    long cell_index(const std::vector<long>& coord) const;

    const std::vector<Facet>& facets() const { return facets_; }

    // Steps along grid axes to the nearest outside cell: 0 for a cell with an
    // outside face neighbor, capped at 3. Residual checks restrict to >= 2.
    int interior_depth(long idx) const { return depth_[static_cast<std::size_t>(idx)]; }

    // Discrete divergence-theorem check: sum of normal * area over all
    // facets; zero (within rounding) for any closed voxel boundary.
    Multivector facet_normal_sum() const;

private:
    int ambient_dim_;
    int grid_;
    std::vector<std::vector<long>> cells_;
    std::vector<long> flat_to_cell_;
    std::vector<Facet> facets_;
    std::vector<int> depth_;
};

// Samples at inside-cell centers, in domain cell order. Pressure-like fields
// carry scalar = true (only the grade-0 slot is meaningful).
struct Field {
    const VoxelDomain* domain = nullptr;
    std::vector<Multivector> values;
    bool scalar = false;
};

Field zero_field(const VoxelDomain& dom, bool scalar = false);
Field make_field(const VoxelDomain& dom,
                 const std::function<Multivector(const std::vector<double>&)>& fn,
                 bool scalar = false);

double field_max_norm(const Field& f);
// Max norm restricted to cells with interior_depth >= depth.
double field_max_norm_interior(const Field& f, int depth);

// Values at facet centers, in domain facet order.
struct BoundaryTrace {
    const VoxelDomain* domain = nullptr;
    std::vector<Multivector> values;
};

// Quadratic extrapolation to the facet center from the three cells stacked
// inward of the facet (1.875, -1.25, 0.375), degrading to linear or constant
// where the domain is too thin.
BoundaryTrace trace_field(const Field& f);

// Central difference where both axis neighbors are inside; second-order
// one-sided stencils at the boundary (first-order when the domain is too
// thin).
Field partial_fd_field(const Field& f, int axis);
Field dirac_fd_field(const Field& f, DiracVariant variant);
// conjugated Cauchy-Riemann operator: partial_0 - sum_j e_j partial_j
Field dirac_conj_fd_field(const Field& f);
Field laplacian_fd_field(const Field& f);
// Sc(conjugated Dirac of u): sum_i partial_i u_i over the paravector slots.
Field divergence_fd(const Field& u);

}  // namespace cla
