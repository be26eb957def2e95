#include "cla/voxel_domain.hpp"

#include <cmath>
#include <stdexcept>

namespace cla {

Shape Shape::ball(std::vector<double> center, double radius) {
    Shape s;
    s.kind = Kind::Ball;
    s.center = std::move(center);
    s.radius = radius;
    return s;
}

Shape Shape::box(std::vector<double> lo, std::vector<double> hi) {
    Shape s;
    s.kind = Kind::Box;
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    return s;
}

Shape Shape::annulus(std::vector<double> center, double inner, double outer) {
    Shape s;
    s.kind = Kind::Annulus;
    s.center = std::move(center);
    s.inner = inner;
    s.outer = outer;
    return s;
}

bool Shape::contains(const std::vector<double>& x) const {
    switch (kind) {
        case Kind::Box: {
            if (lo.size() != x.size() || hi.size() != x.size())
                throw std::invalid_argument("box bounds dimension mismatch");
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
            return true;
        }
        case Kind::Ball:
        case Kind::Annulus: {
            if (center.size() != x.size())
                throw std::invalid_argument("shape center dimension mismatch");
            double nsq = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - center[i];
                nsq += d * d;
            }
            const double r = std::sqrt(nsq);
            if (kind == Kind::Ball) return r < radius;
            return r > inner && r < outer;
        }
    }
    return false;
}

namespace {

long flat_index(const std::vector<long>& coord, int grid) {
    long idx = 0;
    for (long c : coord) idx = idx * grid + c;
    return idx;
}

}  // namespace

VoxelDomain::VoxelDomain(int ambient_dim, int grid, const Shape& shape)
    : ambient_dim_(ambient_dim), grid_(grid) {
    if (ambient_dim_ < 2) throw std::invalid_argument("ambient dimension must be >= 2");
    if (grid_ < 2) throw std::invalid_argument("grid must be >= 2");
    long total = 1;
    for (int i = 0; i < ambient_dim_; ++i) {
        if (total > (1L << 40) / grid_) throw std::invalid_argument("grid too large");
        total *= grid_;
    }
    flat_to_cell_.assign(static_cast<std::size_t>(total), -1);

    const double hh = h();
    std::vector<long> coord(ambient_dim_, 0);
    std::vector<double> x(ambient_dim_);
    while (true) {
        for (int i = 0; i < ambient_dim_; ++i) x[i] = (coord[i] + 0.5) * hh;
        if (shape.contains(x)) {
            flat_to_cell_[static_cast<std::size_t>(flat_index(coord, grid_))] =
                static_cast<long>(cells_.size());
            cells_.push_back(coord);
        }
        int axis = ambient_dim_ - 1;
        while (axis >= 0 && coord[axis] == grid_ - 1) coord[axis--] = 0;
        if (axis < 0) break;
        ++coord[axis];
    }
    if (cells_.empty()) throw std::invalid_argument("shape selects no cells");

    const int n = clifford_dim();
    const double area = std::pow(hh, ambient_dim_ - 1);
    for (long ci = 0; ci < cell_count(); ++ci) {
        for (int axis = 0; axis < ambient_dim_; ++axis) {
            for (int orient : {-1, +1}) {
                std::vector<long> nb = cells_[static_cast<std::size_t>(ci)];
                nb[axis] += orient;
                if (cell_index(nb) >= 0) continue;
                Facet f;
                f.cell = ci;
                f.axis = axis;
                f.orientation = orient;
                f.center = cell_center(ci);
                f.center[axis] += 0.5 * hh * orient;
                f.normal = axis == 0 ? Multivector::scalar(n, orient)
                                     : Multivector::basis(n, axis) * double(orient);
                f.area = area;
                facets_.push_back(std::move(f));
            }
        }
    }

    depth_.assign(cells_.size(), 3);
    for (long ci = 0; ci < cell_count(); ++ci) {
        // depth = largest k <= 3 with the full L-infinity ball of radius k
        // inside; scan outwards and stop at the first miss
        for (int k = 1; k <= 3; ++k) {
            bool ok = true;
            std::vector<long> off(ambient_dim_, -k);
            while (ok) {
                std::vector<long> nb = cells_[static_cast<std::size_t>(ci)];
                for (int i = 0; i < ambient_dim_; ++i) nb[i] += off[i];
                if (cell_index(nb) < 0) ok = false;
                int axis = ambient_dim_ - 1;
                while (axis >= 0 && off[axis] == k) off[axis--] = -k;
                if (axis < 0) break;
                ++off[axis];
            }
            if (!ok) {
                depth_[static_cast<std::size_t>(ci)] = k - 1;
                break;
            }
        }
    }
}

std::vector<double> VoxelDomain::cell_center(long idx) const {
    const auto& c = cells_[static_cast<std::size_t>(idx)];
    std::vector<double> x(ambient_dim_);
    for (int i = 0; i < ambient_dim_; ++i) x[i] = (c[i] + 0.5) * h();
    return x;
}

long VoxelDomain::cell_index(const std::vector<long>& coord) const {
    for (long c : coord)
        if (c < 0 || c >= grid_) return -1;
    return flat_to_cell_[static_cast<std::size_t>(flat_index(coord, grid_))];
}

Multivector VoxelDomain::facet_normal_sum() const {
    Multivector sum(clifford_dim());
    for (const Facet& f : facets_) sum += f.normal * f.area;
    return sum;
}

Field zero_field(const VoxelDomain& dom, bool scalar) {
    Field f;
    f.domain = &dom;
    f.values.assign(static_cast<std::size_t>(dom.cell_count()),
                    Multivector(dom.clifford_dim()));
    f.scalar = scalar;
    return f;
}

Field make_field(const VoxelDomain& dom,
                 const std::function<Multivector(const std::vector<double>&)>& fn,
                 bool scalar) {
    Field f = zero_field(dom, scalar);
    for (long i = 0; i < dom.cell_count(); ++i)
        f.values[static_cast<std::size_t>(i)] = fn(dom.cell_center(i));
    return f;
}

double field_max_norm(const Field& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, v.norm());
    return m;
}

double field_max_norm_interior(const Field& f, int depth) {
    double m = 0.0;
    for (long i = 0; i < f.domain->cell_count(); ++i)
        if (f.domain->interior_depth(i) >= depth)
            m = std::max(m, f.values[static_cast<std::size_t>(i)].norm());
    return m;
}

BoundaryTrace trace_field(const Field& f) {
    const VoxelDomain& dom = *f.domain;
    BoundaryTrace tr;
    tr.domain = &dom;
    tr.values.reserve(dom.facets().size());
    for (const auto& facet : dom.facets()) {
        const Multivector& v0 = f.values[static_cast<std::size_t>(facet.cell)];
        std::vector<long> inward = dom.cells()[static_cast<std::size_t>(facet.cell)];
        inward[facet.axis] -= facet.orientation;
        const long c1 = dom.cell_index(inward);
        inward[facet.axis] -= facet.orientation;
        const long c2 = c1 < 0 ? -1 : dom.cell_index(inward);
        if (c1 < 0) {
            tr.values.push_back(v0);
        } else if (c2 < 0) {
            tr.values.push_back(v0 * 1.5 - f.values[static_cast<std::size_t>(c1)] * 0.5);
        } else {
            // quadratic extrapolation from cells at 0.5h, 1.5h, 2.5h inward
            tr.values.push_back(v0 * 1.875 - f.values[static_cast<std::size_t>(c1)] * 1.25 +
                                f.values[static_cast<std::size_t>(c2)] * 0.375);
        }
    }
    return tr;
}

Field partial_fd_field(const Field& f, int axis) {
    const VoxelDomain& dom = *f.domain;
    Field out = zero_field(dom, f.scalar);
    const double hh = dom.h();
    for (long i = 0; i < dom.cell_count(); ++i) {
        std::vector<long> c = dom.cells()[static_cast<std::size_t>(i)];
        auto at = [&](long offset) {
            std::vector<long> nb = c;
            nb[axis] += offset;
            return dom.cell_index(nb);
        };
        const long plus = at(1), minus = at(-1);
        Multivector d(dom.clifford_dim());
        if (plus >= 0 && minus >= 0) {
            d = (f.values[static_cast<std::size_t>(plus)] -
                 f.values[static_cast<std::size_t>(minus)]) *
                (0.5 / hh);
        } else if (plus >= 0) {
            const long plus2 = at(2);
            if (plus2 >= 0)
                d = (f.values[static_cast<std::size_t>(i)] * -3.0 +
                     f.values[static_cast<std::size_t>(plus)] * 4.0 -
                     f.values[static_cast<std::size_t>(plus2)]) *
                    (0.5 / hh);
            else
                d = (f.values[static_cast<std::size_t>(plus)] -
                     f.values[static_cast<std::size_t>(i)]) *
                    (1.0 / hh);
        } else if (minus >= 0) {
            const long minus2 = at(-2);
            if (minus2 >= 0)
                d = (f.values[static_cast<std::size_t>(i)] * 3.0 -
                     f.values[static_cast<std::size_t>(minus)] * 4.0 +
                     f.values[static_cast<std::size_t>(minus2)]) *
                    (0.5 / hh);
            else
                d = (f.values[static_cast<std::size_t>(i)] -
                     f.values[static_cast<std::size_t>(minus)]) *
                    (1.0 / hh);
        }
        out.values[static_cast<std::size_t>(i)] = std::move(d);
    }
    return out;
}

Field dirac_fd_field(const Field& f, DiracVariant variant) {
    const VoxelDomain& dom = *f.domain;
    const int n = dom.clifford_dim();
    Field out = zero_field(dom);
    if (variant == DiracVariant::CauchyRiemann) {
        Field d0 = partial_fd_field(f, 0);
        for (long i = 0; i < dom.cell_count(); ++i)
            out.values[static_cast<std::size_t>(i)] +=
                d0.values[static_cast<std::size_t>(i)];
    }
    for (int j = 1; j <= n; ++j) {
        Field dj = partial_fd_field(f, j);
        const Multivector ej = Multivector::basis(n, j);
        for (long i = 0; i < dom.cell_count(); ++i)
            out.values[static_cast<std::size_t>(i)] +=
                ej * dj.values[static_cast<std::size_t>(i)];
    }
    return out;
}

Field dirac_conj_fd_field(const Field& f) {
    const VoxelDomain& dom = *f.domain;
    const int n = dom.clifford_dim();
    Field out = partial_fd_field(f, 0);
    out.scalar = false;
    for (int j = 1; j <= n; ++j) {
        Field dj = partial_fd_field(f, j);
        const Multivector ej = Multivector::basis(n, j);
        for (long i = 0; i < dom.cell_count(); ++i)
            out.values[static_cast<std::size_t>(i)] -=
                ej * dj.values[static_cast<std::size_t>(i)];
    }
    return out;
}

Field laplacian_fd_field(const Field& f) {
    const VoxelDomain& dom = *f.domain;
    Field out = zero_field(dom, f.scalar);
    const double inv_h2 = 1.0 / (dom.h() * dom.h());
    for (long i = 0; i < dom.cell_count(); ++i) {
        const std::vector<long>& c = dom.cells()[static_cast<std::size_t>(i)];
        Multivector acc(dom.clifford_dim());
        for (int axis = 0; axis < dom.ambient_dim(); ++axis) {
            auto at = [&](long offset) {
                std::vector<long> nb = c;
                nb[axis] += offset;
                return dom.cell_index(nb);
            };
            const long plus = at(1), minus = at(-1);
            if (plus >= 0 && minus >= 0) {
                acc += (f.values[static_cast<std::size_t>(plus)] +
                        f.values[static_cast<std::size_t>(minus)] -
                        f.values[static_cast<std::size_t>(i)] * 2.0) *
                       inv_h2;
            } else if (plus >= 0 && at(2) >= 0) {
                // shifted stencil, first order
                acc += (f.values[static_cast<std::size_t>(i)] -
                        f.values[static_cast<std::size_t>(plus)] * 2.0 +
                        f.values[static_cast<std::size_t>(at(2))]) *
                       inv_h2;
            } else if (minus >= 0 && at(-2) >= 0) {
                acc += (f.values[static_cast<std::size_t>(i)] -
                        f.values[static_cast<std::size_t>(minus)] * 2.0 +
                        f.values[static_cast<std::size_t>(at(-2))]) *
                       inv_h2;
            }
        }
        out.values[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

Field divergence_fd(const Field& u) {
    const VoxelDomain& dom = *u.domain;
    Field out = zero_field(dom, true);
    for (int axis = 0; axis < dom.ambient_dim(); ++axis) {
        Field d = partial_fd_field(u, axis);
        const std::uint32_t blade = axis == 0 ? 0u : (1u << (axis - 1));
        for (long i = 0; i < dom.cell_count(); ++i)
            out.values[static_cast<std::size_t>(i)][0] +=
                d.values[static_cast<std::size_t>(i)][blade];
    }
    return out;
}

}  // namespace cla
