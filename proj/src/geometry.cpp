#include "nehari/geometry.hpp"

#include <cmath>
#include <limits>

namespace nehari {

// ---------------------------------------------------------------------------
// CrossSection

CrossSection CrossSection::make_interval(double a, double b) {
    if (!(b > a))
        throw Error(ErrorCode::invalid_geometry, "interval requires a < b");
    CrossSection cs;
    cs.kind_ = CrossKind::interval;
    cs.dim_ = 1;
    cs.params_ = {a, b};
    cs.lo_[0] = a;
    cs.hi_[0] = b;
    cs.bounding_radius_ = std::max(std::abs(a), std::abs(b));
    return cs;
}

CrossSection CrossSection::make_disk(double radius, int dim) {
    if (!(radius > 0.0))
        throw Error(ErrorCode::invalid_geometry, "disk requires radius > 0");
    if (dim < 1 || dim > 3)
        throw Error(ErrorCode::invalid_geometry, "disk dim must be in {1,2,3}");
    CrossSection cs;
    cs.kind_ = CrossKind::disk;
    cs.dim_ = dim;
    cs.params_ = {radius};
    for (int a = 0; a < dim; ++a) {
        cs.lo_[a] = -radius;
        cs.hi_[a] = radius;
    }
    cs.bounding_radius_ = radius;
    return cs;
}

CrossSection CrossSection::make_square(double side, int dim) {
    if (!(side > 0.0))
        throw Error(ErrorCode::invalid_geometry, "square requires side > 0");
    if (dim < 1 || dim > 3)
        throw Error(ErrorCode::invalid_geometry, "square dim must be in {1,2,3}");
    CrossSection cs;
    cs.kind_ = CrossKind::square;
    cs.dim_ = dim;
    cs.params_ = {side};
    for (int a = 0; a < dim; ++a) {
        cs.lo_[a] = 0.0;
        cs.hi_[a] = side;
    }
    cs.bounding_radius_ = side * std::sqrt(static_cast<double>(dim));
    return cs;
}

CrossSection CrossSection::make_custom(int dim, double bounding_radius,
                                       std::function<bool(const Point&)> predicate) {
    if (dim < 1 || dim > 3)
        throw Error(ErrorCode::invalid_geometry, "custom dim must be in {1,2,3}");
    if (!(bounding_radius > 0.0) || !predicate)
        throw Error(ErrorCode::invalid_geometry, "custom cross-section needs radius and predicate");
    CrossSection cs;
    cs.kind_ = CrossKind::custom;
    cs.dim_ = dim;
    cs.bounding_radius_ = bounding_radius;
    cs.predicate_ = std::move(predicate);
    for (int a = 0; a < dim; ++a) {
        cs.lo_[a] = -bounding_radius;
        cs.hi_[a] = bounding_radius;
    }
    return cs;
}

bool CrossSection::contains(const Point& y, double margin) const {
    switch (kind_) {
        case CrossKind::interval:
            return y[0] > lo_[0] + margin && y[0] < hi_[0] - margin;
        case CrossKind::disk: {
            double r2 = 0.0;
            for (int a = 0; a < dim_; ++a) r2 += y[a] * y[a];
            double r = bounding_radius_ - margin;
            return r > 0.0 && r2 < r * r;
        }
        case CrossKind::square: {
            for (int a = 0; a < dim_; ++a)
                if (!(y[a] > lo_[a] + margin && y[a] < hi_[a] - margin)) return false;
            return true;
        }
        case CrossKind::custom: {
            if (scale_ == 1.0) return predicate_(y);
            Point z{};
            for (int a = 0; a < dim_; ++a) z[a] = y[a] / scale_;
            return predicate_(z);
        }
    }
    return false;
}

CrossSection CrossSection::scaled(double s) const {
    if (!(s > 0.0))
        throw Error(ErrorCode::invalid_geometry, "cross-section scale must be positive");
    CrossSection cs = *this;
    cs.scale_ = scale_ * s;
    cs.bounding_radius_ = bounding_radius_ * s;
    for (int a = 0; a < dim_; ++a) {
        cs.lo_[a] = lo_[a] * s;
        cs.hi_[a] = hi_[a] * s;
    }
    for (double& p : cs.params_) p *= s;
    return cs;
}

bool CrossSection::origin_centered() const {
    switch (kind_) {
        case CrossKind::disk:
            return true;
        case CrossKind::interval:
            return lo_[0] <= 0.0 && hi_[0] >= 0.0;
        case CrossKind::square:
            return lo_[0] <= 0.0; // (0, side)^d is star-shaped about 0
        case CrossKind::custom: {
            // Star-shape of user predicates is not verifiable; require 0 inside.
            Point origin{};
            return contains(origin);
        }
    }
    return false;
}

CrossSection make_cross_section(CrossKind kind, const std::vector<double>& params, int dim) {
    switch (kind) {
        case CrossKind::interval:
            if (params.size() != 2)
                throw Error(ErrorCode::invalid_geometry, "interval takes params {a, b}");
            return CrossSection::make_interval(params[0], params[1]);
        case CrossKind::disk:
            if (params.size() != 1)
                throw Error(ErrorCode::invalid_geometry, "disk takes params {radius}");
            return CrossSection::make_disk(params[0], dim > 0 ? dim : 2);
        case CrossKind::square:
            if (params.size() != 1)
                throw Error(ErrorCode::invalid_geometry, "square takes params {side}");
            return CrossSection::make_square(params[0], dim > 0 ? dim : 2);
        case CrossKind::custom:
            throw Error(ErrorCode::invalid_geometry,
                        "custom cross-sections are constructed with CrossSection::make_custom");
    }
    throw Error(ErrorCode::invalid_geometry, "unknown cross-section kind");
}

// ---------------------------------------------------------------------------
// DomainSpec

double DomainSpec::slice_scale(const double* t) const {
    double tn2 = 0.0;
    for (int a = 0; a < ell; ++a) tn2 += t[a] * t[a];
    switch (family) {
        case Family::straight:
            return 1.0;
        case Family::bump_hprime:
            return 1.0 + a0 / (1.0 + std::pow(std::sqrt(tn2), m));
        case Family::pinched_h0:
            return 1.0 / (1.0 + a0 * std::pow(std::sqrt(tn2), m));
        case Family::ball: {
            double R = base.bounding_radius();
            double s2 = 1.0 - tn2 / (R * R);
            return s2 > 0.0 ? std::sqrt(s2) : 0.0;
        }
    }
    return 0.0;
}

CrossSection DomainSpec::cross_section_at(const double* t) const {
    double s = slice_scale(t);
    if (s <= 0.0) {
        // Empty slice: degenerate to a vanishing copy so contains() is false.
        return base.scaled(std::numeric_limits<double>::min());
    }
    return s == 1.0 ? base : base.scaled(s);
}

bool DomainSpec::contains(const Point& x, double margin) const {
    if (family == Family::ball) {
        // Exact Euclidean margin for the ball.
        double R = base.bounding_radius() - margin;
        double r2 = 0.0;
        for (int a = 0; a < dim(); ++a) r2 += x[a] * x[a];
        return R > 0.0 && r2 < R * R;
    }
    double tn2 = 0.0;
    for (int a = 0; a < ell; ++a) tn2 += x[a] * x[a];
    double Tm = T - margin;
    if (!(Tm > 0.0) || tn2 >= Tm * Tm) return false;
    double s = slice_scale(x.data());
    if (s <= 0.0) return false;
    // y in s*F with margin d  <=>  y/s in F with margin d/s
    Point y{};
    for (int a = ell; a < dim(); ++a) y[a - ell] = x[a] / s;
    return base.contains(y, margin / s);
}

void DomainSpec::validate() const {
    if (ell < 1 || ell > 2)
        throw Error(ErrorCode::invalid_geometry, "ell must be 1 or 2");
    if (base.dim() < 1 || base.dim() > 2)
        throw Error(ErrorCode::invalid_geometry, "cross-section dim must be 1 or 2");
    if (!(T > 0.0))
        throw Error(ErrorCode::invalid_geometry, "truncation T must be positive");
    if (family == Family::bump_hprime || family == Family::pinched_h0) {
        if (!(m > 0.0) || !(a0 > 0.0))
            throw Error(ErrorCode::invalid_geometry, "bump/pinched families need m > 0 and a0 > 0");
        if (!base.origin_centered())
            throw Error(ErrorCode::invalid_geometry,
                        "bump/pinched families require an origin-centered cross-section");
    }
    if (family == Family::ball && base.kind() != CrossKind::disk)
        throw Error(ErrorCode::invalid_geometry, "ball family requires a disk cross-section");
}

DomainSpec make_domain(int ell, CrossSection base, Family family, double T,
                       double m, double a0, double a1) {
    DomainSpec d;
    d.ell = ell;
    d.base = std::move(base);
    d.family = family;
    d.m = m;
    d.a0 = a0;
    d.a1 = (a1 > 0.0) ? a1 : a0 / 2.0;
    d.T = (family == Family::ball) ? d.base.bounding_radius() : T;
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// GridSpec

std::int64_t GridSpec::n_nodes() const {
    std::int64_t total = 1;
    for (int a = 0; a < dim; ++a) total *= n[a];
    return total;
}

void GridSpec::node_coords(std::int64_t node, Point& x) const {
    for (int a = 0; a < dim; ++a) {
        std::int64_t i = (node / stride[a]) % n[a];
        x[a] = lo[a] + static_cast<double>(i) * h;
    }
}

void GridSpec::node_multi_index(std::int64_t node, std::array<int, kMaxDim>& idx) const {
    for (int a = 0; a < dim; ++a)
        idx[a] = static_cast<int>((node / stride[a]) % n[a]);
}

std::int32_t GridSpec::mask_at(const std::array<int, kMaxDim>& idx) const {
    std::int64_t node = 0;
    for (int a = 0; a < dim; ++a) {
        if (idx[a] < 0 || idx[a] >= n[a]) return -1;
        node += idx[a] * stride[a];
    }
    return mask_of_node[static_cast<std::size_t>(node)];
}

Point GridSpec::mask_coords(std::size_t k) const {
    Point x{};
    node_coords(node_of_mask[k], x);
    return x;
}

double GridSpec::axial_radius(std::size_t k) const {
    Point x = mask_coords(k);
    double r2 = 0.0;
    for (int a = 0; a < ell; ++a) r2 += x[a] * x[a];
    return std::sqrt(r2);
}

namespace {

std::shared_ptr<const GridSpec> build_grid(int dim, int ell, double h, double T,
                                           const std::array<double, kMaxDim>& axis_lo,
                                           const std::array<double, kMaxDim>& axis_hi,
                                           const std::function<bool(const Point&)>& interior,
                                           std::int64_t max_nodes) {
    auto grid = std::make_shared<GridSpec>();
    grid->dim = dim;
    grid->ell = ell;
    grid->h = h;
    grid->T = T;
    std::int64_t total = 1;
    for (int a = 0; a < dim; ++a) {
        grid->lo[a] = axis_lo[a];
        double span = axis_hi[a] - axis_lo[a];
        int count = static_cast<int>(std::floor(span / h + 0.5)) + 1;
        // Keep the last node at or inside the box edge.
        while (count > 1 && grid->lo[a] + (count - 1) * h > axis_hi[a] + 1e-12 * span) --count;
        grid->n[a] = std::max(count, 1);
        total *= grid->n[a];
    }
    if (total > max_nodes)
        throw Error(ErrorCode::resource_limit,
                    "grid would have " + std::to_string(total) + " nodes, cap is " +
                        std::to_string(max_nodes));
    grid->stride[0] = 1;
    for (int a = 1; a < dim; ++a)
        grid->stride[a] = grid->stride[a - 1] * grid->n[a - 1];

    grid->mask_of_node.assign(static_cast<std::size_t>(total), -1);
    Point x{};
    for (std::int64_t node = 0; node < total; ++node) {
        grid->node_coords(node, x);
        if (interior(x)) {
            grid->mask_of_node[static_cast<std::size_t>(node)] =
                static_cast<std::int32_t>(grid->node_of_mask.size());
            grid->node_of_mask.push_back(node);
        }
    }
    if (grid->node_of_mask.empty())
        throw Error(ErrorCode::degenerate_domain, "discretization produced an empty mask");

    const std::size_t nm = grid->n_mask();
    grid->neighbor.assign(nm * 2 * dim, -1);
    std::array<int, kMaxDim> idx{};
    for (std::size_t k = 0; k < nm; ++k) {
        grid->node_multi_index(grid->node_of_mask[k], idx);
        for (int a = 0; a < dim; ++a) {
            auto lo_idx = idx;
            lo_idx[a] -= 1;
            auto hi_idx = idx;
            hi_idx[a] += 1;
            grid->neighbor[k * 2 * dim + 2 * a] = grid->mask_at(lo_idx);
            grid->neighbor[k * 2 * dim + 2 * a + 1] = grid->mask_at(hi_idx);
        }
    }
    return grid;
}

} // namespace

std::shared_ptr<const GridSpec> discretize(const DomainSpec& domain, double h,
                                           std::int64_t max_nodes) {
    domain.validate();
    if (!(h > 0.0))
        throw Error(ErrorCode::invalid_argument, "grid spacing h must be positive");

    const int dim = domain.dim();
    std::array<double, kMaxDim> axis_lo{}, axis_hi{};
    // Bounding cross-section G: the widest slice over t.
    double smax = 1.0;
    if (domain.family == Family::bump_hprime) smax = 1.0 + domain.a0;
    CrossSection G = (smax == 1.0) ? domain.base : domain.base.scaled(smax);
    for (int a = 0; a < domain.ell; ++a) {
        axis_lo[a] = -domain.T;
        axis_hi[a] = domain.T;
    }
    for (int a = 0; a < G.dim(); ++a) {
        axis_lo[domain.ell + a] = G.lo(a);
        axis_hi[domain.ell + a] = G.hi(a);
    }
    const double margin = h / 2.0;
    auto interior = [&domain, margin](const Point& x) { return domain.contains(x, margin); };
    return build_grid(dim, domain.ell, h, domain.T, axis_lo, axis_hi, interior, max_nodes);
}

std::shared_ptr<const GridSpec> discretize_cross_section(const CrossSection& F, double h,
                                                         std::int64_t max_nodes) {
    if (!(h > 0.0))
        throw Error(ErrorCode::invalid_argument, "grid spacing h must be positive");
    std::array<double, kMaxDim> axis_lo{}, axis_hi{};
    for (int a = 0; a < F.dim(); ++a) {
        axis_lo[a] = F.lo(a);
        axis_hi[a] = F.hi(a);
    }
    const double margin = h / 2.0;
    auto interior = [&F, margin](const Point& x) { return F.contains(x, margin); };
    return build_grid(F.dim(), 0, h, 0.0, axis_lo, axis_hi, interior, max_nodes);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::straight: return "straight";
        case Family::bump_hprime: return "bump";
        case Family::pinched_h0: return "pinched";
        case Family::ball: return "ball";
    }
    return "unknown";
}

const char* cross_kind_name(CrossKind k) {
    switch (k) {
        case CrossKind::interval: return "interval";
        case CrossKind::disk: return "disk";
        case CrossKind::square: return "square";
        case CrossKind::custom: return "custom";
    }
    return "unknown";
}

} // namespace nehari
