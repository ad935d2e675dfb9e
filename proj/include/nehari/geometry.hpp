#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

constexpr int kMaxDim = 4;

using Point = std::array<double, kMaxDim>;

enum class CrossKind { interval, disk, square, custom };

/// Bounded open cross-section F of a cylinder-type domain, described
/// analytically. `contains(y, margin)` asks whether y lies inside F at
/// distance greater than `margin` from the boundary; for the analytic
/// kinds this uses the exact signed distance, for `custom` the margin
/// is ignored (the raw predicate decides).
class CrossSection {
public:
    CrossSection() = default; // unit disk; prefer the named factories

    static CrossSection make_interval(double a, double b);
    static CrossSection make_disk(double radius, int dim = 2);
    static CrossSection make_square(double side, int dim = 2);
    static CrossSection make_custom(int dim, double bounding_radius,
                                    std::function<bool(const Point&)> predicate);

    CrossKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double bounding_radius() const { return bounding_radius_; }

    /// Axis-aligned bounding box (per cross axis).
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }

    bool contains(const Point& y, double margin = 0.0) const;

    /// The dilated region s*F (scaling about the origin). Requires s > 0.
    CrossSection scaled(double s) const;

    /// True when F is star-shaped about the origin with 0 in its closure,
    /// which the bump/pinched family constructions rely on.
    bool origin_centered() const;

    const std::vector<double>& params() const { return params_; }

private:
    CrossKind kind_ = CrossKind::disk;
    int dim_ = 2;
    double bounding_radius_ = 1.0;
    double scale_ = 1.0;
    std::array<double, kMaxDim> lo_{{-1.0, -1.0, 0.0, 0.0}};
    std::array<double, kMaxDim> hi_{{1.0, 1.0, 0.0, 0.0}};
    std::vector<double> params_;
    std::function<bool(const Point&)> predicate_;
};

/// Kind + params front end used by the config layer.
/// interval: params {a, b}; disk: {radius}; square: {side}.
CrossSection make_cross_section(CrossKind kind, const std::vector<double>& params, int dim = 0);

enum class Family { straight, bump_hprime, pinched_h0, ball };

/// A cylinder-type domain Omega in R^ell x R^(N-ell) given by the map
/// t -> Omega^t, truncated to |t| < T for computation.
///
/// Concrete slice maps:
///   straight:     Omega^t = F
///   bump_hprime:  Omega^t = (1 + a0/(1+|t|^m)) F
///   pinched_h0:   Omega^t = F / (1 + a0 |t|^m)
///   ball:         Omega^t = sqrt(1 - |t|^2/R^2) F  with F = disk(R),
///                 i.e. Omega is the Euclidean ball of radius R.
struct DomainSpec {
    int ell = 1;
    CrossSection base;
    Family family = Family::straight;
    double m = 0.0;
    double a0 = 0.0;
    double a1 = 0.0; // bump family: containment holds for a in [a1, a0]
    double T = 0.0;

    int dim() const { return ell + base.dim(); }

    /// Slice scale factor s(t) with Omega^t = s(t) * F (0 = empty slice).
    double slice_scale(const double* t) const;

    CrossSection cross_section_at(const double* t) const;

    /// Interior test with boundary margin; the axial truncation |t| < T
    /// participates with the same margin.
    bool contains(const Point& x, double margin = 0.0) const;

    void validate() const;
};

DomainSpec make_domain(int ell, CrossSection base, Family family, double T,
                       double m = 0.0, double a0 = 0.0, double a1 = 0.0);

/// Masked uniform tensor grid over [-T,T]^ell x bbox(G). Nodes sit at
/// lo + i*h on each axis; the mask keeps nodes with distance > h/2 from
/// the domain boundary (first-order boundary treatment).
struct GridSpec {
    int dim = 0;
    int ell = 0;
    double h = 0.0;
    double T = 0.0;
    std::array<double, kMaxDim> lo{};
    std::array<int, kMaxDim> n{};   // nodes per axis
    std::array<std::int64_t, kMaxDim> stride{};

    std::vector<std::int32_t> mask_of_node; // node id -> mask index or -1
    std::vector<std::int64_t> node_of_mask; // mask index -> node id
    std::vector<std::int32_t> neighbor;     // nmask * 2*dim, mask index or -1

    std::size_t n_mask() const { return node_of_mask.size(); }
    std::int64_t n_nodes() const;

    void node_coords(std::int64_t node, Point& x) const;
    void node_multi_index(std::int64_t node, std::array<int, kMaxDim>& idx) const;
    /// Mask index at multi-index, -1 if out of range or exterior.
    std::int32_t mask_at(const std::array<int, kMaxDim>& idx) const;

    Point mask_coords(std::size_t k) const;

    /// Euclidean norm of the axial part of masked point k.
    double axial_radius(std::size_t k) const;
};

/// Builds the masked grid. Throws degenerate_domain when the mask is
/// empty and resource_limit when the node count exceeds max_nodes.
std::shared_ptr<const GridSpec> discretize(const DomainSpec& domain, double h,
                                           std::int64_t max_nodes = 40'000'000);

/// Grid over a cross-section alone (no axial axes); used for the
/// principal eigenpair of F. Shares node placement with the cross axes
/// of any grid built from the same box at the same h.
std::shared_ptr<const GridSpec> discretize_cross_section(const CrossSection& F, double h,
                                                         std::int64_t max_nodes = 40'000'000);

const char* family_name(Family f);
const char* cross_kind_name(CrossKind k);

} // namespace nehari
