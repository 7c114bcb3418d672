#pragma once

// Named example metrics with closed-form reference curvature.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scalrig/listing.hpp"

namespace scalrig {

struct ParamSpec {
    std::string name;
    std::string type;  // "int" or "real"
    std::optional<double> default_value;
    std::string description;
};

struct CatalogInfo {
    std::string name;
    std::string backend;  // "chart", "frame" or "submersion"
    std::vector<ParamSpec> params;
    std::string description;
    bool has_reference = true;
};

const std::vector<CatalogInfo>& catalog_entries();

struct Reference {
    Vector ricci_eigs;  // ascending, with respect to g
    double scalar = 0.0;
};

struct CatalogEntry {
    std::string name;
    std::string label;  // name with its parameters, e.g. "berger:p=1,q=3.5"
    BackendPtr backend;
    std::optional<Reference> reference;
};

using Params = std::map<std::string, double>;

/// Builds a named entry; unknown names or parameters and out-of-range values throw ValidationError.
CatalogEntry make_catalog_entry(const std::string& name, const Params& params);

/// Stereographic chart of the unit sphere S^n on |x| <= 0.9.
std::shared_ptr<ChartMetric> sphere_chart(int n);
/// Poincare ball chart of H^m on |x| <= 0.9.
std::shared_ptr<ChartMetric> hyperbolic_chart(int m);
/// Flat metric on [-pi, pi]^n.
std::shared_ptr<ChartMetric> torus_chart(int n);
/// S^n(1) x (H^m, lambda g_hyp) in block stereographic and Poincare coordinates.
std::shared_ptr<ChartMetric> product_space_form(int n, int m, double lambda);
Reference product_reference(int n, int m, double lambda);

/// Height function x^{n+1} of the unit sphere in the stereographic chart from the
/// south pole: (1 - |x|^2) / (1 + |x|^2). The upper hemisphere is |x| < 1.
Expression hemisphere_height(int n);

/// |Δu + n u| at `point` for u the height function, or for u = 1 when `constant_control`.
double hemisphere_eigenfunction_residual(int n, std::span<const double> point, bool constant_control = false);

/// Maximum absolute deviation of computed Ricci eigenvalues and scalar curvature from the reference.
double catalog_reference_check(const CatalogEntry& entry, const std::vector<Point>& points);

/// First `count` points of the Halton sequence, mapped into `box`.
std::vector<Point> halton_points(const Box& box, int count, int skip = 1);

/// Ten quasi-random interior points for charts; the single empty point otherwise.
std::vector<Point> sample_points(const GeometryBackend& backend, int count = 10);

}  // namespace scalrig
