#pragma once

// Command-line front end: metric spec files, catalog selectors, point sets and
// the subcommands of the `scalrig` tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scalrig/catalog.hpp"

namespace scalrig {

struct DeformationBlock {
    std::string kind;  // "traceless" or "conformal"
    double s = 0.0;
    std::string u;     // conformal only
};

/// Text format:
///
///     dimension 2
///     domain
///       x1 -0.9 0.9
///       x2 -0.9 0.9
///     components
///       g_1_1 = 4/(1+x1^2+x2^2)^2
///       g_2_2 = 4/(1+x1^2+x2^2)^2
///     deformation
///       kind = conformal
///       s = 0.01
///       u = x1
///
/// '#' starts a comment. Missing off-diagonal components are 0; either index
/// order may be used, but each entry only once.
struct MetricSpec {
    int dimension = 0;
    Box domain;
    std::vector<std::vector<std::string>> lower;  // lower[i][j], j <= i
    std::optional<DeformationBlock> deformation;
};

MetricSpec parse_metric_spec(std::string_view text);
MetricSpec load_metric_spec(const std::string& path);
BackendPtr backend_from_spec(const MetricSpec& spec, const std::string& label);

struct ResolvedMetric {
    BackendPtr backend;
    std::string label;
    std::optional<Reference> reference;  // absent for files and deformed metrics
};

/// `file:<path>` or `<catalog-name>[:k=v,...]`; any selector may carry `deform=<s>`
/// (the traceless-Ricci deformation; catalog selectors only).
ResolvedMetric resolve_metric(const std::string& selector);

/// `origin`, `grid:lo:hi:k,...` (one triple per coordinate, Cartesian product),
/// `list:a,b;c,d` or `halton:<count>`. Homogeneous metrics accept only `origin`.
std::vector<Point> parse_points(const std::string& spec, const GeometryBackend& backend);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitGeometry = 3;
inline constexpr int kExitSuiteFailure = 4;

/// Runs one command (args exclude the program name). Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scalrig
