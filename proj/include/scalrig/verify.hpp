#pragma once

// Randomized property suites behind `scalrig verify`.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scalrig/chart.hpp"

namespace scalrig {

/// mt19937_64 with a hand-written uniform map, so draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::mt19937_64 engine_;
};

/// delta_ij (when `identity_base`) plus a random polynomial of degree <= 2 with
/// coefficients in [-amp, amp], on the cube [-0.5, 0.5]^dim.
std::shared_ptr<ChartMetric> random_polynomial_metric(Rng& rng, int dim, double amp, bool identity_base = true);

/// Random SPD matrix A A^T / dim + 0.1 I with A uniform in [-1, 1].
Matrix random_spd(Rng& rng, int dim);

struct Check {
    std::string name;
    double value = 0.0;      // worst residual (or minimum slope)
    double threshold = 0.0;
    bool at_most = true;     // value <= threshold passes; otherwise value >= threshold passes
    int samples = 0;
    bool passed() const { return at_most ? value <= threshold : value >= threshold; }
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    bool passed() const;
};

const std::vector<std::string>& suite_names();

/// "appendix", "expansion", "conformal" or "norms"; ValidationError otherwise.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace scalrig
