#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geo/immersion.hpp"
#include "geo/report.hpp"

namespace geo {

/// One property check: the worst observed value against its threshold.
struct InvariantResult {
    std::string module;
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<InvariantResult> results;
    bool all_pass() const;
    std::vector<std::string> failed() const;
};

struct ValidationOptions {
    /// Grid size for per-point sweeps (odd).
    int nodes = 33;
    std::uint64_t seed = 1977;
    /// Surface added to the geometry and normal-bundle sweeps.
    std::optional<SurfaceSpec> extra;
};

ValidationReport run_validation(const ValidationOptions& options = {});

Json to_json(const ValidationReport& r);

/// Graph (x, y, p_1, p_2) with p_k random cubic polynomials in x, y.
SurfaceSpec random_cubic_graph(std::mt19937_64& rng, const std::string& name);

/// Nested composition of + - * / ^ sin cos exp log sqrt in u, v whose
/// values stay inside every domain on [-1, 1]^2.
std::string random_composite_expression(std::mt19937_64& rng, int depth = 3);

}  // namespace geo
