#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "geo/estimates.hpp"
#include "geo/immersion.hpp"
#include "geo/normal_bundle.hpp"

namespace geo {

using Json = nlohmann::ordered_json;

Json to_json(const SurfaceSpec& spec);
Json to_json(const PointAnalysis& a);
Json to_json(const RegularityReport& r);
/// Summary only; per-point records go to curvature_csv.
Json to_json(const FlatnessReport& r);
Json to_json(const SynthesisResult& r);
Json to_json(const HeinzQuantity& q);
Json to_json(const KnQuantity& q);
Json to_json(const GrowthFit& f);
Json to_json(const PmcReport& r);
Json to_json(const StructureReport& r);
Json to_json(const OssermanReport& r);
Json to_json(const EnergyReport& r);
Json to_json(const HolderReport& r);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

/// Comma-separated table with a header row; numbers in shortest
/// round-trip form.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

/// Columns u, v, S_1_12_2, S_2_12_1, ricci_residual in row-major grid order.
CsvTable curvature_csv(const FlatnessReport& r);

/// Geometry fields at every masked grid node.
CsvTable scan_csv(const SurfaceSpec& spec, int nodes);

}  // namespace geo
