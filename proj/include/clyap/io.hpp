#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "clyap/coeff.hpp"
#include "clyap/cumulants.hpp"
#include "clyap/estimator.hpp"
#include "clyap/graph.hpp"
#include "clyap/symtensor.hpp"

namespace clyap::io {

using nlohmann::json;

// All file formats use one-based node labels.

json tensor_to_json(const SymmetricTensor& t);
SymmetricTensor tensor_from_json(const json& j);

json graph_to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const json& j);

/// Row-major nested arrays.
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json report_to_json(const IdentifiabilityReport& rep);
json report_to_json(const KnownCrReport& rep);

/// {m_hat (row-major), sigma_min, gap, stable, total_asymptotic_variance};
/// a negative variance is written as null.
json estimate_to_json(const DriftEstimate& est, double total_asymptotic_variance = -1.0);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// One observation per line, comma separated. Throws ParseError with the
/// offending line number.
SampleBatch read_sample_csv(const std::filesystem::path& path, bool skip_header = false);
SampleBatch parse_sample_csv(const std::string& text, bool skip_header = false);
void write_sample_csv(const std::filesystem::path& path, const SampleBatch& sample);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

}  // namespace clyap::io
