#include "clyap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "clyap/error.hpp"

namespace clyap::io {

json tensor_to_json(const SymmetricTensor& t) {
  json entries = json::array();
  const auto idxs = unique_indices(t.dim(), t.order());
  for (std::size_t r = 0; r < idxs.size(); ++r) {
    json e = json::array();
    for (int i : idxs[r]) e.push_back(i + 1);
    e.push_back(t.values()[r]);
    entries.push_back(std::move(e));
  }
  return {{"d", t.dim()}, {"k", t.order()}, {"entries", std::move(entries)}};
}

SymmetricTensor tensor_from_json(const json& j) {
  try {
    const int d = j.at("d").get<int>();
    const int k = j.at("k").get<int>();
    SymmetricTensor t(d, k);
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || static_cast<int>(e.size()) != k + 1) {
        throw InvalidArgument("tensor entry must list k labels and a value");
      }
      std::vector<int> idx;
      for (int p = 0; p < k; ++p) {
        const int label = e[static_cast<std::size_t>(p)].get<int>();
        if (label < 1 || label > d) throw InvalidArgument("tensor label out of range");
        idx.push_back(label - 1);
      }
      t.set(idx, e[static_cast<std::size_t>(k)].get<double>());
    }
    return t;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed tensor JSON: ") + ex.what());
  }
}

json graph_to_json(const DirectedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.from + 1, e.to + 1});
  return {{"d", g.num_nodes()}, {"edges", std::move(edges)}};
}

DirectedGraph graph_from_json(const json& j) {
  try {
    DirectedGraph g(j.at("d").get<int>());
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("graph edge must be a pair [a, b]");
      const int a = e[0].get<int>();
      const int b = e[1].get<int>();
      if (a < 1 || b < 1) throw InvalidArgument("graph labels are one-based");
      g.add_edge(a - 1, b - 1);
    }
    return g;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed graph JSON: ") + ex.what());
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json report_to_json(const IdentifiabilityReport& rep) {
  return {{"graph", graph_to_json(rep.graph)},
          {"r", rep.r},
          {"trials", rep.trials},
          {"components", rep.components},
          {"ranks", rep.ranks},
          {"expected_rank", rep.expected_rank},
          {"max_rank", rep.max_rank},
          {"trials_at_expected_rank", rep.hits},
          {"rank_deficiency", rep.graph.num_nodes() * rep.graph.num_nodes() - rep.max_rank},
          {"verdict", rep.verdict},
          {"warnings", rep.warnings}};
}

json report_to_json(const KnownCrReport& rep) {
  return {{"graph", graph_to_json(rep.graph)},
          {"r", rep.r},
          {"size", rep.size},
          {"rank_at_diagonal", rep.rank_at_diagonal},
          {"det_at_diagonal", rep.det_at_diagonal},
          {"det_product_formula", rep.det_product_formula},
          {"random_ranks", rep.random_ranks},
          {"verdict", rep.identifiable ? "IDENTIFIABLE" : "NOT_CERTIFIED"}};
}

json estimate_to_json(const DriftEstimate& est, double total_asymptotic_variance) {
  json j = {{"m_hat", matrix_to_json(est.m_hat)},
            {"sigma_min", est.sigma_min},
            {"gap", est.gap},
            {"stable", est.stable}};
  j["total_asymptotic_variance"] = total_asymptotic_variance < 0.0 ? json(nullptr) : json(total_asymptotic_variance);
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError(path.string() + ": " + ex.what(), 0);
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

SampleBatch parse_sample_csv(const std::string& text, bool skip_header) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    const auto body = trim(line);
    if (body.empty()) continue;
    Eigen::Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const auto field = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw ParseError("invalid number '" + std::string(field) + "' in sample CSV", line_no);
      }
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) cols = count;
    if (count != cols) {
      throw ParseError("expected " + std::to_string(cols) + " columns, found " + std::to_string(count), line_no);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("sample CSV has no observations", line_no);
  SampleBatch batch{Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, cols)};
  return batch;
}

SampleBatch read_sample_csv(const std::filesystem::path& path, bool skip_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sample_csv(buf.str(), skip_header);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

void write_sample_csv(const std::filesystem::path& path, const SampleBatch& sample) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  std::string line;
  for (Eigen::Index i = 0; i < sample.rows.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < sample.rows.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_double(sample.rows(i, j));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace clyap::io
