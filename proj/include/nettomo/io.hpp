#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nettomo/clustering.hpp"
#include "nettomo/combination.hpp"
#include "nettomo/diffusion.hpp"
#include "nettomo/estimators.hpp"
#include "nettomo/graph.hpp"

namespace nettomo {

using nlohmann::json;

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
  return json{{"n", g.n}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  Graph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) {
    const int a = e.at(0).get<int>();
    const int b = e.at(1).get<int>();
    if (a < 0 || b < 0 || a >= g.n || b >= g.n)
      throw std::invalid_argument("graph_from_json: edge index out of range");
    g.add_edge(a, b);
  }
  return g;
}

inline json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_rows(const json& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return Matrix(0, 0);
  const int c = static_cast<int>(rows.at(0).size());
  Matrix m(n, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  return m;
}

inline json to_json(const CombinationMatrix& a) {
  return json{{"n", a.size()}, {"rho", a.rho}, {"kappa", a.kappa},
              {"rows", matrix_rows(a.a)}};
}

inline CombinationMatrix combination_from_json(const json& j) {
  CombinationMatrix a;
  a.rho = j.at("rho").get<double>();
  a.kappa = j.at("kappa").get<double>();
  a.a = matrix_from_rows(j.at("rows"));
  if (a.size() != j.at("n").get<int>())
    throw std::invalid_argument("combination_from_json: n does not match rows");
  return a;
}

inline json to_json(const EstimateMatrix& est) {
  return json{{"n", est.values.rows()},
              {"kind", to_string(est.kind)},
              {"source", est.source == EstimateSource::exact ? "exact" : "sample"},
              {"n_samples", est.n_samples},
              {"s_indices", est.s.indices},
              {"rows", matrix_rows(est.values)}};
}

inline json to_json(const MarginReport& rep) {
  json j{{"scale", rep.scale},
         {"disconnected_defined", rep.disconnected_defined},
         {"connected_defined", rep.connected_defined}};
  if (rep.disconnected_defined) {
    j["delta_low"] = rep.delta_low;
    j["delta_high"] = rep.delta_high;
    j["scaled_delta_low"] = rep.scaled_delta_low;
    j["scaled_delta_high"] = rep.scaled_delta_high;
    j["empirical_bias"] = rep.empirical_bias;
  }
  if (rep.connected_defined) {
    j["Delta_low"] = rep.Delta_low;
    j["Delta_high"] = rep.Delta_high;
    j["scaled_Delta_low"] = rep.scaled_Delta_low;
    j["scaled_Delta_high"] = rep.scaled_Delta_high;
  }
  if (rep.disconnected_defined && rep.connected_defined)
    j["empirical_gap"] = rep.empirical_gap;
  return j;
}

inline json to_json(const ClusterResult& res) {
  json j{{"c0", res.c0}, {"c1", res.c1}, {"assignments", res.assignments}};
  if (res.split_index)
    j["split_index"] = *res.split_index;
  else
    j["split_index"] = nullptr;
  return j;
}

// Shortest decimal round-trip representation, for byte-stable CSV output.
inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  double back;
  std::istringstream(os.str()) >> back;
  if (back == x) {
    for (int prec = 1; prec < 17; ++prec) {
      std::ostringstream shorter;
      shorter << std::setprecision(prec) << x;
      std::istringstream(shorter.str()) >> back;
      if (back == x) return shorter.str();
    }
  }
  return os.str();
}

// Sample-block export: one CSV row per probed node labelled "node_<id>",
// plus a JSON sidecar with the generation parameters.
inline void write_sample_block(const SampleBlock& block, const std::string& csv_path,
                               const std::string& sidecar_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  for (int r = 0; r < block.data.rows(); ++r) {
    csv << "node_" << block.s.indices[r];
    for (int c = 0; c < block.data.cols(); ++c)
      csv << ',' << format_double(block.data(r, c));
    csv << '\n';
  }
  json sidecar{{"n", block.data.cols()},
               {"sigma", block.sigma},
               {"seed", block.seed},
               {"s_indices", block.s.indices},
               {"xi_target", block.s.xi_target}};
  std::ofstream side(sidecar_path);
  if (!side) throw std::runtime_error("cannot open " + sidecar_path);
  side << sidecar.dump(2) << '\n';
}

inline SampleBlock read_sample_block(const std::string& csv_path,
                                     const std::string& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw std::runtime_error("cannot open " + sidecar_path);
  json sidecar = json::parse(side);
  SampleBlock block;
  block.sigma = sidecar.at("sigma").get<double>();
  block.seed = sidecar.at("seed").get<std::uint64_t>();
  block.s.indices = sidecar.at("s_indices").get<std::vector<int>>();
  block.s.xi_target = sidecar.value("xi_target", 0.0);
  const long n = sidecar.at("n").get<long>();
  block.data = Matrix(block.s.indices.size(), n);

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  std::string line;
  int row = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    if (row >= block.data.rows())
      throw std::runtime_error("read_sample_block: more rows than s_indices");
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // node label
    if (cell != "node_" + std::to_string(block.s.indices[row]))
      throw std::runtime_error("read_sample_block: row label mismatch: " + cell);
    for (long c = 0; c < n; ++c) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("read_sample_block: short row");
      block.data(row, c) = std::stod(cell);
    }
    ++row;
  }
  if (row != block.data.rows())
    throw std::runtime_error("read_sample_block: missing rows");
  return block;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace nettomo
