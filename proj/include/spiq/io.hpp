#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiq/circuit.hpp"
#include "spiq/hamiltonian.hpp"
#include "spiq/metrics.hpp"
#include "spiq/search.hpp"
#include "spiq/selection.hpp"
#include "spiq/tuner.hpp"

namespace spiq {

using json = nlohmann::json;  // alphabetical keys, deterministic dumps

// A Hamiltonian plus everything needed to decode its bitstrings back into a
// solution of the original problem.
struct Problem {
  IsingHamiltonian hamiltonian;
  json metadata;  // kind tag + instance data
  std::optional<double> known_optimal;
};

inline std::string bitstring_to_string(const Bitstring& z) {
  std::string s(z.size(), '0');
  for (std::size_t i = 0; i < z.size(); ++i) s[i] = z[i] ? '1' : '0';
  return s;
}

inline Bitstring string_to_bitstring(const std::string& s) {
  Bitstring z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bitstring: expected only 0/1");
    z[i] = s[i] == '1';
  }
  return z;
}

// --- problem file -----------------------------------------------------------
// {"num_qubits": n, "offset": f, "terms": [{"support": [...], "coeff": f}],
//  "metadata": {...}, "known_optimal": f|null}

inline json problem_to_json(const Problem& p) {
  json terms = json::array();
  for (const auto& t : p.hamiltonian.terms())
    terms.push_back({{"support", t.support}, {"coeff", t.coeff}});
  json doc;
  doc["num_qubits"] = p.hamiltonian.num_qubits();
  doc["offset"] = p.hamiltonian.offset();
  doc["terms"] = terms;
  doc["metadata"] = p.metadata;
  doc["known_optimal"] = p.known_optimal ? json(*p.known_optimal) : json(nullptr);
  return doc;
}

inline Problem problem_from_json(const json& doc) {
  std::vector<PauliZTerm> terms;
  for (const auto& t : doc.at("terms"))
    terms.emplace_back(t.at("coeff").get<double>(), t.at("support").get<std::vector<std::uint32_t>>());
  Problem p{IsingHamiltonian(doc.at("num_qubits").get<std::uint32_t>(),
                             doc.at("offset").get<double>(), std::move(terms)),
            doc.value("metadata", json::object()), std::nullopt};
  if (doc.contains("known_optimal") && !doc.at("known_optimal").is_null())
    p.known_optimal = doc.at("known_optimal").get<double>();
  return p;
}

// --- graph / hypergraph files -----------------------------------------------
// graph: {"n": n, "edges": [[u, v, w], ...]}

inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v, e.w});
  return json{{"n", g.num_nodes}, {"edges", edges}};
}

inline WeightedGraph graph_from_json(const json& doc) {
  WeightedGraph g;
  g.num_nodes = doc.at("n").get<std::uint32_t>();
  for (const auto& e : doc.at("edges"))
    g.edges.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<double>()});
  g.validate();
  return g;
}

inline json hypergraph_to_json(const HypergraphObjective& h) {
  json linear = json::array(), pairs = json::array(), triples = json::array();
  for (const auto& [i, w] : h.linear) linear.push_back({i, w});
  for (const auto& [ij, w] : h.pairs) pairs.push_back({ij.first, ij.second, w});
  for (const auto& [ijk, w] : h.triples) triples.push_back({ijk[0], ijk[1], ijk[2], w});
  return json{{"num_vars", h.num_vars}, {"linear", linear},   {"pairs", pairs},
              {"triples", triples},     {"subset_size", h.subset_size}, {"lagrange", h.lagrange}};
}

inline HypergraphObjective hypergraph_from_json(const json& doc) {
  HypergraphObjective h;
  h.num_vars = doc.at("num_vars").get<std::uint32_t>();
  h.subset_size = doc.at("subset_size").get<std::uint32_t>();
  h.lagrange = doc.value("lagrange", 0.0);
  for (const auto& e : doc.value("linear", json::array()))
    h.linear[e.at(0).get<std::uint32_t>()] = e.at(1).get<double>();
  for (const auto& e : doc.value("pairs", json::array()))
    h.pairs[{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>()}] = e.at(2).get<double>();
  for (const auto& e : doc.value("triples", json::array()))
    h.triples[{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
               e.at(2).get<std::uint32_t>()}] = e.at(3).get<double>();
  h.validate();
  return h;
}

// --- ansatz -----------------------------------------------------------------

inline json ansatz_to_json(const MaQaoaAnsatz& a) {
  json gates = json::array();
  for (const auto& g : a.gates()) {
    json item;
    switch (g.kind) {
      case GateKind::HadamardWall: item["kind"] = "hadamard_wall"; break;
      case GateKind::CostRotation:
        item["kind"] = "cost_rotation";
        item["term"] = g.index;
        item["support"] = a.clause_support(g.index);
        break;
      case GateKind::MixerRotation:
        item["kind"] = "mixer_rotation";
        item["qubit"] = g.index;
        break;
    }
    item["layer"] = g.layer;
    if (g.param_id >= 0) item["param_id"] = g.param_id;
    gates.push_back(std::move(item));
  }
  return json{{"num_qubits", a.num_qubits()},
              {"depth", a.depth()},
              {"num_params", a.num_params()},
              {"gates", gates}};
}

// --- pool / seeds / traces / metrics ----------------------------------------

inline std::string pool_to_jsonl(const CandidatePool& pool) {
  std::ostringstream out;
  for (const auto& e : pool.sorted_entries())
    out << json{{"quarters", e.quarters}, {"energy", e.energy}}.dump() << '\n';
  return out.str();
}

inline CandidatePool pool_from_jsonl(const std::string& content, std::size_t capacity = 1'000'000) {
  CandidatePool pool(capacity);
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json doc = json::parse(line);
    pool.insert(doc.at("quarters").get<QuarterTurnPoint>(), doc.at("energy").get<double>());
  }
  return pool;
}

inline json seed_set_to_json(const SeedSet& s) {
  json seeds = json::array();
  for (const auto& seed : s.seeds) {
    json item{{"quarters", seed.quarters}, {"energy", seed.energy}};
    item["grad_norm"] = seed.grad_norm ? json(*seed.grad_norm) : json(nullptr);
    item["cluster_id"] = seed.cluster_id ? json(*seed.cluster_id) : json(nullptr);
    seeds.push_back(std::move(item));
  }
  return json{{"method", to_string(s.method)}, {"seeds", seeds}};
}

inline SeedSet seed_set_from_json(const json& doc) {
  SeedSet s;
  s.method = doc.at("method").get<std::string>() == "k_gaps" ? SelectionMethod::KGaps
                                                             : SelectionMethod::FixedInterval;
  for (const auto& item : doc.at("seeds")) {
    Seed seed;
    seed.quarters = item.at("quarters").get<QuarterTurnPoint>();
    seed.energy = item.at("energy").get<double>();
    if (item.contains("grad_norm") && !item.at("grad_norm").is_null())
      seed.grad_norm = item.at("grad_norm").get<double>();
    if (item.contains("cluster_id") && !item.at("cluster_id").is_null())
      seed.cluster_id = item.at("cluster_id").get<std::uint32_t>();
    s.seeds.push_back(std::move(seed));
  }
  return s;
}

inline json trace_to_json(const TuneTrace& t) {
  json curve = json::array();
  for (const auto& [eval, e] : t.best_curve) curve.push_back({eval, e});
  return json{{"provenance", to_string(t.provenance)},
              {"start", t.start},
              {"trace", curve},
              {"final_point", t.final_point},
              {"final_energy", t.final_energy},
              {"evals_used", t.evals_used}};
}

inline json metrics_to_json(const MetricsReport& m) {
  const auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json doc;
  doc["accuracy"] = opt(m.accuracy);
  doc["accuracy_normalized"] = m.accuracy_normalized;
  doc["reduction_factor"] = opt(m.reduction_factor);
  doc["relative_improvement"] = opt(m.relative_improvement);
  doc["improvement_gap"] = opt(m.improvement_gap);
  doc["e_init"] = opt(m.e_init);
  doc["e_opt"] = opt(m.e_opt);
  doc["e_max"] = opt(m.e_max);
  doc["e_rand"] = opt(m.e_rand);
  doc["distinct_random"] = opt(m.distinct_random);
  doc["distinct_init"] = opt(m.distinct_init);
  doc["shots"] = m.shots;
  doc["master_seed"] = m.master_seed;
  return doc;
}

// --- file helpers -----------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) { return json::parse(read_text_file(path)); }

}  // namespace spiq
