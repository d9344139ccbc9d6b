#include "moodcrl/mdp/io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "moodcrl/errors.hpp"

namespace moodcrl::mdp {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const nlohmann::json& arr, const char* field, std::size_t line) {
  if (!arr.is_array()) {
    throw ValidationError("dataset line " + std::to_string(line) + ": '" + field +
                          "' must be an array");
  }
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& dataset) {
  dataset.validate();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& t = dataset.tuples[i];
    ordered_json line;
    line["s"] = to_json(t.s);
    line["a"] = to_json(t.a);
    line["s_next"] = to_json(t.s_next);
    line["r"] = t.r;
    line["episode"] = dataset.episodes[i];
    out << line.dump() << "\n";
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write dataset " + path.string());
  write_dataset(out, dataset);
}

Dataset read_dataset(std::istream& in) {
  Dataset ds;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json line;
    try {
      line = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    for (const char* key : {"s", "a", "s_next", "r", "episode"}) {
      if (!line.contains(key)) {
        throw ValidationError("dataset line " + std::to_string(line_no) + ": missing '" + key +
                              "'");
      }
    }
    TransitionTuple t;
    t.s = vector_from_json(line["s"], "s", line_no);
    t.a = vector_from_json(line["a"], "a", line_no);
    t.s_next = vector_from_json(line["s_next"], "s_next", line_no);
    t.r = line["r"].get<double>();
    if (ds.tuples.empty()) ds.layout = TupleLayout(t.s.size(), t.a.size());
    ds.push_back(std::move(t), line["episode"].get<int>());
  }
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  return read_dataset(in);
}

void write_graph(std::ostream& out, const CausalGraph& graph) {
  ordered_json doc;
  ordered_json names = ordered_json::array();
  for (Index i = 0; i < graph.dim(); ++i) {
    names.push_back(graph.names().empty() ? "x" + std::to_string(i)
                                          : graph.names()[static_cast<std::size_t>(i)]);
  }
  doc["names"] = names;
  ordered_json edges = ordered_json::array();
  for (const auto& [j, i] : graph.edges()) edges.push_back({j, i});
  doc["edges"] = edges;
  out << doc.dump(2) << "\n";
}

void save_graph(const std::filesystem::path& path, const CausalGraph& graph) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write graph " + path.string());
  write_graph(out, graph);
}

CausalGraph read_graph(std::istream& in, const TupleLayout& layout) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph file: ") + e.what());
  }
  require(doc.contains("names") && doc["names"].is_array(), "graph file: 'names' array required");
  require(doc.contains("edges") && doc["edges"].is_array(), "graph file: 'edges' array required");
  std::vector<std::string> names = doc["names"].get<std::vector<std::string>>();
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    require(e.is_array() && e.size() == 2, "graph file: each edge must be [from, to]");
    edges.emplace_back(e[0].get<Index>(), e[1].get<Index>());
  }
  require(static_cast<Index>(names.size()) == layout.dim(),
          "graph file has " + std::to_string(names.size()) + " names, tuple dimension is " +
              std::to_string(layout.dim()));
  return CausalGraph::from_edges(layout, edges, std::move(names));
}

CausalGraph load_graph(const std::filesystem::path& path, const TupleLayout& layout) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph " + path.string());
  return read_graph(in, layout);
}

}  // namespace moodcrl::mdp
