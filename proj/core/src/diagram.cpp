#include "coxforge/diagram.hpp"

#include <algorithm>
#include <set>

#include "coxforge/error.hpp"

namespace coxforge {

namespace {

ExtInt bond_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return ExtInt::infinity();
    throw Error("diagram: bond label must be an integer or \"inf\"");
  }
  if (!v.is_number_integer())
    throw Error("diagram: bond label must be an integer or \"inf\"");
  long long m = v.get<long long>();
  if (m < 3)
    throw Error("diagram: explicit edges carry only m >= 3 (omit pairs with m = 2)");
  if (m > 1000000) throw Error("diagram: bond label out of range");
  return ExtInt(m);
}

}  // namespace

CoxeterDiagram::CoxeterDiagram(std::vector<std::string> types,
                               const std::vector<DiagramEdge>& edges)
    : types_(std::move(types)) {
  if (types_.empty()) throw Error("diagram: empty type set");
  std::set<std::string> seen;
  for (const auto& t : types_)
    if (!seen.insert(t).second)
      throw Error("diagram: duplicate node label '" + t + "'");

  const int k = rank();
  bonds_.assign(static_cast<size_t>(k) * k, ExtInt(2));
  for (const auto& e : edges) {
    int a = type_index(e.i);
    int b = type_index(e.j);
    if (a == b) throw Error("diagram: edge from node '" + e.i + "' to itself");
    if (e.m < ExtInt(3))
      throw Error("diagram: explicit edges carry only m >= 3");
    ExtInt& slot = bonds_[static_cast<size_t>(a) * k + b];
    if (slot != ExtInt(2) && slot != e.m)
      throw Error("diagram: conflicting duplicate edge between '" + e.i +
                  "' and '" + e.j + "'");
    slot = e.m;
    bonds_[static_cast<size_t>(b) * k + a] = e.m;
  }
}

int CoxeterDiagram::type_index(const std::string& label) const {
  for (int i = 0; i < rank(); ++i)
    if (types_[i] == label) return i;
  throw Error("diagram: unknown type '" + label + "'");
}

ExtInt CoxeterDiagram::bond(int i, int j) const {
  if (i < 0 || j < 0 || i >= rank() || j >= rank())
    throw Error("diagram: type index out of range");
  if (i == j) throw Error("diagram: bond undefined for i = j");
  return bonds_[static_cast<size_t>(i) * rank() + j];
}

bool CoxeterDiagram::adjacent(int i, int j) const { return bond(i, j) >= ExtInt(3); }

bool CoxeterDiagram::adjacent(const std::string& i, const std::string& j) const {
  return adjacent(type_index(i), type_index(j));
}

bool CoxeterDiagram::has_a3_subdiagram() const {
  const int k = rank();
  for (int mid = 0; mid < k; ++mid)
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        if (a == mid || b == mid) continue;
        if (bond(a, mid) == ExtInt(3) && bond(mid, b) == ExtInt(3) &&
            bond(a, b) == ExtInt(2))
          return true;
      }
  return false;
}

std::optional<CnShape> CoxeterDiagram::cn_shape() const {
  const int k = rank();
  if (k < 3) return std::nullopt;

  // Chain test on the adjacency graph: two ends of degree 1, rest degree 2.
  std::vector<std::vector<int>> nbr(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && adjacent(i, j)) nbr[i].push_back(j);

  std::vector<int> ends;
  for (int i = 0; i < k; ++i) {
    if (nbr[i].size() == 1) ends.push_back(i);
    else if (nbr[i].size() != 2) return std::nullopt;
  }
  if (ends.size() != 2) return std::nullopt;

  auto walk = [&](int start) {
    std::vector<int> order{start};
    int prev = -1, cur = start;
    while (static_cast<int>(order.size()) < k) {
      int next = -1;
      for (int w : nbr[cur])
        if (w != prev) { next = w; break; }
      if (next < 0) break;
      order.push_back(next);
      prev = cur;
      cur = next;
    }
    return order;
  };

  for (int e : ends) {
    std::vector<int> order = walk(e);
    if (static_cast<int>(order.size()) != k) return std::nullopt;  // disconnected
    bool good = true;
    for (int p = 0; p + 1 < k - 1 && good; ++p)
      if (bond(order[p], order[p + 1]) != ExtInt(3)) good = false;
    if (!good) continue;
    ExtInt last = bond(order[k - 2], order[k - 1]);
    if (last.is_infinite() || last < ExtInt(4)) continue;
    return CnShape{k, static_cast<int>(last.value()), order};
  }
  return std::nullopt;
}

CoxeterDiagram CoxeterDiagram::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("diagram: expected a JSON object");
  if (j.contains("version") && j["version"] != 1)
    throw Error("diagram: unknown version");
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw Error("diagram: missing \"nodes\" array");
  std::vector<std::string> nodes;
  for (const auto& n : j["nodes"]) {
    if (!n.is_string()) throw Error("diagram: node labels must be strings");
    nodes.push_back(n.get<std::string>());
  }
  std::vector<DiagramEdge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw Error("diagram: \"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("m"))
        throw Error("diagram: edge entries need fields i, j, m");
      edges.push_back({e["i"].get<std::string>(), e["j"].get<std::string>(),
                       bond_from_json(e["m"])});
    }
  }
  return CoxeterDiagram(std::move(nodes), edges);
}

CoxeterDiagram CoxeterDiagram::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("diagram: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json CoxeterDiagram::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["nodes"] = types_;
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < rank(); ++i)
    for (int k = i + 1; k < rank(); ++k) {
      ExtInt m = bond(i, k);
      if (m < ExtInt(3)) continue;
      nlohmann::json e;
      e["i"] = types_[i];
      e["j"] = types_[k];
      if (m.is_infinite()) e["m"] = "inf";
      else e["m"] = m.value();
      edges.push_back(e);
    }
  j["edges"] = edges;
  return j;
}

}  // namespace coxforge
