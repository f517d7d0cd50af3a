#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxforge/extint.hpp"

namespace coxforge {

struct DiagramEdge {
  std::string i;
  std::string j;
  ExtInt m;
};

// A diagram in "chain" shape: all consecutive bonds 3 except the last,
// which is m with 4 <= m < infinity. `chain` lists type indices in chain
// order, the m-bond between the last two entries.
struct CnShape {
  int n;
  int m;
  std::vector<int> chain;
};

// Symmetric bond matrix over an ordered finite type set. Entries are >= 2
// or infinity; pairs not mentioned by an edge default to 2. Two types are
// adjacent when their bond is >= 3.
class CoxeterDiagram {
 public:
  CoxeterDiagram(std::vector<std::string> types,
                 const std::vector<DiagramEdge>& edges);

  static CoxeterDiagram from_json(const nlohmann::json& j);
  static CoxeterDiagram parse(const std::string& text);
  nlohmann::json to_json() const;

  int rank() const { return static_cast<int>(types_.size()); }
  const std::vector<std::string>& types() const { return types_; }
  const std::string& type_label(int i) const { return types_.at(i); }
  int type_index(const std::string& label) const;  // throws on unknown label

  ExtInt bond(int i, int j) const;  // throws on i == j or out of range
  bool adjacent(int i, int j) const;
  bool adjacent(const std::string& i, const std::string& j) const;

  // True when some triple of distinct types carries bonds 3, 3, 2.
  bool has_a3_subdiagram() const;

  std::optional<CnShape> cn_shape() const;

  bool operator==(const CoxeterDiagram&) const = default;

 private:
  std::vector<std::string> types_;
  std::vector<ExtInt> bonds_;  // rank x rank, row-major, diagonal unused
};

}  // namespace coxforge
