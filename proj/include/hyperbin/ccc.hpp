#ifndef HYPERBIN_CCC_HPP
#define HYPERBIN_CCC_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperbin/coding.hpp"

namespace hyperbin {

// Color label per symbol of one source's alphabet; total by construction.
using Coloring = std::vector<int>;

// Characteristic graph of one source: symbols x, x' are adjacent iff some
// supported y forces their function values apart, i.e. the receiver must be
// able to tell them apart.
struct CharacteristicGraph {
  int vertex_count = 0;
  std::set<std::pair<int, int>> edges;  // stored with first < second

  bool adjacent(int a, int b) const {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    return edges.count({a, b}) > 0;
  }
};

inline CharacteristicGraph characteristic_graph(const FunctionTable& table, int source) {
  if (source != 1 && source != 2)
    throw std::invalid_argument("characteristic_graph: source index must be 1 or 2");
  CharacteristicGraph g;
  g.vertex_count = source == 1 ? table.size1() : table.size2();
  const int other = source == 1 ? table.size2() : table.size1();
  for (int a = 0; a < g.vertex_count; ++a)
    for (int b = a + 1; b < g.vertex_count; ++b)
      for (int y = 0; y < other; ++y) {
        const bool sup_a = source == 1 ? table.supported(a, y) : table.supported(y, a);
        const bool sup_b = source == 1 ? table.supported(b, y) : table.supported(y, b);
        if (!sup_a || !sup_b) continue;
        const double fa = source == 1 ? table.value(a, y) : table.value(y, a);
        const double fb = source == 1 ? table.value(b, y) : table.value(y, b);
        if (fa != fb) {
          g.edges.insert({a, b});
          break;
        }
      }
  return g;
}

// Proper coloring: no edge joins two symbols of the same color.
inline bool is_valid_coloring(const CharacteristicGraph& graph, const Coloring& coloring) {
  if (static_cast<int>(coloring.size()) != graph.vertex_count)
    throw std::invalid_argument("is_valid_coloring: coloring must be total");
  for (const auto& [a, b] : graph.edges)
    if (coloring[static_cast<std::size_t>(a)] == coloring[static_cast<std::size_t>(b)]) return false;
  return true;
}

// Supported pairs grouped by their color signature (c1(x1), c2(x2)).
struct JointColoringFamily {
  std::vector<std::vector<std::pair<int, int>>> classes;
  Coloring coloring1;
  Coloring coloring2;
};

inline JointColoringFamily joint_classes(const Coloring& c1, const Coloring& c2,
                                         const FunctionTable& table) {
  if (static_cast<int>(c1.size()) != table.size1() || static_cast<int>(c2.size()) != table.size2())
    throw std::invalid_argument("joint_classes: colorings must be total");
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_signature;
  for (int x1 = 0; x1 < table.size1(); ++x1)
    for (int x2 = 0; x2 < table.size2(); ++x2)
      if (table.supported(x1, x2))
        by_signature[{c1[static_cast<std::size_t>(x1)], c2[static_cast<std::size_t>(x2)]}].push_back(
            {x1, x2});
  JointColoringFamily family;
  family.coloring1 = c1;
  family.coloring2 = c2;
  for (auto& [sig, points] : by_signature) family.classes.push_back(std::move(points));
  return family;
}

enum class ValidityMode { Enforce, Warn };

struct CccClassVerdict {
  std::vector<std::pair<int, int>> points;
  std::vector<int> component_of;           // per point, component id
  std::vector<std::set<double>> component_values;
  bool connected = false;
  bool constant_value = false;             // f constant across the class
  bool satisfied = false;                  // connected, or parts share one value
};

struct CccReport {
  std::vector<CccClassVerdict> classes;
  bool satisfied = false;
  std::vector<std::string> validity_warnings;
};

// Coloring Connectivity Condition check. A move inside a class changes one
// coordinate to a same-colored, non-adjacent symbol; for proper colorings
// this is exactly the one-coordinate (Hamming-1) walk, while improper
// groupings (Warn mode) lose the moves that cross an edge of the
// characteristic graph. A class passes when it is connected, or when its
// disconnected parts carry one and the same function value.
inline CccReport check_ccc(const JointColoringFamily& family, const FunctionTable& table,
                           ValidityMode mode = ValidityMode::Enforce) {
  const CharacteristicGraph g1 = characteristic_graph(table, 1);
  const CharacteristicGraph g2 = characteristic_graph(table, 2);
  CccReport report;
  for (int source = 1; source <= 2; ++source) {
    const CharacteristicGraph& g = source == 1 ? g1 : g2;
    const Coloring& c = source == 1 ? family.coloring1 : family.coloring2;
    if (static_cast<int>(c.size()) != g.vertex_count)
      throw std::invalid_argument("check_ccc: coloring must be total");
    for (const auto& [a, b] : g.edges)
      if (c[static_cast<std::size_t>(a)] == c[static_cast<std::size_t>(b)]) {
        const std::string msg = "source " + std::to_string(source) + ": edge (" +
                                std::to_string(a) + "," + std::to_string(b) +
                                ") joins same-colored symbols";
        if (mode == ValidityMode::Enforce) throw std::invalid_argument("check_ccc: " + msg);
        report.validity_warnings.push_back(msg);
      }
  }

  report.satisfied = true;
  for (const auto& points : family.classes) {
    CccClassVerdict verdict;
    verdict.points = points;
    const std::size_t m = points.size();
    verdict.component_of.assign(m, -1);

    const auto movable = [&](std::size_t i, std::size_t j) {
      const auto& [a1, a2] = points[i];
      const auto& [b1, b2] = points[j];
      if (a1 == b1 && a2 != b2) return !g2.adjacent(a2, b2);
      if (a2 == b2 && a1 != b1) return !g1.adjacent(a1, b1);
      return false;
    };

    int components = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (verdict.component_of[i] != -1) continue;
      std::vector<std::size_t> stack{i};
      verdict.component_of[i] = components;
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < m; ++j)
          if (verdict.component_of[j] == -1 && movable(cur, j)) {
            verdict.component_of[j] = components;
            stack.push_back(j);
          }
      }
      ++components;
    }

    verdict.component_values.assign(static_cast<std::size_t>(components), {});
    for (std::size_t i = 0; i < m; ++i)
      verdict.component_values[static_cast<std::size_t>(verdict.component_of[i])].insert(
          table.value(points[i].first, points[i].second));

    verdict.connected = components == 1;
    std::set<double> all_values;
    for (const auto& vs : verdict.component_values) all_values.insert(vs.begin(), vs.end());
    verdict.constant_value = all_values.size() <= 1;
    if (verdict.connected) {
      verdict.satisfied = true;
    } else {
      bool singletons = true;
      for (const auto& vs : verdict.component_values)
        if (vs.size() != 1) singletons = false;
      verdict.satisfied = singletons && all_values.size() == 1;
    }
    if (!verdict.satisfied) report.satisfied = false;
    report.classes.push_back(std::move(verdict));
  }
  return report;
}

// Ground-truth oracle: the pair of colorings decodes f iff f is constant on
// every joint coloring class over the support.
inline bool is_decodable(const Coloring& c1, const Coloring& c2, const FunctionTable& table) {
  const JointColoringFamily family = joint_classes(c1, c2, table);
  for (const auto& points : family.classes) {
    std::set<double> values;
    for (const auto& [x1, x2] : points) values.insert(table.value(x1, x2));
    if (values.size() > 1) return false;
  }
  return true;
}

}  // namespace hyperbin

#endif  // HYPERBIN_CCC_HPP
